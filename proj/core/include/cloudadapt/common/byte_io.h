// Copyright 2026 The CloudAdapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLOUDADAPT_COMMON_BYTE_IO_H_
#define CLOUDADAPT_COMMON_BYTE_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cloudadapt {

using Bytes = std::vector<uint8_t>;

// Little-endian encoders. All on-disk integers and floats in this library
// are little-endian regardless of host byte order.
void AppendU16(Bytes& out, uint16_t v);
void AppendU32(Bytes& out, uint32_t v);
void AppendU64(Bytes& out, uint64_t v);
void AppendF32(Bytes& out, float v);
void AppendF32s(Bytes& out, std::span<const float> values);

// Sequential little-endian decoder over a byte span. Every read is bounds
// checked and throws FormatError on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t ReadU8();
  uint16_t ReadU16();
  uint32_t ReadU32();
  uint64_t ReadU64();
  float ReadF32();
  void ReadF32s(std::span<float> out);

  size_t position() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Require(size_t n) const;

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

uint32_t FloatBits(float v);
float FloatFromBits(uint32_t bits);

Bytes ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_COMMON_BYTE_IO_H_
