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

#include "cloudadapt/common/byte_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cloudadapt/common/error.h"
#include "cloudadapt/common/fnv1a.h"

namespace cloudadapt {

uint32_t FloatBits(float v) { return std::bit_cast<uint32_t>(v); }
float FloatFromBits(uint32_t bits) { return std::bit_cast<float>(bits); }

void AppendU16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void AppendU32(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void AppendU64(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void AppendF32(Bytes& out, float v) { AppendU32(out, FloatBits(v)); }

void AppendF32s(Bytes& out, std::span<const float> values) {
  out.reserve(out.size() + values.size() * 4);
  for (float v : values) AppendF32(out, v);
}

void ByteReader::Require(size_t n) const {
  if (remaining() < n) {
    throw FormatError("truncated input: need " + std::to_string(n) +
                      " bytes at offset " + std::to_string(pos_) + ", have " +
                      std::to_string(remaining()));
  }
}

uint8_t ByteReader::ReadU8() {
  Require(1);
  return bytes_[pos_++];
}

uint16_t ByteReader::ReadU16() {
  Require(2);
  const uint16_t v = static_cast<uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

uint32_t ByteReader::ReadU32() {
  Require(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

uint64_t ByteReader::ReadU64() {
  Require(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

float ByteReader::ReadF32() { return FloatFromBits(ReadU32()); }

void ByteReader::ReadF32s(std::span<float> out) {
  Require(out.size() * 4);
  for (float& v : out) v = ReadF32();
}

uint64_t FingerprintFloats(std::span<const float> values) {
  uint64_t hash = kFnv1aOffsetBasis;
  uint8_t le[4];
  for (float v : values) {
    const uint32_t bits = FloatBits(v);
    for (int i = 0; i < 4; ++i) le[i] = static_cast<uint8_t>(bits >> (8 * i));
    hash = Fnv1a64(le, hash);
  }
  return hash;
}

Bytes ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  const Bytes bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  WriteFileBytes(path, std::span<const uint8_t>(
                           reinterpret_cast<const uint8_t*>(text.data()),
                           text.size()));
}

}  // namespace cloudadapt
