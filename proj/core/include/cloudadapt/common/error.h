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

#ifndef CLOUDADAPT_COMMON_ERROR_H_
#define CLOUDADAPT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace cloudadapt {

// Base of every error thrown by the library. Callers that only need to
// report failures can catch this; the subclasses exist so tests and the CLI
// can tell the failure classes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes, lengths or geometry that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside its documented domain.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated or inconsistent on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A sparse delta built against a different base model.
class FingerprintMismatchError : public Error {
 public:
  using Error::Error;
};

// A sparse update that touches parameters outside its mask.
class MaskViolationError : public Error {
 public:
  using Error::Error;
};

// Loss, entropy or gradient became NaN/Inf during optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cloudadapt

#endif  // CLOUDADAPT_COMMON_ERROR_H_
