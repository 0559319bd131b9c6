// include/listen/errors.hpp

// Copyright 2026  The listen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LISTEN_ERRORS_HPP_
#define LISTEN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace listen {

// Base of every error raised by the library. The CLI maps the three
// families below onto exit codes 2 (config), 3 (data) and 4 (numeric).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed RIFF/WAVE container.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class UnsupportedCodecError : public DataError {
 public:
  using DataError::DataError;
};

class ManifestError : public DataError {
 public:
  using DataError::DataError;
};

class VocabularyError : public DataError {
 public:
  using DataError::DataError;
};

class MagicMismatchError : public DataError {
 public:
  using DataError::DataError;
};

class TruncatedError : public DataError {
 public:
  using DataError::DataError;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (e.g. a non one-hot target
// passed to the softmax cross entropy).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace listen

#endif  // LISTEN_ERRORS_HPP_
