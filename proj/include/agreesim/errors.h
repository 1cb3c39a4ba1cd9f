/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AGREESIM_ERRORS_H_
#define AGREESIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace agreesim {

// Base of every error raised by the library. The C API maps each subclass
// onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (dataset lines, model specs, config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inconsistent combination of options, e.g. a conflation model without a
// conflation matrix.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A statistic that has no value for the given input (single-class AUC,
// agreement without annotator pairs).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace agreesim

#endif  // AGREESIM_ERRORS_H_
