/*
 * Copyright 2026 The cxrlt Authors.
 *
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

#pragma once

#include <stdexcept>
#include <string>

namespace cxrlt {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or contradictory configuration (unknown keys, bad values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A manifest or other input file violates its declared schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A named entity (dataset, label, stage) does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's contract (shape mismatch, range).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Two artifacts that must share a binding (registry, shape) do not.
class IncompatibilityError : public Error {
 public:
  using Error::Error;
};

/// A split could not be produced (e.g. fewer patients than splits).
class SplitError : public Error {
 public:
  using Error::Error;
};

/// Input data failed a semantic validation check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or decode failure; the message names the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A checkpoint could not be applied to a model.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Requested labels are not expressible by the provided templates.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace cxrlt
