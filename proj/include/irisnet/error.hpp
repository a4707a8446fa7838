// Copyright 2026 The irisnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRISNET_ERROR_HPP_
#define IRISNET_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace irisnet {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: missing files, malformed formats, wrong shapes.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or other numeric breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Two masks with no overlapping valid bit.
class UnscorableComparison : public DataError {
 public:
  using DataError::DataError;
};

/// Shift search requested on a sampling map that is not a regular grid.
class ShiftUnsupported : public DataError {
 public:
  using DataError::DataError;
};

/// A triplet whose combined sampled mask has no valid bit.
class DegenerateTriplet : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace irisnet

#endif  // IRISNET_ERROR_HPP_
