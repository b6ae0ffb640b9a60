//
// Copyright 2026 The dppca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPPCA_ERRORS_H_
#define DPPCA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dppca {

// Base class for every error raised by the library. Callers that only care
// about "something went wrong" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// An iterative numerical routine failed to reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Requested dimensions exceed what can be addressed.
class SizingError : public Error {
 public:
  using Error::Error;
};

// A privacy budget is invalid or cannot be split as requested.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A formula was evaluated outside the domain where its logarithms are defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Generator or configuration parameters are infeasible.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operation needs a matrix of rank at least one.
class RankError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace dppca

#endif  // DPPCA_ERRORS_H_
