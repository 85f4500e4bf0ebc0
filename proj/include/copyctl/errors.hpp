// Copyright 2026 The copyctl Authors.
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

#ifndef COPYCTL_ERRORS_HPP_
#define COPYCTL_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace copyctl {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define COPYCTL_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

COPYCTL_DEFINE_ERROR(InvalidSource);
COPYCTL_DEFINE_ERROR(ShapeMismatch);
COPYCTL_DEFINE_ERROR(InvalidStep);
COPYCTL_DEFINE_ERROR(EmptyHypothesis);
COPYCTL_DEFINE_ERROR(FormatError);
COPYCTL_DEFINE_ERROR(ValidationError);
COPYCTL_DEFINE_ERROR(InvalidConfig);
COPYCTL_DEFINE_ERROR(SpaceTooLarge);
COPYCTL_DEFINE_ERROR(EmptyCorpus);
COPYCTL_DEFINE_ERROR(InputError);

#undef COPYCTL_DEFINE_ERROR

// A step model returned output that violates the StepOutput contract.
// Carries the decode step and the offending prefix for reporting.
class ModelOutputError : public Error {
 public:
  ModelOutputError(const std::string& what, int step, std::string prefix)
      : Error(what), step_(step), prefix_(std::move(prefix)) {}

  int step() const { return step_; }
  const std::string& prefix() const { return prefix_; }

 private:
  int step_;
  std::string prefix_;
};

}  // namespace copyctl

#endif  // COPYCTL_ERRORS_HPP_
