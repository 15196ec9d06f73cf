// Copyright 2026 The abcpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABCPT_ERROR_HPP
#define ABCPT_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace abcpt {

/// Violated precondition or internal invariant. Indicates a programming error
/// on the caller's side, never a recoverable runtime condition.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Invalid user input (schedules, configuration values).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Base for failures that happen while a sampler or simulator is running.
/// `component()` names the part of the system that gave up.
class RuntimeFailure : public std::runtime_error {
 public:
  RuntimeFailure(std::string component, const std::string& what)
      : std::runtime_error(what), component_(std::move(component)) {}

  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

/// Rejection sampling hit its attempt cap before producing the requested
/// number of samples.
class RejectionCapExceeded : public RuntimeFailure {
 public:
  RejectionCapExceeded(double epsilon, std::uint64_t cap)
      : RuntimeFailure("abc_rejection",
                       "rejection sampler exceeded " + std::to_string(cap) +
                           " attempts at tolerance " + std::to_string(epsilon)),
        epsilon_(epsilon) {}

  double epsilon() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

/// The epidemic simulator ran past its event budget.
class MaxEventsExceeded : public RuntimeFailure {
 public:
  explicit MaxEventsExceeded(std::uint64_t max_events)
      : RuntimeFailure("simulate_epidemic", "epidemic simulation exceeded " +
                                                std::to_string(max_events) + " events") {}
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace abcpt

#endif  // ABCPT_ERROR_HPP
