// Copyright 2026 The hcontent Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace hcontent {

// Input outside an operation's domain. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Requested grid exceeds the memory budget.
class CapacityError : public ValidationError {
 public:
  explicit CapacityError(const std::string& what) : ValidationError(what) {}
};

// A certified lower bound exceeded a certified upper bound. This can only
// happen through a bug; the message carries both certificates. Exit code 3.
class BracketInversion : public std::logic_error {
 public:
  BracketInversion(const std::string& what, std::string lower_certificate,
                   std::string upper_certificate)
      : std::logic_error(what),
        lower_certificate_(std::move(lower_certificate)),
        upper_certificate_(std::move(upper_certificate)) {}

  const std::string& lower_certificate() const { return lower_certificate_; }
  const std::string& upper_certificate() const { return upper_certificate_; }

 private:
  std::string lower_certificate_;
  std::string upper_certificate_;
};

namespace detail {
inline void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}
}  // namespace detail

}  // namespace hcontent
