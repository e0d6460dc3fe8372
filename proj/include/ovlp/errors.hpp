// Copyright 2026 The ovlp Authors.
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

#ifndef OVLP_ERRORS_HPP
#define OVLP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ovlp {

/// Raised when an input violates a mathematical precondition (non-Hermitian
/// where Hermitian is required, rank-deficient reference state, p < 1, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ovlp

#endif  // OVLP_ERRORS_HPP
