// Copyright 2026 The BinomialHash Authors
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

namespace binomial {

// Cluster size outside [1, 2^62].
class InvalidClusterSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// LookupParams with omega outside [1, 64].
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// highest_one_bit_index(0).
class UndefinedDepth : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Balance-model formula evaluated outside the range where it is defined.
class ModelDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller-side misuse of the simulation or CLI layer (non-adjacent resize
// steps, malformed ranges, too few repetitions).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace binomial
