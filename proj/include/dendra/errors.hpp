// Copyright 2026 The Dendra Authors.
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

#ifndef DENDRA_ERRORS_HPP
#define DENDRA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dendra {

enum class ErrorCode {
  invalid_argument,
  out_of_range,
  non_finite_weight,
  already_connected,
  would_create_cycle,
  duplicate_edge,
  duplicate_rank_key,
  no_such_edge,
  no_such_component,
  not_connected,
  same_vertex,
  same_component,
  non_monotone_path,
  non_increasing_queries,
  cycle_detected,
  heap_violation,
  not_a_star,
  not_an_end,
  oracle_mismatch,
  parse_error,
  verify_mismatch,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dendra

#endif  // DENDRA_ERRORS_HPP
