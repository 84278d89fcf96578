// xdiar/error.h

// Copyright 2026  xdiar authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef XDIAR_ERROR_H_
#define XDIAR_ERROR_H_

#include <stdexcept>
#include <string>

namespace xdiar {

// Distinct failure kinds so callers can react to (and tests can assert on)
// the specific condition rather than parsing messages.
enum class errc {
  dimension_mismatch,
  count_mismatch,
  non_finite_value,
  malformed_header,
  malformed_line,
  invalid_argument,
  singular_matrix,
  single_class,
  insufficient_data,
  empty_input,
  timeline_mismatch,
  empty_reference,
  io_failure,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace xdiar

#endif  // XDIAR_ERROR_H_
