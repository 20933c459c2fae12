#pragma once

#include <stdexcept>
#include <string>

namespace luckmeter {

enum class errc {
  length_mismatch,
  zero_variance,
  invalid_input,
  degenerate_margin,
  insufficient_sample,
  degenerate_r,
  non_positive_range,
  invalid_counts,
  threshold_out_of_range,
  no_positives,
  no_negatives,
  non_finite_score,
  malformed_header,
  bad_label,
  bad_score,
  duplicate_id,
  invalid_params,
  empty_career,
  empty_curve,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message, long line = 0);

  errc code() const noexcept { return code_; }
  // 1-based input line for CSV/config errors, 0 when not applicable
  long line() const noexcept { return line_; }

 private:
  errc code_;
  long line_;
};

[[noreturn]] void raise(errc code, const std::string& message, long line = 0);

}  // namespace luckmeter
