#pragma once

#include <string>
#include <vector>

namespace luckmeter {

// One line of the verification table: a bundled reference value recomputed
// from the embedded benchmark and the closed forms.
struct ReproRow {
  std::string label;
  double reference = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool disputed = false;  // printed but never fails the run
  bool pass = false;
};

std::vector<ReproRow> reproduce_rows();

// true when every non-disputed row passes
bool reproduce_ok(const std::vector<ReproRow>& rows);

std::string reproduce_table(const std::vector<ReproRow>& rows);
std::string reproduce_json(const std::vector<ReproRow>& rows);

}  // namespace luckmeter
