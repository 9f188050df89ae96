#pragma once

#include <stdexcept>
#include <string>

namespace depjudge {

// Diagnostic codes for every failure the library reports. The CLI prints
// what() as a single line; tests match on code().
enum class Errc {
  duplicate_label,
  scale_too_small,
  unknown_label,
  duplicate_opinion,
  gap_in_arrival_order,
  empty_dataset,
  invalid_timestamp,
  score_out_of_range,
  empty_input,
  length_mismatch,
  wrong_mode,
  key_mismatch,
  missing_truth,
  enumeration_too_large,
  zero_evidence,
  file_not_found,
  parse_error,
  usage_error,
  config_invalid,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace depjudge
