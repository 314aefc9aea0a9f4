#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbpairs {

enum class Errc {
  malformed_record,
  unknown_stock,
  empty_sequence,
  missing_history,
  incomplete_book,
  dimension_mismatch,
  zero_state,
  unknown_pair,
  orphan_report,
  universe_too_large,
  incomplete_round_trip,
  insufficient_data,
  invalid_spec,
  invalid_config,
  io,
};

std::string_view to_string(Errc code);

// Every library failure surfaces as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sbpairs
