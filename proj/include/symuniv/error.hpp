#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symuniv {

enum class Errc {
  invalid_argument,
  unsupported_weight,
  unsupported_kind,
  deligne_violation,
  numeric_instability,
  insufficient_cache,
  cache_corrupt,
  out_of_region,
  contour_violation,
  hypothesis_violation,
  non_vanishing_violation,
  resolution_error,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// Domain failure. The CLI maps these to exit status 1 and a JSON error record.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace symuniv
