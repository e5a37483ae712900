#include "symuniv/error.hpp"

namespace symuniv {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::unsupported_weight: return "unsupported-weight";
    case Errc::unsupported_kind: return "unsupported-kind";
    case Errc::deligne_violation: return "deligne-violation";
    case Errc::numeric_instability: return "numeric-instability";
    case Errc::insufficient_cache: return "insufficient-cache";
    case Errc::cache_corrupt: return "cache-corrupt";
    case Errc::out_of_region: return "out-of-region";
    case Errc::contour_violation: return "contour-violation";
    case Errc::hypothesis_violation: return "hypothesis-violation";
    case Errc::non_vanishing_violation: return "non-vanishing-violation";
    case Errc::resolution_error: return "resolution-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace symuniv
