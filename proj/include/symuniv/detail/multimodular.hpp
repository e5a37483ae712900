#pragma once

// Word-size modular arithmetic used to run exact integer series arithmetic
// as a bundle of residue computations followed by a CRT lift.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace symuniv::detail {

using u128 = unsigned __int128;
using i128 = __int128;

// Montgomery arithmetic modulo an odd prime below 2^62.
class Montgomery {
 public:
  explicit Montgomery(std::uint64_t mod);

  std::uint64_t mod() const noexcept { return mod_; }
  std::uint64_t to(std::uint64_t a) const noexcept { return mul(a, r2_); }
  std::uint64_t from(std::uint64_t a) const noexcept { return reduce(a); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return reduce(static_cast<u128>(a) * b);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + mod_ - b;
  }
  std::uint64_t pow(std::uint64_t base_mont, std::uint64_t e) const noexcept;

 private:
  std::uint64_t reduce(u128 t) const noexcept {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const std::uint64_t u = static_cast<std::uint64_t>((t + static_cast<u128>(m) * mod_) >> 64);
    return u >= mod_ ? u - mod_ : u;
  }

  std::uint64_t mod_;
  std::uint64_t neg_inv_;  // -mod^{-1} mod 2^64
  std::uint64_t r2_;       // 2^128 mod mod
};

struct NttPrime {
  std::uint64_t p;
  std::uint64_t generator;  // primitive root mod p
};

// Largest transform size supported by the prime list (as a power of two).
inline constexpr unsigned kNttMaxLog2 = 26;

// The k-th NTT-friendly prime p = c * 2^26 + 1 < 2^62, counting downward.
// Generated once on first use and cached.
const NttPrime& ntt_prime(std::size_t index);

// Primes needed so that their product exceeds 2^(bits + 1): enough to
// reconstruct any signed integer whose absolute value is below 2^bits.
std::size_t primes_for_bits(double bits);

std::uint64_t reduce_mpz(const mpz_class& x, std::uint64_t p);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept;
std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) noexcept;

// Cyclic-free linear convolution modulo one NTT prime, truncated to
// out_len terms. Inputs and output are plain residues in [0, p).
std::vector<std::uint64_t> convolve_mod(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                        std::size_t out_len, const NttPrime& prime);

// Garner CRT: residues[i][n] is the residue of coefficient n modulo
// ntt_prime(i). Returns the symmetric (signed) lift of every coefficient.
std::vector<mpz_class> crt_lift(const std::vector<std::vector<std::uint64_t>>& residues);

}  // namespace symuniv::detail
