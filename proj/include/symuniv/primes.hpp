#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace symuniv {

// All primes up to a limit, from a bit-packed sieve over odd numbers.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  std::uint32_t operator[](std::size_t i) const noexcept { return primes_[i]; }

  bool is_prime(std::uint64_t n) const;
  // pi(x), the number of primes <= x; x may not exceed limit().
  std::size_t count_upto(std::uint64_t x) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> odd_composite_;  // bit i <-> 2i+1
  std::vector<std::uint32_t> primes_;
};

// Smallest-prime-factor table for factorizing every n <= limit.
class SpfTable {
 public:
  explicit SpfTable(std::uint32_t limit);

  std::uint32_t limit() const noexcept { return limit_; }
  // spf(1) == 1 by convention.
  std::uint32_t spf(std::uint32_t n) const noexcept { return spf_[n]; }
  // Largest power of spf(n) dividing n.
  std::uint32_t spf_power(std::uint32_t n) const noexcept { return spf_power_[n]; }
  bool is_prime(std::uint32_t n) const noexcept { return n >= 2 && spf_[n] == n; }

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> spf_power_;
};

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n) noexcept;

}  // namespace symuniv
