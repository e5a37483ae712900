#include "symuniv/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symuniv/error.hpp"

namespace symuniv {

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit > (std::uint64_t{1} << 32)) {
    throw Error(Errc::invalid_argument, "prime table limit too large: " + std::to_string(limit));
  }
  const std::uint64_t odd_count = (limit + 1) / 2;  // odd numbers 1, 3, ..., <= limit
  odd_composite_.assign((odd_count + 63) / 64, 0);
  auto mark = [this](std::uint64_t i) { odd_composite_[i >> 6] |= std::uint64_t{1} << (i & 63); };
  auto marked = [this](std::uint64_t i) { return (odd_composite_[i >> 6] >> (i & 63)) & 1u; };
  if (odd_count > 0) mark(0);  // 1 is not prime
  for (std::uint64_t i = 1;; ++i) {
    const std::uint64_t p = 2 * i + 1;
    if (p * p > limit) break;
    if (marked(i)) continue;
    for (std::uint64_t j = (p * p) / 2; j < odd_count; j += p) mark(j);
  }
  if (limit >= 2) primes_.push_back(2);
  for (std::uint64_t i = 1; i < odd_count; ++i) {
    if (!marked(i)) primes_.push_back(static_cast<std::uint32_t>(2 * i + 1));
  }
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n > limit_) throw Error(Errc::insufficient_cache, "prime table does not reach " + std::to_string(n));
  if (n == 2) return true;
  if (n < 2 || n % 2 == 0) return false;
  const std::uint64_t i = n / 2;
  return ((odd_composite_[i >> 6] >> (i & 63)) & 1u) == 0;
}

std::size_t PrimeTable::count_upto(std::uint64_t x) const {
  if (x > limit_) throw Error(Errc::insufficient_cache, "prime table does not reach " + std::to_string(x));
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

SpfTable::SpfTable(std::uint32_t limit) : limit_(limit), spf_(limit + 1, 0), spf_power_(limit + 1, 0) {
  if (limit >= 1) {
    spf_[1] = 1;
    spf_power_[1] = 1;
  }
  std::vector<std::uint32_t> primes;
  for (std::uint32_t n = 2; n <= limit; ++n) {
    if (spf_[n] == 0) {
      spf_[n] = n;
      primes.push_back(n);
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t q = std::uint64_t{p} * n;
      if (p > spf_[n] || q > limit) break;
      spf_[q] = p;
    }
  }
  for (std::uint32_t n = 2; n <= limit; ++n) {
    const std::uint32_t p = spf_[n];
    const std::uint32_t rest = n / p;
    spf_power_[n] = (rest > 1 && spf_[rest] == p) ? spf_power_[rest] * p : p;
  }
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace symuniv
