#include "symuniv/detail/multimodular.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "symuniv/error.hpp"
#include "symuniv/primes.hpp"

namespace symuniv::detail {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) noexcept {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

Montgomery::Montgomery(std::uint64_t mod) : mod_(mod) {
  std::uint64_t inv = mod;  // Newton iteration for mod^{-1} mod 2^64
  for (int i = 0; i < 6; ++i) inv *= 2 - mod * inv;
  neg_inv_ = ~inv + 1;
  const std::uint64_t r = static_cast<std::uint64_t>((static_cast<u128>(1) << 64) % mod);
  r2_ = mulmod(r, r, mod);
}

std::uint64_t Montgomery::pow(std::uint64_t base, std::uint64_t e) const noexcept {
  std::uint64_t r = to(1);
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

namespace {

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

NttPrime make_prime(std::uint64_t p) {
  const auto factors = distinct_prime_factors(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (std::uint64_t q : factors) {
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return {p, g};
  }
}

}  // namespace

const NttPrime& ntt_prime(std::size_t index) {
  static std::mutex mutex;
  static std::vector<NttPrime> primes;
  static std::uint64_t next_c = ((std::uint64_t{1} << 62) - 1) >> kNttMaxLog2;
  std::lock_guard<std::mutex> lock(mutex);
  if (primes.empty()) primes.reserve(64);
  while (primes.size() <= index) {
    if (primes.size() == primes.capacity()) {
      throw Error(Errc::invalid_argument, "too many CRT primes requested");
    }
    for (;; --next_c) {
      const std::uint64_t p = (next_c << kNttMaxLog2) + 1;
      if (is_prime_u64(p)) {
        primes.push_back(make_prime(p));
        --next_c;
        break;
      }
    }
  }
  return primes[index];
}

std::size_t primes_for_bits(double bits) {
  double have = 0.0;
  std::size_t k = 0;
  while (have <= bits + 1.0) {
    have += std::log2(static_cast<double>(ntt_prime(k).p));
    ++k;
  }
  return k;
}

std::uint64_t reduce_mpz(const mpz_class& x, std::uint64_t p) {
  // mpz_fdiv_ui takes an unsigned long, which is 64-bit on the supported targets.
  static_assert(sizeof(unsigned long) == 8);
  return mpz_fdiv_ui(x.get_mpz_t(), p);
}

namespace {

void ntt(std::vector<std::uint64_t>& a, bool inverse, const Montgomery& mg, std::uint64_t g_mont) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const std::uint64_t p = mg.mod();
  std::uint64_t root = mg.pow(g_mont, (p - 1) / n);
  if (inverse) root = mg.pow(root, p - 2);
  std::vector<std::uint64_t> twiddle(n / 2 + 1);
  twiddle[0] = mg.to(1);
  for (std::size_t i = 1; i <= n / 2; ++i) twiddle[i] = mg.mul(twiddle[i - 1], root);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::uint64_t u = a[i + j];
        const std::uint64_t v = mg.mul(a[i + j + half], twiddle[j * stride]);
        a[i + j] = mg.add(u, v);
        a[i + j + half] = mg.sub(u, v);
      }
    }
  }
  if (inverse) {
    const std::uint64_t n_inv = mg.pow(mg.to(n % p), p - 2);
    for (auto& x : a) x = mg.mul(x, n_inv);
  }
}

}  // namespace

std::vector<std::uint64_t> convolve_mod(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                        std::size_t out_len, const NttPrime& prime) {
  std::vector<std::uint64_t> out(out_len, 0);
  if (a.empty() || b.empty() || out_len == 0) return out;
  const std::size_t la = std::min(a.size(), out_len);
  const std::size_t lb = std::min(b.size(), out_len);
  std::size_t n = 1;
  while (n < la + lb - 1) n <<= 1;
  if (n > (std::size_t{1} << kNttMaxLog2)) {
    throw Error(Errc::invalid_argument, "series too long for the number-theoretic transform");
  }
  const Montgomery mg(prime.p);
  const std::uint64_t g = mg.to(prime.generator);
  std::vector<std::uint64_t> fa(n, 0), fb(n, 0);
  for (std::size_t i = 0; i < la; ++i) fa[i] = mg.to(a[i]);
  for (std::size_t i = 0; i < lb; ++i) fb[i] = mg.to(b[i]);
  ntt(fa, false, mg, g);
  ntt(fb, false, mg, g);
  for (std::size_t i = 0; i < n; ++i) fa[i] = mg.mul(fa[i], fb[i]);
  ntt(fa, true, mg, g);
  const std::size_t keep = std::min(out_len, n);
  for (std::size_t i = 0; i < keep; ++i) out[i] = mg.from(fa[i]);
  return out;
}

std::vector<mpz_class> crt_lift(const std::vector<std::vector<std::uint64_t>>& residues) {
  const std::size_t k = residues.size();
  if (k == 0) return {};
  const std::size_t len = residues[0].size();
  std::vector<std::uint64_t> p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = ntt_prime(i).p;
  // inv_prefix[i] = (p_0 ... p_{i-1})^{-1} mod p_i
  std::vector<std::uint64_t> inv_prefix(k, 1);
  for (std::size_t i = 1; i < k; ++i) {
    std::uint64_t prod = 1;
    for (std::size_t j = 0; j < i; ++j) prod = mulmod(prod, p[j] % p[i], p[i]);
    inv_prefix[i] = powmod(prod, p[i] - 2, p[i]);
  }
  mpz_class modulus = 1;
  for (std::size_t i = 0; i < k; ++i) modulus *= static_cast<unsigned long>(p[i]);
  const mpz_class half = modulus / 2;

  std::vector<mpz_class> out(len);
  std::vector<std::uint64_t> digit(k);
  for (std::size_t n = 0; n < len; ++n) {
    for (std::size_t i = 0; i < k; ++i) {
      // Evaluate the partial mixed-radix value modulo p_i.
      std::uint64_t acc = 0, weight = 1;
      for (std::size_t j = 0; j < i; ++j) {
        acc = (acc + mulmod(digit[j], weight, p[i])) % p[i];
        weight = mulmod(weight, p[j] % p[i], p[i]);
      }
      const std::uint64_t r = residues[i][n];
      const std::uint64_t diff = r >= acc ? r - acc : r + p[i] - acc;
      digit[i] = mulmod(diff, inv_prefix[i], p[i]);
    }
    mpz_class& x = out[n];
    x = static_cast<unsigned long>(digit[k - 1]);
    for (std::size_t i = k - 1; i-- > 0;) {
      x *= static_cast<unsigned long>(p[i]);
      x += static_cast<unsigned long>(digit[i]);
    }
    if (x > half) x -= modulus;
  }
  return out;
}

}  // namespace symuniv::detail
