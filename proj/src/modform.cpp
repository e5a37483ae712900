#include "symuniv/modform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "symuniv/error.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/version.hpp"

namespace symuniv {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_supported_weight(int k) noexcept {
  return std::find(std::begin(kSupportedWeights), std::end(kSupportedWeights), k) != std::end(kSupportedWeights);
}

namespace {

void require_weight(int k) {
  if (!is_supported_weight(k)) {
    throw Error(Errc::unsupported_weight,
                "weight " + std::to_string(k) + " is not supported; admissible weights are 12, 16, 18, 20, 22, 26");
  }
}

double normalizer(std::size_t n, int k) {
  return std::pow(static_cast<double>(n), 0.5 * (k - 1));
}

}  // namespace

HeckeEigenform::HeckeEigenform(int weight, QSeries expansion) : weight_(weight), series_(std::move(expansion)) {
  require_weight(weight);
  if (series_.bound() < 1 || series_[0] != 0 || series_[1] != 1) {
    throw Error(Errc::invalid_argument, "expansion is not a normalized cusp form");
  }
  normalized_.assign(series_.bound() + 1, 0.0);
  for (std::size_t n = 1; n <= series_.bound(); ++n) {
    normalized_[n] = mpz_get_d(series_[n].get_mpz_t()) / normalizer(n, weight_);
  }
}

QSeries qexp_delta(std::size_t N) {
  if (N == 0) throw Error(Errc::invalid_argument, "truncation bound must be at least 1");
  // Jacobi: prod (1 - q^n)^3 = sum_j (-1)^j (2j + 1) q^{j(j+1)/2}
  std::vector<SparseTerm> theta;
  for (std::int64_t j = 0;; ++j) {
    const auto e = static_cast<std::size_t>(j * (j + 1) / 2);
    if (e > N - 1) break;
    theta.push_back({e, (j % 2 ? -1 : 1) * (2 * j + 1)});
  }
  // |tau(n)| <= d(n) n^{11/2} <= 2 n^6
  const double bits = 6.0 * std::log2(static_cast<double>(N) + 1.0) + 2.0;
  return sparse_power(theta, 8, N - 1, bits).truncated(N).shifted(1);
}

QSeries eisenstein_series(int weight, std::size_t N) {
  long scale;
  unsigned r;
  if (weight == 4) {
    scale = 240;
    r = 3;
  } else if (weight == 6) {
    scale = -504;
    r = 5;
  } else {
    throw Error(Errc::unsupported_weight, "only E_4 and E_6 are provided");
  }
  QSeries e(N);
  e[0] = 1;
  if (N == 0) return e;
  SpfTable spf(static_cast<std::uint32_t>(N));
  std::vector<mpz_class> sigma(N + 1);
  sigma[1] = 1;
  for (std::uint32_t n = 2; n <= N; ++n) {
    const std::uint32_t p = spf.spf(n);
    const std::uint32_t pa = spf.spf_power(n);
    mpz_class local = 1, pr, term = 1;
    mpz_ui_pow_ui(pr.get_mpz_t(), p, r);
    for (std::uint32_t q = p; q <= pa; q *= p) {
      term *= pr;
      local += term;
      if (q > pa / p) break;
    }
    sigma[n] = sigma[n / pa] * local;
  }
  for (std::size_t n = 1; n <= N; ++n) e[n] = sigma[n] * scale;
  return e;
}

HeckeEigenform qexp_newform(int k, std::size_t N) {
  require_weight(k);
  if (N == 0) throw Error(Errc::invalid_argument, "truncation bound must be at least 1");
  QSeries f = qexp_delta(N);
  int rest = k - 12;
  // weight k - 12 as 4a + 6b with the fewest factors
  int b = 0;
  while (rest % 4 != 0) {
    rest -= 6;
    ++b;
  }
  const int a = rest / 4;
  if (a > 0) f = f * eisenstein_series(4, N).pow(static_cast<unsigned>(a));
  if (b > 0) f = f * eisenstein_series(6, N).pow(static_cast<unsigned>(b));
  return HeckeEigenform(k, std::move(f));
}

double satake_theta(double lambda_p, std::uint64_t p) {
  if (!(std::abs(lambda_p) <= 2.0 + kDeligneSlack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "|lambda(" << p << ")| = " << std::abs(lambda_p) << " exceeds 2";
    throw Error(Errc::deligne_violation, msg.str());
  }
  return std::acos(std::clamp(0.5 * lambda_p, -1.0, 1.0));
}

SatakeAngle satake_angle(const HeckeEigenform& f, std::uint64_t p) {
  if (p > f.bound()) {
    throw Error(Errc::insufficient_cache, "form is known only up to n = " + std::to_string(f.bound()));
  }
  if (!is_prime_u64(p)) throw Error(Errc::invalid_argument, std::to_string(p) + " is not prime");
  return {p, satake_theta(f.lambda(p), p)};
}

double chebyshev_u(unsigned n, double x) noexcept {
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (unsigned j = 1; j < n; ++j) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double lambda_prime_power(double theta, unsigned nu) noexcept {
  return chebyshev_u(nu, std::cos(theta));
}

double lambda_prime_power(const HeckeEigenform& f, std::uint64_t p, unsigned nu) {
  return lambda_prime_power(satake_angle(f, p).theta, nu);
}

std::optional<HeckeViolation> check_hecke_relation(const HeckeEigenform& f, std::uint64_t mn_limit) {
  if (mn_limit > f.bound()) {
    throw Error(Errc::insufficient_cache, "Hecke check needs coefficients up to " + std::to_string(mn_limit));
  }
  const unsigned long km1 = static_cast<unsigned long>(f.weight() - 1);
  std::map<std::uint64_t, std::size_t> involvement;
  std::optional<HeckeViolation> first;
  std::size_t failures = 0;
  mpz_class lhs, rhs, dpow;
  for (std::uint64_t m = 1; m * m <= mn_limit; ++m) {
    for (std::uint64_t n = m; m * n <= mn_limit; ++n) {
      lhs = f.exact(m) * f.exact(n);
      rhs = 0;
      for (std::uint64_t d = 1; d <= m; ++d) {
        if (m % d || n % d) continue;
        mpz_ui_pow_ui(dpow.get_mpz_t(), d, km1);
        mpz_addmul(rhs.get_mpz_t(), dpow.get_mpz_t(), f.exact(m * n / (d * d)).get_mpz_t());
      }
      if (lhs == rhs) continue;
      ++failures;
      ++involvement[m];
      if (n != m) ++involvement[n];
      for (std::uint64_t d = 1; d <= m; ++d) {
        if (m % d == 0 && n % d == 0) {
          const std::uint64_t idx = m * n / (d * d);
          if (idx != m && idx != n) ++involvement[idx];
        }
      }
      if (!first) first = HeckeViolation{m, n, 0, 0};
    }
  }
  if (!first) return std::nullopt;
  std::uint64_t suspect = 0;
  std::size_t best = 0;
  for (const auto& [idx, count] : involvement) {
    if (count > best) {
      best = count;
      suspect = idx;
    }
  }
  first->suspect = suspect;
  first->failures = failures;
  return first;
}

DeligneReport deligne_scan(const HeckeEigenform& f, std::uint64_t limit) {
  if (limit > f.bound()) {
    throw Error(Errc::insufficient_cache, "form is known only up to n = " + std::to_string(f.bound()));
  }
  PrimeTable primes(limit);
  DeligneReport report{0.0, 0, primes.size()};
  for (const std::uint32_t p : primes.primes()) {
    const double a = std::abs(f.lambda(p));
    if (a > report.max_abs_lambda) {
      report.max_abs_lambda = a;
      report.argmax_p = p;
    }
  }
  return report;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path meta_path(const fs::path& path) { return fs::path(path.string() + ".meta.json"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::cache_corrupt, path.string() + ": " + e.what());
  }
}

}  // namespace

std::string file_checksum(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= kFnvPrime;
    }
  }
  return hex64(h);
}

void write_coefficient_cache(const HeckeEigenform& f, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
    out << "n,c_exact,lambda_norm\n";
    char num[64];
    for (std::size_t n = 1; n <= f.bound(); ++n) {
      std::snprintf(num, sizeof num, "%.17g", f.lambda(n));
      out << n << ',' << f.exact(n).get_str() << ',' << num << '\n';
    }
    if (!out) throw Error(Errc::io_error, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
  json meta = {
      {"weight", f.weight()},
      {"N", f.bound()},
      {"checksum", file_checksum(path)},
      {"checksum_algorithm", "fnv1a64"},
      {"generator", std::string(kSoftwareName) + " " + kVersion},
  };
  std::ofstream out(meta_path(path));
  if (!out) throw Error(Errc::io_error, "cannot write " + meta_path(path).string());
  out << meta.dump(2) << '\n';
}

HeckeEigenform read_coefficient_cache(const fs::path& path, ChecksumPolicy policy) {
  const json meta = read_json(meta_path(path));
  int weight;
  std::size_t N;
  std::string checksum;
  try {
    weight = meta.at("weight").get<int>();
    N = meta.at("N").get<std::size_t>();
    checksum = meta.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::cache_corrupt, meta_path(path).string() + ": " + e.what());
  }
  if (policy == ChecksumPolicy::verify && file_checksum(path) != checksum) {
    throw Error(Errc::cache_corrupt, path.string() + ": checksum mismatch");
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "n,c_exact,lambda_norm") throw Error(Errc::cache_corrupt, path.string() + ": bad header");
  QSeries series(N);
  std::size_t expected = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    std::size_t n = 0;
    if (c1 == std::string::npos || c2 == std::string::npos ||
        std::from_chars(line.data(), line.data() + c1, n).ec != std::errc() || n != expected || n > N ||
        series[n].set_str(line.substr(c1 + 1, c2 - c1 - 1), 10) != 0) {
      throw Error(Errc::cache_corrupt, path.string() + ": malformed row " + std::to_string(expected));
    }
    ++expected;
  }
  if (expected != N + 1) throw Error(Errc::cache_corrupt, path.string() + ": truncated file");
  try {
    return HeckeEigenform(weight, std::move(series));
  } catch (const Error& e) {
    if (e.code() == Errc::unsupported_weight) throw;
    throw Error(Errc::cache_corrupt, path.string() + ": " + e.what());
  }
}

fs::path default_cache_file(const fs::path& dir, int k, std::size_t N) {
  return dir / ("weight" + std::to_string(k) + "_N" + std::to_string(N) + ".csv");
}

HeckeEigenform load_or_build(int k, std::size_t N, const fs::path& dir) {
  require_weight(k);
  if (dir.empty()) return qexp_newform(k, N);
  // Any valid cache for the same weight with at least N terms will do.
  const std::string prefix = "weight" + std::to_string(k) + "_N";
  std::optional<std::pair<std::size_t, fs::path>> best;
  std::error_code ec;
  if (fs::is_directory(dir, ec)) {
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".csv") continue;
      std::size_t n = 0;
      const char* first = name.data() + prefix.size();
      const char* last = name.data() + name.size() - 4;
      if (std::from_chars(first, last, n).ptr != last || n < N) continue;
      if (!best || n < best->first) best = {n, entry.path()};
    }
  }
  if (best) {
    try {
      HeckeEigenform cached = read_coefficient_cache(best->second);
      if (cached.bound() == N) return cached;
      return HeckeEigenform(k, cached.series().truncated(N));
    } catch (const Error&) {
      // fall through and rebuild
    }
  }
  HeckeEigenform f = qexp_newform(k, N);
  write_coefficient_cache(f, default_cache_file(dir, k, N));
  return f;
}

}  // namespace symuniv
