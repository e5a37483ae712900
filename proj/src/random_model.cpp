#include "symuniv/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "symuniv/error.hpp"
#include "symuniv/parallel.hpp"
#include "symuniv/primes.hpp"
#include "symuniv/stats.hpp"

namespace symuniv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kShiftStream = 0xD1B54A32D192ED03ull;
constexpr double kSigmaFloor = 0.6;
constexpr unsigned kMaxOrder = 4000;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t h) noexcept { return static_cast<double>(h >> 11) * 0x1.0p-53; }

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t j) noexcept { return splitmix64(seed ^ splitmix64(j * kGolden)); }

// Smallest V whose dropped tail sum_{nu > V} binom(z + nu - 1, nu) y^nu is below kLocalTail.
unsigned order_for_tail(unsigned z, double y) {
  double term = 1.0;  // nu = 0
  for (unsigned nu = 0; nu < kMaxOrder; ++nu) {
    const double ratio = (z + nu) / (nu + 1.0) * y;  // term_{nu+1} / term_nu
    const double next = term * ratio;
    const double ratio_next = (z + nu + 1.0) / (nu + 2.0) * y;
    if (ratio_next < 1.0 && next / (1.0 - ratio_next) < kLocalTail) return nu;
    term = next;
  }
  throw Error(Errc::numeric_instability, "local series needs more than 4000 terms");
}

std::vector<double> local_series(const LKind& kind, double theta, unsigned nu) {
  return invert_series(local_factor_poly(kind, theta), nu + 1);
}

}  // namespace

double phase_angle(std::uint64_t seed, std::uint64_t index) {
  return kTwoPi * unit_uniform(splitmix64(seed ^ splitmix64(index)));
}

std::complex<double> PhaseAssignment::omega(std::uint64_t n) const {
  std::complex<double> w = 1.0;
  for (std::size_t i = 0; i < primes.size() && n > 1; ++i) {
    while (n % primes[i] == 0) {
      w *= omega_p(i);
      n /= primes[i];
    }
  }
  if (n != 1) throw Error(Errc::invalid_argument, "n has a prime factor beyond p_max");
  return w;
}

PhaseAssignment sample_phases(std::uint64_t seed, std::uint64_t p_max) {
  if (p_max < 2) throw Error(Errc::invalid_argument, "P_max must be at least 2");
  PrimeTable table(p_max);
  PhaseAssignment omega{seed, p_max, {table.primes().begin(), table.primes().end()}, {}};
  omega.angles.resize(omega.primes.size());
  for (std::size_t i = 0; i < omega.primes.size(); ++i) omega.angles[i] = phase_angle(seed, i);
  return omega;
}

RandomModel::RandomModel(const HeckeEigenform& f, const LKind& kind, std::uint64_t p_max)
    : kind_(kind), p_max_(p_max), exponents_(root_exponents(kind)) {
  if (p_max < 2) throw Error(Errc::invalid_argument, "P_max must be at least 2");
  if (p_max > f.bound()) {
    throw Error(Errc::insufficient_cache, "random model to P_max = " + std::to_string(p_max) +
                                              " needs coefficients beyond " + std::to_string(f.bound()));
  }
  PrimeTable table(p_max);
  primes_.assign(table.primes().begin(), table.primes().end());
  const auto z = static_cast<unsigned>(kind.degree());
  for (const std::uint32_t p : primes_) {
    const double lp = std::log(static_cast<double>(p));
    log_primes_.push_back(lp);
    thetas_.push_back(satake_theta(f.lambda(p), p));
    series_.push_back(local_series(kind, thetas_.back(), order_for_tail(z, std::exp(-kSigmaFloor * lp))));
  }
}

RandomModel::Plan RandomModel::plan(cplx s) const {
  if (!(s.real() > 0.5)) throw Error(Errc::out_of_region, "the random model converges only for Re(s) > 1/2");
  Plan plan{s, {}, {}, {}};
  plan.p_minus_s.resize(primes_.size());
  plan.nu_max.resize(primes_.size());
  const auto z = static_cast<unsigned>(kind_.degree());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    plan.p_minus_s[i] = std::exp(-s * log_primes_[i]);
    plan.nu_max[i] = order_for_tail(z, std::exp(-s.real() * log_primes_[i]));
    if (plan.nu_max[i] + 1 > series_[i].size()) {
      plan.extended.resize(i + 1);
      plan.extended[i] = local_series(kind_, thetas_[i], plan.nu_max[i]);
    }
  }
  return plan;
}

namespace {

cplx horner(std::span<const double> c, unsigned top, cplx x) {
  cplx acc = 0.0;
  for (unsigned j = top + 1; j-- > 0;) acc = acc * x + c[j];
  return acc;
}

}  // namespace

cplx RandomModel::value(const Plan& plan, std::span<const double> angles) const {
  if (angles.size() < primes_.size()) throw Error(Errc::invalid_argument, "phase assignment does not reach P_max");
  cplx v = 1.0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const cplx x = std::polar(1.0, angles[i]) * plan.p_minus_s[i];
    const auto& c = i < plan.extended.size() && !plan.extended[i].empty() ? plan.extended[i] : series_[i];
    v *= horner(c, plan.nu_max[i], x);
  }
  return v;
}

cplx RandomModel::value(const Plan& plan, std::span<const cplx> omega) const {
  if (omega.size() < primes_.size()) throw Error(Errc::invalid_argument, "phase assignment does not reach P_max");
  cplx v = 1.0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const auto& c = i < plan.extended.size() && !plan.extended[i].empty() ? plan.extended[i] : series_[i];
    v *= horner(c, plan.nu_max[i], omega[i] * plan.p_minus_s[i]);
  }
  return v;
}

ModelSample RandomModel::sample(const Plan& plan, std::span<const double> angles) const {
  ModelSample out{value(plan, angles), 0.0, p_max_};
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const cplx x = std::polar(1.0, angles[i]) * plan.p_minus_s[i];
    for (const int e : exponents_) out.log_value -= std::log(1.0 - std::polar(1.0, e * thetas_[i]) * x);
  }
  return out;
}

double RandomModel::second_moment(double sigma) const {
  if (!(sigma > 0.5)) throw Error(Errc::out_of_region, "the second moment is finite only for sigma > 1/2");
  double total = 1.0;
  const auto z = static_cast<unsigned>(kind_.degree());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const double y = std::exp(-2.0 * sigma * log_primes_[i]);
    const unsigned top = order_for_tail(z * z, y);
    const auto c = top + 1 > series_[i].size() ? local_series(kind_, thetas_[i], top) : series_[i];
    double local = 0.0, yp = 1.0;
    for (unsigned nu = 0; nu <= top && nu < c.size(); ++nu, yp *= y) local += c[nu] * c[nu] * yp;
    total *= local;
  }
  return total;
}

ModelSample random_L(const RandomModel& model, cplx s, const PhaseAssignment& omega) {
  if (omega.p_max < model.p_max()) throw Error(Errc::invalid_argument, "phase assignment does not reach P_max");
  return model.sample(model.plan(s), omega.angles);
}

double dirichlet_second_moment(std::span<const double> lambda, double sigma) {
  double total = 0.0;
  for (std::size_t n = 1; n < lambda.size(); ++n) total += lambda[n] * lambda[n] * std::pow(static_cast<double>(n), -2.0 * sigma);
  return total;
}

PopulationMoments population_moments(std::span<const cplx> values) {
  const double n = static_cast<double>(values.size());
  PopulationMoments m{0.0, 0.0, 0.0, 0.0};
  if (values.empty()) return m;
  for (const auto& v : values) {
    m.mean += v;
    m.mean_abs2 += std::norm(v);
  }
  m.mean /= n;
  m.mean_abs2 /= n;
  if (values.size() > 1) {
    double var_v = 0.0, var_a = 0.0;
    for (const auto& v : values) {
      var_v += std::norm(v - m.mean);
      const double d = std::norm(v) - m.mean_abs2;
      var_a += d * d;
    }
    m.se_mean = std::sqrt(var_v / (n - 1.0) / n);
    m.se_abs2 = std::sqrt(var_a / (n - 1.0) / n);
  }
  return m;
}

std::vector<cplx> model_values(const RandomModel& model, cplx s, std::size_t n, std::uint64_t seed,
                               unsigned threads) {
  const auto plan = model.plan(s);
  std::vector<cplx> out(n);
  const std::size_t np = model.primes().size();
  parallel_for(n, threads, [&](std::size_t j) {
    thread_local std::vector<double> angles;
    angles.resize(np);
    const std::uint64_t sj = sample_seed(seed, j);
    for (std::size_t i = 0; i < np; ++i) angles[i] = phase_angle(sj, i);
    out[j] = model.value(plan, angles);
  });
  return out;
}

DistributionReport distribution_compare(const LFunction& L, const RandomModel& model, cplx s, double T,
                                        std::size_t n_shift, std::size_t n_model, std::uint64_t seed,
                                        unsigned threads) {
  if (!(s.real() > L.kind().sigma_F())) {
    throw Error(Errc::out_of_region, "distribution comparison needs Re(s) > " + std::to_string(L.kind().sigma_F()));
  }
  if (n_shift < 100 || n_model < 100) throw Error(Errc::invalid_argument, "both populations need at least 100 samples");
  if (!(T > 0.0)) throw Error(Errc::invalid_argument, "shift range must be positive");
  if (!(L.kind() == model.kind())) throw Error(Errc::invalid_argument, "L-function and model kinds differ");
  DistributionReport r;
  r.s = s;
  r.T = T;
  r.n_shift = n_shift;
  r.n_model = n_model;
  r.p_max = model.p_max();
  r.seed = seed;
  r.shift_t.resize(n_shift);
  r.shift_values.resize(n_shift);
  std::vector<double> stab(n_shift);
  parallel_for(n_shift, threads, [&](std::size_t i) {
    const double t = T * unit_uniform(splitmix64((seed ^ kShiftStream) + splitmix64(i)));
    const LValue v = L.eval(s + cplx(0.0, t));
    r.shift_t[i] = t;
    r.shift_values[i] = v.value;
    stab[i] = v.stability;
  });
  r.max_shift_stability = *std::max_element(stab.begin(), stab.end());
  r.model_values = model_values(model, s, n_model, seed, threads);
  auto project = [](const std::vector<cplx>& v, int which) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = which == 0 ? std::log(std::abs(v[i])) : which == 1 ? std::arg(v[i]) : std::abs(v[i]);
    }
    return out;
  };
  r.ks_re = ks_two_sample(project(r.shift_values, 0), project(r.model_values, 0));
  r.ks_im = ks_two_sample(project(r.shift_values, 1), project(r.model_values, 1));
  r.ks_abs = ks_two_sample(project(r.shift_values, 2), project(r.model_values, 2));
  r.ks_critical_01 = ks_critical(0.01, n_shift, n_model);
  r.moments_shift = population_moments(r.shift_values);
  r.moments_model = population_moments(r.model_values);
  return r;
}

SupportReport support_scan(const RandomModel& model, std::span<const cplx> s_points, std::size_t n,
                           std::uint64_t seed, unsigned threads) {
  if (s_points.empty() || n == 0) throw Error(Errc::invalid_argument, "support scan needs samples and points");
  std::vector<RandomModel::Plan> plans;
  plans.reserve(s_points.size());
  for (const cplx s : s_points) plans.push_back(model.plan(s));
  const std::size_t np = model.primes().size();
  std::vector<double> best(n);
  std::vector<std::size_t> where(n);
  parallel_for(n, threads, [&](std::size_t j) {
    thread_local std::vector<cplx> omega;
    omega.resize(np);
    const std::uint64_t sj = sample_seed(seed, j);
    for (std::size_t i = 0; i < np; ++i) omega[i] = std::polar(1.0, phase_angle(sj, i));
    best[j] = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < plans.size(); ++k) {
      const double a = std::abs(model.value(plans[k], omega));
      if (a < best[j]) {
        best[j] = a;
        where[j] = k;
      }
    }
  });
  const auto j = static_cast<std::size_t>(std::min_element(best.begin(), best.end()) - best.begin());
  return {best[j], j, s_points[where[j]], n, s_points.size(), model.p_max(), seed};
}

void write_samples_csv(const DistributionReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << "population,index,t,re,im\n";
  char buf[128];
  for (std::size_t i = 0; i < report.shift_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "shift,%zu,%.17g,%.17g,%.17g\n", i, report.shift_t[i],
                  report.shift_values[i].real(), report.shift_values[i].imag());
    out << buf;
  }
  for (std::size_t i = 0; i < report.model_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "model,%zu,,%.17g,%.17g\n", i, report.model_values[i].real(),
                  report.model_values[i].imag());
    out << buf;
  }
}

}  // namespace symuniv
