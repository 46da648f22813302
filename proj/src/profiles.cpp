#include "hesscap/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hesscap/error.hpp"

namespace hesscap {

namespace {

struct TermValue {
  double u, du, d2u;
};

/// Antiderivative vanishing at 0, slope and curvature of one term.
TermValue eval_term(const SlopeTerm& t, double s) {
  if (t.power >= 0) {
    const int j = t.power;
    const double sp = std::pow(s, 2 * j);
    return {t.c * sp * s * s / (2 * j + 2), t.c * sp * s, t.c * (2 * j + 1) * sp};
  }
  const double x = s / t.sigma;
  const double w = 1.0 + x * x;
  const double lw = std::log1p(x * x);
  const double e = 1.0 - t.beta;
  const double anti = std::abs(e) < 1e-12 ? lw : std::expm1(e * lw) / e;
  const double wb = std::exp(-t.beta * lw);
  return {t.c * 0.5 * t.sigma * t.sigma * anti, t.c * s * wb, t.c * (wb - 2.0 * t.beta * x * x * wb / w)};
}

void validate_terms(int n, int k, std::span<const SlopeTerm> terms) {
  if (terms.empty()) throw DomainError("profile_from_slopes: no terms");
  for (const auto& t : terms) {
    if (!(t.c >= 0.0) || !std::isfinite(t.c)) throw DomainError("profile_from_slopes: coefficients must be >= 0");
    if (t.power < 0) {
      if (!(t.sigma > 0.0)) throw DomainError("profile_from_slopes: sigma must be positive");
      if (t.beta < 0.0 || t.beta > 0.5 * n / k + 1e-15) {
        throw DomainError("profile_from_slopes: beta must lie in [0, n/(2k)]");
      }
    }
  }
}

}  // namespace

RadialProfile profile_from_slopes(int n, int k, std::vector<double> nodes, std::span<const SlopeTerm> terms) {
  validate_terms(n, k, terms);
  const double R = nodes.back();
  double uR = 0.0;
  for (const auto& t : terms) uR += eval_term(t, R).u;
  const std::size_t m = nodes.size();
  std::vector<double> u(m), du(m), d2u(m);
  for (std::size_t i = 0; i < m; ++i) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (const auto& t : terms) {
      const TermValue v = eval_term(t, nodes[i]);
      a += v.u;
      b += v.du;
      c += v.d2u;
    }
    u[i] = std::min(a - uR, 0.0);
    du[i] = b;
    d2u[i] = c;
  }
  u.back() = 0.0;
  RadialProfile::Derivatives d{du, du, d2u, d2u};
  return RadialProfile(n, k, std::move(nodes), std::move(u), std::move(d));
}

RadialProfile profile_from_slopes(int n, int k, double R, std::span<const SlopeTerm> terms, int cells) {
  double smallest = R;
  for (const auto& t : terms) {
    if (t.power < 0) smallest = std::min(smallest, t.sigma);
  }
  return profile_from_slopes(n, k, clustered_nodes(R, cells, 0.05 * smallest), terms);
}

std::vector<SlopeTerm> random_slope_terms(int n, int k, const RandomProfileOptions& opts, std::uint64_t seed,
                                          std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };

  const int count = 1 + static_cast<int>(unit(rng) * opts.max_terms) % opts.max_terms;
  std::vector<SlopeTerm> terms;
  for (int i = 0; i < count; ++i) {
    SlopeTerm t;
    if (unit(rng) < 0.75) {
      t.c = log_uniform(0.1, 10.0);
      t.sigma = log_uniform(opts.sigma_min, opts.sigma_max) * opts.R;
      t.beta = unit(rng) * 0.5 * n / k;
    } else {
      t.power = static_cast<int>(unit(rng) * 3.0) % 3;
      t.c = log_uniform(0.1, 10.0) * std::pow(opts.R, -2 * t.power);
    }
    terms.push_back(t);
  }
  return terms;
}

RadialProfile random_admissible_profile(int n, int k, const RandomProfileOptions& opts, std::uint64_t seed,
                                        std::uint64_t index) {
  // Every draw is admissible by construction; the scan guards roundoff in the
  // sampled derivatives. Rejected draws move on to a fresh stream.
  for (int attempt = 0; attempt < opts.max_rejections; ++attempt) {
    const std::uint64_t stream = index + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
    const auto terms = random_slope_terms(n, k, opts, seed, stream);
    RadialProfile p = profile_from_slopes(n, k, opts.R, terms, opts.cells);
    try {
      hessian_energy(p, k);
      return p;
    } catch (const AdmissibilityError&) {
    }
  }
  throw ConvergenceError("random_admissible_profile: too many rejected draws");
}

std::vector<RadialProfile> random_profile_family(int n, int k, std::size_t count, std::uint64_t seed,
                                                 const RandomProfileOptions& opts) {
  std::vector<RadialProfile> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_admissible_profile(n, k, opts, seed, i));
  return out;
}

RadialProfile sobolev_extremal(int n, int k, double R, int cells) {
  if (!(2 * k < n)) throw DomainError("sobolev_extremal: requires 2k < n");
  if (!(R > 0.0)) throw DomainError("sobolev_extremal: R must be positive");
  // u' = -2e s (1+s^2)^{e-1}: a single bump with sigma = 1, beta = 1 - e = n/(2k).
  const double e = static_cast<double>(2 * k - n) / (2 * k);
  const SlopeTerm t{-2.0 * e, 1.0, 1.0 - e, -1};
  return profile_from_slopes(n, k, clustered_nodes(R, cells, std::min(0.01, 0.5 * R / cells)), std::span(&t, 1));
}

RadialProfile truncated_log(int n, double R, double a, int cells) {
  if (n < 2 || n % 2 != 0) throw DomainError("truncated_log: n must be even");
  if (!(a > 0.0) || !(R > 0.0)) throw DomainError("truncated_log: need a > 0 and R > 0");
  if (cells < 16) throw DomainError("truncated_log: need at least 16 cells");
  const double rho = R * std::exp(-a);
  const int inner = std::max(4, cells / 8);
  std::vector<double> s;
  for (int i = 0; i < inner; ++i) s.push_back(rho * i / inner);
  const auto ring = geometric_nodes(rho, R, cells - inner);
  s.insert(s.end(), ring.begin(), ring.end());
  const std::size_t m = s.size();
  const std::size_t corner = static_cast<std::size_t>(inner);
  std::vector<double> u(m, -a), du(m, 0.0), d2u(m, 0.0);
  for (std::size_t i = corner + 1; i < m; ++i) {
    u[i] = -std::log(R / s[i]);
    du[i] = 1.0 / s[i];
    d2u[i] = -du[i] / s[i];
  }
  u.back() = 0.0;
  RadialProfile::Derivatives d{du, du, d2u, d2u};
  d.du_right[corner] = 1.0 / rho;
  d.d2u_right[corner] = -1.0 / (rho * rho);
  return RadialProfile(n, n / 2, std::move(s), std::move(u), std::move(d));
}

RadialProfile quadratic_profile(int n, int k, double R, int cells) {
  std::vector<double> s(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) s[static_cast<std::size_t>(i)] = R * i / cells;
  return RadialProfile::from_functions(
      n, k, std::move(s), [R](double x) { return 0.5 * (x * x - R * R); }, [](double x) { return x; },
      [](double) { return 1.0; });
}

RadialProfile quartic_profile(int n, int k, double R, int cells) {
  std::vector<double> s(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) s[static_cast<std::size_t>(i)] = R * i / cells;
  const double top = std::pow(R, 4) / 4 + R * R / 2;
  return RadialProfile::from_functions(
      n, k, std::move(s), [top](double x) { return std::pow(x, 4) / 4 + x * x / 2 - top; },
      [](double x) { return x * x * x + x; }, [](double x) { return 3 * x * x + 1; });
}

}  // namespace hesscap
