#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hesscap/error.hpp"
#include "hesscap/profiles.hpp"

namespace hesscap {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double simpson(F f, double a, double b, int cells = 4000) {
  const double h = (b - a) / cells;
  double s = f(a) + f(b);
  for (int i = 1; i < cells; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double slope(const std::vector<SlopeTerm>& terms, double s) {
  double v = 0.0;
  for (const auto& t : terms) {
    if (t.power >= 0) v += t.c * std::pow(s, 2 * t.power + 1);
    else v += t.c * s * std::pow(1 + (s / t.sigma) * (s / t.sigma), -t.beta);
  }
  return v;
}

TEST(Slopes, ValuesIntegrateTheSlope) {
  const std::vector<SlopeTerm> terms = {{2.0, 0.3, 1.25, -1}, {0.5, 1.0, 0.0, -1}, {1.5, 0, 0, 2}, {0.7, 0.1, 1.0, -1}};
  const auto p = profile_from_slopes(5, 2, 1.0, terms, 1024);
  for (std::size_t i = 0; i < p.size(); i += 97) {
    const double s = p.r(i);
    const double expect = -simpson([&](double x) { return slope(terms, x); }, s, 1.0);
    EXPECT_NEAR(p.u(i), expect, 1e-10) << "s=" << s;
    EXPECT_NEAR(p.derivatives().du_right[i], slope(terms, s), 1e-12);
  }
}

TEST(Slopes, CurvatureMatchesDifferencedSlope) {
  const std::vector<SlopeTerm> terms = {{1.0, 0.2, 2.5, -1}, {1.0, 0, 0, 1}};
  const auto p = profile_from_slopes(5, 1, 1.0, terms, 256);
  const double h = 1e-6;
  for (std::size_t i = 1; i < p.size(); i += 31) {
    const double s = p.r(i);
    const double fd = (slope(terms, s + h) - slope(terms, s - h)) / (2 * h);
    EXPECT_NEAR(p.derivatives().d2u_right[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Slopes, BetaBoundEnforced) {
  const SlopeTerm ok{1.0, 0.5, 2.5, -1};
  const SlopeTerm bad{1.0, 0.5, 2.5 + 1e-9, -1};
  EXPECT_NO_THROW(profile_from_slopes(5, 1, 1.0, std::span(&ok, 1)));
  EXPECT_THROW(profile_from_slopes(5, 1, 1.0, std::span(&bad, 1)), DomainError);
  const SlopeTerm negative{-1.0, 0.5, 1.0, -1};
  EXPECT_THROW(profile_from_slopes(5, 1, 1.0, std::span(&negative, 1)), DomainError);
  EXPECT_THROW(profile_from_slopes(5, 1, 1.0, std::span<const SlopeTerm>()), DomainError);
}

TEST(Slopes, BoundaryBetaIsAdmissibleForEveryOrder) {
  // At beta = n/(2k) the combination (n-k) u'/s + k u'' stays >= 0.
  for (int n = 3; n <= 7; ++n) {
    for (int k = 1; 2 * k <= n + 1 && k <= n; ++k) {
      const SlopeTerm t{1.0, 0.1, 0.5 * n / k, -1};
      const auto p = profile_from_slopes(n, k, 1.0, std::span(&t, 1), 1024);
      EXPECT_NO_THROW(hessian_energy(p, k)) << n << "," << k;
    }
  }
}

TEST(RandomProfiles, AdmissibleAndNegative) {
  for (auto [n, k] : {std::pair{3, 1}, {4, 2}, {5, 2}, {6, 3}, {7, 3}}) {
    const auto fam = random_profile_family(n, k, 20, 42);
    ASSERT_EQ(fam.size(), 20u);
    for (const auto& p : fam) {
      EXPECT_EQ(p.dim(), n);
      EXPECT_EQ(p.values().back(), 0.0);
      for (double v : p.values()) EXPECT_LE(v, 0.0);
      const auto e = hessian_energy_detailed(p, k);
      EXPECT_GT(e.flux, 0.0);
      EXPECT_LE(e.relative_gap, 1e-3);
      for (std::size_t i = 1; i < p.size(); i += 17) {
        const auto& d = p.derivatives();
        const auto spec = radial_spectrum(d.du_right[i], d.d2u_right[i], p.r(i), n);
        EXPECT_TRUE(is_k_admissible(spec, k));
      }
    }
  }
}

TEST(RandomProfiles, DeterministicAndPrefixStable) {
  const auto a = random_profile_family(5, 2, 6, 99);
  const auto b = random_profile_family(5, 2, 3, 99);
  const auto c = random_profile_family(5, 2, 3, 100);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_EQ(a[i].size(), b[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) EXPECT_EQ(a[i].u(j), b[i].u(j));
  }
  bool differs = false;
  for (std::size_t j = 0; j < std::min(a[0].size(), c[0].size()); ++j) differs |= a[0].u(j) != c[0].u(j);
  EXPECT_TRUE(differs);
}

TEST(RandomProfiles, TermsRespectOptions) {
  RandomProfileOptions opts;
  opts.R = 10.0;
  opts.max_terms = 2;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto t = random_slope_terms(5, 2, opts, 3, i);
    ASSERT_GE(t.size(), 1u);
    ASSERT_LE(t.size(), 2u);
    for (const auto& term : t) {
      EXPECT_GE(term.c, 0.0);
      if (term.power < 0) {
        EXPECT_GE(term.sigma, opts.sigma_min * opts.R * (1 - 1e-12));
        EXPECT_LE(term.sigma, opts.sigma_max * opts.R * (1 + 1e-12));
        EXPECT_GE(term.beta, 0.0);
        EXPECT_LE(term.beta, 1.25);
      } else {
        EXPECT_LE(term.power, 2);
      }
    }
  }
}

TEST(SobolevExtremal, ClosedFormValues) {
  const int n = 5, k = 2;
  const double R = 10.0;
  const double e = static_cast<double>(2 * k - n) / (2 * k);
  const auto p = sobolev_extremal(n, k, R, 2048);
  for (std::size_t i = 0; i < p.size(); i += 101) {
    const double s = p.r(i);
    EXPECT_NEAR(p.u(i), -std::pow(1 + s * s, e) + std::pow(1 + R * R, e), 1e-12);
  }
  // Strictly k-convex: F_k > 0 at every node.
  for (double f : radial_fk(p, k)) EXPECT_GT(f, 0.0);
  EXPECT_THROW(sobolev_extremal(4, 2, 1.0), DomainError);
}

TEST(TruncatedLog, EnergyIsLinearInDepth) {
  for (double a : {0.5, 1.0, 3.0}) {
    const auto p = truncated_log(4, 1.0, a);
    EXPECT_EQ(p.order(), 2);
    EXPECT_NEAR(p.u(0), -a, 0.0);
    EXPECT_TRUE(p.is_kink(static_cast<std::size_t>(std::max(4, 4096 / 8))));
    const double e = hessian_energy(p, 2);
    EXPECT_NEAR(e, 3 * kPi * kPi * a, 1e-6 * 3 * kPi * kPi * a);
  }
  // n = 2, k = 1: 2 pi a.
  EXPECT_NEAR(hessian_energy(truncated_log(2, 2.0, 1.5), 1), 2 * kPi * 1.5, 1e-6 * 3 * kPi);
  EXPECT_THROW(truncated_log(5, 1.0, 1.0), DomainError);
}

TEST(SmoothProfiles, BoundaryValues) {
  const auto q = quadratic_profile(3, 1, 2.0);
  EXPECT_EQ(q.u(0), -2.0);
  EXPECT_EQ(q.values().back(), 0.0);
  const auto r = quartic_profile(3, 1, 1.0);
  EXPECT_NEAR(r.u(0), -0.75, 1e-15);
}

}  // namespace
}  // namespace hesscap
