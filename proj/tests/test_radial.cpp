#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hesscap/error.hpp"
#include "hesscap/hessian_field.hpp"
#include "hesscap/profiles.hpp"
#include "hesscap/radial.hpp"

namespace hesscap {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> uniform(double R, int cells) {
  std::vector<double> r(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) r[static_cast<std::size_t>(i)] = R * i / cells;
  return r;
}

// Composite Simpson on [a, b] with an even number of cells.
template <class F>
double simpson(F f, double a, double b, int cells = 20000) {
  const double h = (b - a) / cells;
  double s = f(a) + f(b);
  for (int i = 1; i < cells; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Energy of the analytic condenser extremal by direct quadrature of the flux
// integrand; independent of the node grading used by the library.
double extremal_energy_oracle(const Condenser& c) {
  const int n = c.n, k = c.k;
  const double pref = sphere_area(n) * binomial(n - 1, k - 1) / k;
  if (2 * k == n) {
    const double L = std::log(c.R / c.r);
    return pref * simpson([&](double s) { return std::pow(1.0 / (L * s), k + 1) * std::pow(s, n - k); }, c.r, c.R);
  }
  const double g = 2.0 - static_cast<double>(n) / k;
  const double denom = std::pow(c.r, g) - std::pow(c.R, g);
  return pref * simpson([&](double s) { return std::pow(std::abs(g * std::pow(s, g - 1) / denom), k + 1) * std::pow(s, n - k); },
                        c.r, c.R);
}

TEST(Geometry, SphereAndBall) {
  EXPECT_NEAR(sphere_area(2), 2 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * kPi, 1e-13);
  EXPECT_NEAR(sphere_area(4), 2 * kPi * kPi, 1e-13);
  EXPECT_NEAR(ball_volume(3, 2.0), 32 * kPi / 3, 1e-12);
  EXPECT_NEAR(ball_volume(5, 1.0), 8 * kPi * kPi / 15, 1e-13);
}

TEST(RadialSpectrum, Layout) {
  const Spectrum s = radial_spectrum(2.0, -3.0, 0.5, 4);
  EXPECT_EQ(s[0], 4.0);
  EXPECT_EQ(s[2], 4.0);
  EXPECT_EQ(s[3], -3.0);
  EXPECT_THROW(radial_spectrum(1.0, 1.0, 0.0, 3), DomainError);
}

TEST(RadialFk, MatchesMatrixPathAndDivergenceForm) {
  // u = s^4/4 + s^2/2 - 3/4: u' = s^3 + s, u'' = 3 s^2 + 1.
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto p = quartic_profile(n, k, 1.0, 64);
      const auto fk = radial_fk(p, k);
      for (std::size_t i = 1; i < p.size(); i += 7) {
        const double s = p.r(i);
        const double du = s * s * s + s, d2u = 3 * s * s + 1;
        const auto spec = radial_spectrum(du, d2u, s, n);
        const double matrix = fk_value(SymMatrix::diagonal(spec.values()), k);
        EXPECT_NEAR(fk[i], matrix, 1e-11 * std::max(1.0, std::abs(matrix)));
        // (C(n-1,k-1)/k) s^{1-n} (s^{n-k} u'^k)'.
        const double flux_deriv = (n - k) * std::pow(s, n - k - 1) * std::pow(du, k) +
                                  std::pow(s, n - k) * k * std::pow(du, k - 1) * d2u;
        const double div = binomial(n - 1, k - 1) / k * std::pow(s, 1 - n) * flux_deriv;
        EXPECT_NEAR(fk[i], div, 1e-10 * std::max(1.0, std::abs(div)));
      }
    }
  }
}

TEST(HessianEnergy, QuadraticClosedForm) {
  // F_k = C(n,k) everywhere; int (R^2 - s^2)/2 s^{n-1} = R^{n+2}/(n(n+2)).
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double R = 1.5;
      const double exact = sphere_area(n) * binomial(n, k) * std::pow(R, n + 2) / (n * (n + 2));
      const auto e = hessian_energy_detailed(quadratic_profile(n, k, R, 2048), k);
      EXPECT_NEAR(e.flux, exact, 1e-5 * exact) << n << "," << k;
      EXPECT_NEAR(e.direct, exact, 1e-5 * exact) << n << "," << k;
    }
  }
}

TEST(HessianEnergy, FromSamplesAgreesWithAnalyticDerivatives) {
  const auto exact = quartic_profile(4, 2, 1.0, 4096);
  std::vector<double> r(exact.nodes().begin(), exact.nodes().end());
  std::vector<double> u(exact.values().begin(), exact.values().end());
  const auto sampled = RadialProfile::from_samples(4, 2, r, u);
  const double a = hessian_energy(exact, 2);
  EXPECT_NEAR(hessian_energy(sampled, 2), a, 1e-4 * a);
}

TEST(HessianEnergy, HomogeneousOfDegreeKPlusOne) {
  const auto p = quartic_profile(5, 2, 1.0);
  for (int k = 1; k <= 5; ++k) {
    const double e = hessian_energy(p, k);
    EXPECT_NEAR(hessian_energy(p.scaled(3.0), k), std::pow(3.0, k + 1) * e, 1e-10 * std::pow(3.0, k + 1) * e);
  }
}

TEST(HessianEnergy, RejectsNonAdmissible) {
  // -(1 - s^2)^2: F_1 < 0 near s = 1.
  const auto p = RadialProfile::from_functions(
      3, 1, uniform(1.0, 256), [](double s) { return -std::pow(1 - s * s, 2); },
      [](double s) { return 4 * s * (1 - s * s); }, [](double s) { return 4 - 12 * s * s; });
  EXPECT_THROW(hessian_energy(p, 1), AdmissibilityError);
}

TEST(RadialProfile, Validation) {
  RadialProfile::Derivatives d{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  EXPECT_THROW(RadialProfile(3, 1, {0, 1, 2}, {-1, 0.5, 0}, d), DomainError);
  EXPECT_THROW(RadialProfile(3, 1, {0, 1, 2}, {-1, -0.5, -0.1}, d), DomainError);
  EXPECT_THROW(RadialProfile(3, 1, {0.1, 1, 2}, {-1, -0.5, 0}, d), DomainError);
  EXPECT_THROW(RadialProfile(3, 1, {0, 1, 1}, {-1, -0.5, 0}, d), DomainError);
  EXPECT_THROW(RadialProfile(3, 4, {0, 1, 2}, {-1, -0.5, 0}, d), DomainError);
  EXPECT_NO_THROW(RadialProfile(3, 1, {0, 1, 2}, {-1, -0.5, 0}, d));
}

TEST(RadialProfile, HermiteExactOnCubics) {
  const auto p = RadialProfile::from_functions(
      3, 1, uniform(1.0, 10), [](double s) { return s * s * s - 1; }, [](double s) { return 3 * s * s; },
      [](double s) { return 6 * s; });
  for (double s : {0.0, 0.037, 0.37, 0.5, 0.99})
    EXPECT_NEAR(p.value_at(s), s * s * s - 1, 1e-14);
  EXPECT_EQ(p.value_at(1.0), 0.0);
  EXPECT_EQ(p.value_at(7.0), 0.0);
}

TEST(RadialProfile, CsvRoundTrip) {
  const auto p = quartic_profile(4, 2, 2.0, 128);
  const auto q = RadialProfile::from_csv(p.to_csv());
  EXPECT_EQ(q.dim(), 4);
  EXPECT_EQ(q.order(), 2);
  ASSERT_EQ(q.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(q.r(i), p.r(i));
    EXPECT_EQ(q.u(i), p.u(i));
  }
  EXPECT_EQ(p.to_csv().substr(0, p.to_csv().find('\n')), "4,2,2,128");
  EXPECT_THROW(RadialProfile::from_csv("4,2,1\n"), DomainError);
}

TEST(Condenser, Validation) {
  EXPECT_THROW((Condenser{3, 1, 2.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((Condenser{1, 1, 1.0, 2.0}.validate()), DomainError);
  EXPECT_THROW((Condenser{3, 0, 1.0, 2.0}.validate()), DomainError);
  EXPECT_THROW((Condenser{3, 2, 1.0, 2.0}.validate_capacity()), UnsupportedError);
  EXPECT_NO_THROW((Condenser{4, 2, 1.0, 2.0}.validate_capacity()));
  try {
    Condenser{5, 3, 1.0, 2.0}.validate_capacity();
  } catch (const UnsupportedError& e) {
    EXPECT_STREQ(e.what(), "unsupported: k exceeds n/2");
  }
}

TEST(Capacity, Examples) {
  EXPECT_NEAR(capacity_closed_form({3, 1, 1.0, 2.0}), 8 * kPi, 1e-12);
  // k = n/2: 3 pi^2 log(2)^{-2}.
  EXPECT_NEAR(capacity_closed_form({4, 2, 1.0, 2.0}), 3 * kPi * kPi / std::pow(std::log(2.0), 2), 1e-10);
  EXPECT_NEAR(capacity_constant(3, 1), 4 * kPi, 1e-13);
  EXPECT_NEAR(capacity_constant(4, 2), 3 * kPi * kPi, 1e-12);
}

TEST(Capacity, NewtonianOracleForKOne) {
  for (int n = 3; n <= 7; ++n) {
    const double r = 0.3, R = 1.7;
    const double newton = sphere_area(n) * (n - 2) / (std::pow(r, 2 - n) - std::pow(R, 2 - n));
    EXPECT_NEAR(capacity_closed_form({n, 1, r, R}), newton, 1e-12 * newton);
  }
}

class CapacityRoutes : public ::testing::TestWithParam<Condenser> {};

TEST_P(CapacityRoutes, AgreeWithQuadratureOracle) {
  const Condenser c = GetParam();
  const double oracle = extremal_energy_oracle(c);
  const double closed = capacity_closed_form(c);
  EXPECT_NEAR(closed, oracle, 1e-9 * oracle);
  EXPECT_NEAR(capacity_flux(c), oracle, 1e-6 * oracle);
  const auto e = hessian_energy_detailed(condenser_extremal(c), c.k);
  EXPECT_NEAR(e.flux, oracle, 1e-5 * oracle);
  EXPECT_NEAR(e.direct, oracle, 1e-5 * oracle);
}

TEST_P(CapacityRoutes, VariationalBoundsFromAbove) {
  const Condenser c = GetParam();
  const double closed = capacity_closed_form(c);
  const auto v = variational_minimizer(c, 512);
  EXPECT_GE(v.capacity, closed * (1 - 1e-12));
  EXPECT_NEAR(v.capacity, closed, 1e-3 * closed);
  // Finer grids lower the bound.
  EXPECT_LE(capacity_variational(c, 2048), v.capacity * (1 + 1e-12));
  EXPECT_EQ(v.profile.u(0), -1.0);
  EXPECT_EQ(v.profile.values().back(), 0.0);
}

INSTANTIATE_TEST_SUITE_P(Condensers, CapacityRoutes,
                         ::testing::Values(Condenser{3, 1, 1.0, 2.0}, Condenser{5, 2, 0.2, 1.0},
                                           Condenser{4, 2, 1.0, 2.0}, Condenser{6, 3, 0.1, 3.0},
                                           Condenser{7, 3, 0.5, 0.75}, Condenser{4, 1, 0.01, 1.0}));

TEST(Capacity, ScalingInR) {
  // cap(B_{lr}, B_{lR}) = l^{n-2k} cap(B_r, B_R).
  const Condenser c{5, 2, 0.3, 1.1};
  const Condenser d{5, 2, 0.6, 2.2};
  EXPECT_NEAR(capacity_closed_form(d), 2.0 * capacity_closed_form(c), 1e-12 * capacity_closed_form(d));
}

TEST(Capacity, MonotoneInInnerRadius) {
  double prev = 0.0;
  for (double r = 0.1; r < 1.0; r += 0.1) {
    const double c = capacity_closed_form({5, 2, r, 1.0});
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(MoserTrudinger, Constants) {
  EXPECT_NEAR(mt_alpha0(2), 4 * kPi, 1e-12);
  EXPECT_NEAR(mt_alpha0(4), 4 * kPi * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(mt_beta0(4), 1.5, 0.0);
  EXPECT_THROW(mt_alpha0(5), DomainError);
}

TEST(MoserTrudinger, ConstantAtZeroExponent) {
  // alpha -> 0 leaves |B_R|.
  const auto p = truncated_log(4, 1.0, 2.0);
  const auto r = moser_trudinger_functional(p, {4, 1e-300, 1.5}, 2);
  EXPECT_NEAR(r.value, ball_volume(4, 1.0), 1e-3 * ball_volume(4, 1.0));
  EXPECT_FALSE(r.overflow);
}

TEST(SobolevQuotient, ScaleInvariant) {
  const auto p = quartic_profile(5, 2, 1.0);
  const double q = 5.0 * 3 / (5 - 4);
  EXPECT_NEAR(sobolev_quotient(p.scaled(7.0), q, 2), sobolev_quotient(p, q, 2), 1e-10);
}

TEST(SobolevQuotient, SupNormOfQuadratic) {
  // n = 3, k = 1: ||u||_Phi^2 = 3 * 4 pi / 15, sup|u| = 1/2.
  const auto p = quadratic_profile(3, 1, 1.0, 4096);
  const double expect = 0.5 / std::sqrt(3 * 4 * kPi / 15);
  EXPECT_NEAR(sobolev_quotient(p, INFINITY, 1), expect, 1e-5 * expect);
}

TEST(Nodes, Geometric) {
  const auto g = geometric_nodes(1.0, 8.0, 3);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_NEAR(g[1], 2.0, 1e-14);
  EXPECT_NEAR(g[2], 4.0, 1e-14);
  EXPECT_EQ(g.back(), 8.0);
}

TEST(Nodes, Clustered) {
  const auto c = clustered_nodes(2.0, 512, 1e-4);
  ASSERT_EQ(c.size(), 513u);
  EXPECT_EQ(c.front(), 0.0);
  EXPECT_EQ(c.back(), 2.0);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GT(c[i], c[i - 1]);
  EXPECT_NEAR(c[1], 1e-4, 2e-5);
}

TEST(Trapezoid, ExactOnLinear) {
  const std::vector<double> x = {0.0, 0.3, 1.0, 2.5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  EXPECT_NEAR(trapezoid(x, y), 2.5 * 2.5 + 2.5, 1e-14);
}

}  // namespace
}  // namespace hesscap
