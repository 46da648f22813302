#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hesscap/capacity_lab.hpp"
#include "hesscap/error.hpp"

namespace hesscap {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double simpson(F f, double a, double b, int cells = 20000) {
  const double h = (b - a) / cells;
  double s = f(a) + f(b);
  for (int i = 1; i < cells; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

const ReportPoint* find_point(const VerificationReport& rep, const std::string& label) {
  for (const auto& p : rep.points)
    if (p.label == label) return &p;
  return nullptr;
}

TEST(Report, FinalizeSemantics) {
  VerificationReport rep;
  rep.slack = 1e-3;
  rep.add("a", {}, 0.5);
  rep.add("info", {}, 50.0, false);
  rep.finalize();
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.worst_ratio, 0.5);
  rep.add("b", {}, 1.0009);
  rep.finalize();
  EXPECT_TRUE(rep.pass);
  rep.add("c", {}, 1.0011);
  rep.finalize();
  EXPECT_FALSE(rep.pass);
  VerificationReport bad;
  bad.add("nan", {}, NAN);
  bad.finalize();
  EXPECT_FALSE(bad.pass);
  VerificationReport inf;
  inf.add("inf", {}, INFINITY);
  inf.finalize();
  EXPECT_FALSE(inf.pass);
}

TEST(Report, MergeChecksPrefixesLabels) {
  VerificationReport a, b;
  b.id = "child";
  b.add("row", {1, 2}, 0.3);
  b.add("info", {}, 9.0, false);
  b.notes.push_back("hello");
  a.merge_checks(b);
  ASSERT_EQ(a.points.size(), 1u);
  EXPECT_EQ(a.points[0].label, "child:row");
  EXPECT_TRUE(a.points[0].params.empty());
  EXPECT_EQ(a.notes.at(0), "child: hello");
}

TEST(LevelSets, QuadraticOracle) {
  // |u| >= t  <=>  s <= sqrt(R^2 - 2t).
  const auto p = quadratic_profile(3, 1, 1.0, 4096);
  for (double t : {0.01, 0.1, 0.25, 0.49}) EXPECT_NEAR(level_set_radius(p, t).radius, std::sqrt(1 - 2 * t), 1e-6);
  EXPECT_TRUE(level_set_radius(p, 0.51).empty);
  EXPECT_THROW(level_set_radius(p, 0.0), DomainError);
}

TEST(LevelSets, RejectsNonMonotone) {
  RadialProfile::Derivatives d{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  const RadialProfile p(3, 1, {0, 1, 2, 3}, {-1, -2, -1, 0}, d);
  EXPECT_THROW(level_set_radius(p, 0.5), DomainError);
}

TEST(BallCapacity, EdgeCases) {
  EXPECT_EQ(ball_capacity(3, 1, 0.0, 1.0), 0.0);
  EXPECT_EQ(ball_capacity(3, 1, 1.0, 1.0), INFINITY);
  EXPECT_NEAR(ball_capacity(3, 1, 1.0, 2.0), 8 * kPi, 1e-12);
}

TEST(LogGrid, Endpoints) {
  const auto g = log_grid(1e-3, 10.0, 5);
  EXPECT_EQ(g.front(), 1e-3);
  EXPECT_EQ(g.back(), 10.0);
  EXPECT_NEAR(g[2], 0.1, 1e-15);
  EXPECT_THROW(log_grid(0.0, 1.0, 4), DomainError);
  EXPECT_THROW(log_grid(1.0, 2.0, 1), DomainError);
}

TEST(WeakType, QuadraticOracle) {
  const int n = 5, k = 2;
  const auto p = quadratic_profile(n, k, 1.0, 4096);
  const double energy = sphere_area(n) * binomial(n, k) / (n * (n + 2));
  const auto rep = weak_type_report(p, k, {0.1, 0.2, 0.3});
  ASSERT_EQ(rep.points.size(), 3u);
  for (const auto& pt : rep.points) {
    const double t = pt.params[0];
    const double rho = std::sqrt(1 - 2 * t);
    const double expect = capacity_closed_form({n, k, rho, 1.0}) * std::pow(t, k + 1) / energy;
    EXPECT_NEAR(pt.ratio, expect, 1e-4 * expect);
    EXPECT_LE(pt.ratio, 1.0);
  }
  EXPECT_TRUE(rep.pass);
}

TEST(WeakType, EqualityAtExtremal) {
  for (auto [n, k] : {std::pair{3, 1}, {5, 2}, {4, 2}}) {
    const auto rep = weak_type_family_report(n, k, 10, 7);
    EXPECT_TRUE(rep.pass) << n << "," << k << " worst " << rep.worst_ratio;
    EXPECT_NEAR(rep.extras.at("extremal_ratio_t1"), 1.0, 1e-6);
  }
}

TEST(StrongType, QuadraticOracle) {
  // int_0^{1/2} t^k cap(B_{sqrt(1-2t)}, B_1) dt.
  const int n = 4, k = 1;
  const auto p = quadratic_profile(n, k, 1.0, 4096);
  const double lhs = simpson([&](double t) { return t <= 0 || t >= 0.5 ? 0.0 : std::pow(t, k) * capacity_closed_form({n, k, std::sqrt(1 - 2 * t), 1.0}); },
                             0.0, 0.5 - 1e-9);
  const auto rep = strong_type_report(p, k, 2.0);
  const ReportPoint* s = find_point(rep, "strong");
  ASSERT_NE(s, nullptr);
  EXPECT_NEAR(s->params[1], lhs, 2e-3 * lhs);
  EXPECT_TRUE(rep.pass);
  EXPECT_THROW(strong_type_report(p, k, 1.0), DomainError);
}

TEST(StrongType, FamilyPasses) {
  const auto rep = strong_type_family_report(5, 2, 8, 3, {2.0, 5.0, 10.0}, {2.0, 4.0});
  EXPECT_TRUE(rep.pass) << rep.worst_ratio;
  EXPECT_NE(find_point(rep, "bound-convex-in-ln-a"), nullptr);
}

TEST(Isocap, CriticalExponentBounded) {
  const int n = 5, k = 2;
  const double q = 5.0 * 3 / 1;
  const auto rep = isocap_report(n, k, q);
  EXPECT_TRUE(rep.pass) << rep.worst_ratio;
  // At q critical the quotient is a function of R/r alone; its r -> 0 limit is
  // |B_1|^{(k+1)/q} / c(n,k).
  const double limit = std::pow(ball_volume(n, 1.0), (k + 1) / q) / capacity_constant(n, k);
  EXPECT_LE(rep.extras.at("sup"), limit * (1 + 1e-9));
  EXPECT_NEAR(rep.extras.at("sup_extrapolated"), limit, 0.05 * limit);
}

TEST(Isocap, SubcriticalPasses) {
  EXPECT_TRUE(isocap_report(5, 2, 3.0).pass);
  EXPECT_THROW(isocap_report(5, 2, 16.0), DomainError);
  EXPECT_THROW(isocap_report(4, 2, 3.0), DomainError);
}

TEST(IsocapExp, BoundedAtAlpha0GrowsAbove) {
  const double a0 = mt_alpha0(4), b0 = mt_beta0(4);
  EXPECT_TRUE(isocap_exponential_report(4, {4, a0, b0}).pass);
  const auto above = isocap_exponential_report(4, {4, 2 * a0, b0});
  EXPECT_FALSE(above.pass);
  EXPECT_FALSE(above.notes.empty());
}

TEST(CapDefs, AgreeAndRefine) {
  for (const Condenser& c : {Condenser{3, 1, 1.0, 2.0}, Condenser{5, 2, 0.2, 1.0}, Condenser{4, 2, 1.0, 2.0}}) {
    const auto rep = cap_defs_report(c, 1024);
    EXPECT_TRUE(rep.pass) << rep.worst_ratio;
    EXPECT_LT(rep.extras.at("spread"), 1e-4);
  }
  EXPECT_THROW(cap_defs_report({5, 3, 1.0, 2.0}), UnsupportedError);
}

TEST(Wiener, Passes) {
  for (int n = 3; n <= 6; ++n) EXPECT_TRUE(wiener_crosscheck(n, 0.5, 2.0).pass);
}

TEST(Trace, TauMatchesBallCapacity) {
  const auto tp = TraceProblem::lebesgue(5, 2, 1.0, 3.0);
  for (double t : {1e-4, 0.1, 1.0, 5.0}) {
    const double rho = std::pow(t / ball_volume(5, 1.0), 0.2);
    EXPECT_NEAR(measure_radius(tp, t), rho, 1e-12);
    EXPECT_NEAR(tau_minimizing(tp, t), capacity_closed_form({5, 2, rho, 1.0}), 1e-9 * capacity_closed_form({5, 2, rho, 1.0}));
  }
  EXPECT_EQ(tau_minimizing(tp, tp.total_measure()), INFINITY);
  EXPECT_THROW(measure_radius(tp, 2 * tp.total_measure()), DomainError);
}

TEST(Trace, DensityQuadratureMatchesClosedForm) {
  TraceProblem tp;
  tp.n = 3;
  tp.k = 1;
  tp.R = 2.0;
  tp.q = 2.0;
  tp.density = [](double s) { return s * s; };
  // 4 pi t^5 / 5.
  for (double t : {0.3, 1.0, 2.0}) EXPECT_NEAR(tp.ball_measure(t), 4 * kPi * std::pow(t, 5) / 5, 1e-12 * std::pow(t, 5) * 4 * kPi);
}

TEST(Trace, LqNormQuadraticOracle) {
  // ||(1 - s^2)/2||_{L^2(B_1)}^2 in R^3 = 4 pi / 4 int (1-s^2)^2 s^2 = pi * 8/105.
  const auto tp = TraceProblem::lebesgue(3, 1, 1.0, 2.0);
  const auto p = quadratic_profile(3, 1, 1.0, 4096);
  EXPECT_NEAR(lq_mu_norm(tp, p, 2.0), std::sqrt(kPi * 8 / 105), 1e-6);
}

TEST(Trace, ConstantsAndDini) {
  const auto tp = TraceProblem::lebesgue(5, 2, 1.0, 3.0);
  const auto fam = trace_family(tp, 10, 7, 16);
  EXPECT_GT(fam.size(), 10u);
  const auto rep = trace_constants(tp, fam);
  EXPECT_TRUE(rep.pass) << rep.worst_ratio;
  const auto d = dini_integral(TraceProblem::lebesgue(5, 2, 1.0, 2.0));
  EXPECT_TRUE(d.converged);
  EXPECT_GT(d.value, 0.0);
  EXPECT_TRUE(dini_report(TraceProblem::lebesgue(5, 2, 1.0, 2.0)).pass);
  EXPECT_THROW(trace_constants(TraceProblem::lebesgue(5, 2, 1.0, 2.0), fam), DomainError);
}

TEST(Trace, ZeroMeasure) {
  TraceProblem tp = TraceProblem::lebesgue(5, 2, 1.0, 3.0);
  tp.cumulative = [](double) { return 0.0; };
  const auto rep = trace_constants(tp, {quadratic_profile(5, 2, 1.0)});
  EXPECT_TRUE(rep.pass);
}

TEST(Trace, ExpRequiresAlphaBelowAlpha0) {
  TraceProblem tp = TraceProblem::lebesgue(4, 2, 1.0, 2.0);
  tp.beta = mt_beta0(4);
  tp.alpha = mt_alpha0(4);
  EXPECT_THROW(exp_trace_constants(tp, {quadratic_profile(4, 2, 1.0)}), DomainError);
  tp.alpha = 0.5 * mt_alpha0(4);
  const auto fam = trace_family(tp, 5, 7, 16);
  EXPECT_TRUE(exp_trace_constants(tp, fam).pass);
}

TEST(AdmissibleMax, ExactMaxIsAdmissible) {
  const auto a = quadratic_profile(3, 1, 1.0, 1024);
  const auto b = quartic_profile(3, 1, 1.0, 1024);
  const auto m = admissible_max(a, b, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m.u(i), std::max(a.u(i), b.u(i)));
  EXPECT_NO_THROW(hessian_energy(m, 1));
  // The smoothed max approaches the exact one from below, within eps.
  for (double eps : {1e-2, 1e-4}) {
    const auto s = admissible_max(a, b, eps);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      EXPECT_LE(s.u(i), m.u(i) + 1e-15);
      EXPECT_GE(s.u(i), m.u(i) - eps);
    }
    EXPECT_NO_THROW(hessian_energy(s, 1));
  }
  EXPECT_THROW(admissible_max(a, quadratic_profile(3, 1, 1.0, 512), 0.0), DomainError);
}

TEST(Sobolev, ExtremalBeatsRandomProfiles) {
  const auto rep = sobolev_report({5, 2, 100.0, 20, 7});
  for (const auto& pt : rep.points) {
    if (pt.label == "random") {
      EXPECT_LE(pt.ratio, 1.0);
    }
  }
  EXPECT_GT(rep.extras.at("extremal_quotient_10R"), rep.extras.at("extremal_quotient_R"));
}

TEST(Morrey, BelowHolderBound) {
  const auto rep = morrey_report(3, 2, 1.0, 20, 7);
  EXPECT_TRUE(rep.pass) << rep.worst_ratio;
  EXPECT_THROW(morrey_report(4, 2, 1.0, 1, 7), DomainError);
}

TEST(MoserTrudinger, Report) {
  const auto rep = moser_trudinger_report({});
  EXPECT_TRUE(rep.pass) << rep.worst_ratio;
  EXPECT_NE(find_point(rep, "alpha0"), nullptr);
  EXPECT_NE(find_point(rep, "isocap-exp:increment-contraction"), nullptr);
}

}  // namespace
}  // namespace hesscap
