// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hesscap/capacity_lab.hpp"
#include "hesscap/cli.hpp"
#include "hesscap/hessian_field.hpp"
#include "hesscap/profiles.hpp"
#include "hesscap/radial.hpp"

namespace fs = std::filesystem;
using namespace hesscap;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [failed]";
    }
  }
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome newtonian() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Condenser c{3, 1, 1.0, 2.0};
  const double closed = capacity_closed_form(c);
  const double flux = capacity_flux(c);
  const double var = capacity_variational(c, 4096);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double ref = 8 * kPi;
  o.require(rel(closed, ref) < 1e-12, "closed " + num(closed));
  o.require(rel(flux, ref) < 1e-6, "flux " + num(flux));
  o.require(rel(var, ref) < 5e-3, "variational " + num(var));
  o.require(secs < 5.0, "time " + num(secs) + " s");
  return o;
}

Outcome functional_form() {
  Outcome o;
  for (auto [n, k] : {std::pair{5, 2}, {6, 2}, {6, 3}}) {
    const double g = 2.0 - static_cast<double>(n) / k;
    // At k = n/2 the power degenerates; log(R/r) takes its place.
    auto shape = [&](double r, double R) {
      return g == 0.0 ? std::pow(std::log(R / r), -k) : std::pow(std::pow(r, g) - std::pow(R, g), -k);
    };
    double lo_c = INFINITY, hi_c = 0.0, lo_v = INFINITY, hi_v = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double r = 0.1 * std::pow(10.0, i / 9.0);
      for (int j = 0; j < 10; ++j) {
        const double R = r * (1.5 + 8.5 * j / 9.0);
        const Condenser c{n, k, r, R};
        const double sc = shape(r, R);
        const double cc = capacity_closed_form(c) / sc;
        const double cv = capacity_variational(c, 1024) / sc;
        lo_c = std::min(lo_c, cc);
        hi_c = std::max(hi_c, cc);
        lo_v = std::min(lo_v, cv);
        hi_v = std::max(hi_v, cv);
      }
    }
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + ")";
    o.require(hi_c / lo_c - 1 <= 1e-9, tag + " closed spread " + num(hi_c / lo_c - 1));
    o.require(hi_v / lo_v - 1 <= 1e-2, tag + " variational spread " + num(hi_v / lo_v - 1));
  }
  return o;
}

Outcome log_branch() {
  Outcome o;
  const Condenser c{4, 2, 1.0, std::exp(1.0)};
  const double e = hessian_energy(condenser_extremal(c, 8192), 2);
  const double ref = 3 * kPi * kPi;
  o.require(rel(e, ref) <= 1e-6, "energy " + num(e) + " rel " + num(rel(e, ref)));
  o.require(rel(capacity_closed_form(c), ref) <= 1e-12, "closed form " + num(capacity_closed_form(c)));
  const auto rep = cap_defs_report(c, 1024, false);
  bool noted = false;
  for (const auto& note : rep.notes) noted |= note == log_branch_note();
  o.require(noted, "sign note emitted");
  return o;
}

Outcome cap_definitions() {
  Outcome o;
  for (const Condenser& c : {Condenser{3, 1, 1.0, 2.0}, Condenser{5, 2, 1.0, 2.0}, Condenser{4, 2, 1.0, std::exp(1.0)}}) {
    const auto rep = cap_defs_report(c, 4096, true);
    const double s = rep.extras.at("spread");
    const double s2 = rep.extras.at("spread_refined");
    const std::string tag = "(" + std::to_string(c.n) + "," + std::to_string(c.k) + ")";
    o.require(s <= 1e-2, tag + " spread " + num(s));
    o.require(s2 < s, tag + " refined " + num(s2));
  }
  return o;
}

Outcome weak_type() {
  Outcome o;
  for (auto [n, k] : {std::pair{3, 1}, {4, 2}, {5, 2}}) {
    const auto rep = weak_type_family_report(n, k, 50, kSeed, 64);
    const double eq = rep.extras.at("extremal_ratio_t1");
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + ")";
    double worst = 0.0;
    for (const auto& p : rep.points)
      if (p.label == "random") worst = std::max(worst, p.ratio);
    o.require(worst <= 1 + 1e-3, tag + " max " + num(worst));
    o.require(std::abs(eq - 1) <= 1e-6, tag + " t=1 " + num(eq));
  }
  return o;
}

Outcome strong_type() {
  Outcome o;
  for (auto [n, k] : {std::pair{3, 1}, {4, 2}, {5, 2}}) {
    const auto rep = strong_type_family_report(n, k, 50, kSeed, {2.0, static_cast<double>(n), 10.0}, {2.0, 4.0, 8.0});
    double strong = 0.0, level = 0.0;
    for (const auto& p : rep.points) {
      if (p.label == "strong") strong = std::max(strong, p.ratio);
      if (p.label == "level-a") level = std::max(level, p.ratio);
    }
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + ")";
    o.require(strong <= 1.0, tag + " strong " + num(strong));
    o.require(level <= 1.0, tag + " level-a " + num(level));
  }
  return o;
}

Outcome sobolev() {
  Outcome o;
  const auto rep = sobolev_report({5, 2, 100.0, 100, kSeed});
  double worst = 0.0;
  for (const auto& p : rep.points)
    if (p.label == "random") worst = std::max(worst, p.ratio);
  o.require(worst <= 1.0, "random/extremal " + num(worst));
  const double a = rep.extras.at("extremal_quotient_R");
  const double b = rep.extras.at("extremal_quotient_10R");
  o.require(std::abs(b - a) / b < 1e-2, "R=1e2 " + num(a) + " R=1e3 " + num(b) + " variation " + num(std::abs(b - a) / b));
  return o;
}

Outcome moser_trudinger() {
  Outcome o;
  o.require(rel(mt_alpha0(4), 4 * kPi * std::sqrt(3.0)) < 1e-12, "alpha0 " + num(mt_alpha0(4)));
  o.require(mt_beta0(4) == 1.5, "beta0 " + num(mt_beta0(4)));
  const auto rep = moser_trudinger_report({});
  for (const auto& p : rep.points) {
    if (!p.checked) continue;
    if (p.label == "bounded-below-alpha0" || p.label == "growth-above-alpha0" || p.label == "alpha0")
      o.require(p.ratio <= 1 + rep.slack, p.label + " " + num(p.ratio));
  }
  o.require(rep.pass, "report incl. isocap-exp on [1e-4, 0.9], sup " + num(rep.extras.at("isocap_exp_sup")));
  return o;
}

Outcome isocap_scale() {
  Outcome o;
  const auto rep = isocap_report(5, 2, 15.0);
  for (const auto& p : rep.points)
    if (p.label == "r-scale-invariance") o.require(p.ratio <= 1.0, "spread " + num(p.params[2]));
  o.require(rep.pass, "report sup " + num(rep.extras.at("sup")));
  return o;
}

Outcome trace() {
  Outcome o;
  for (double q : {3.0, 5.0, 15.0}) {
    const auto tp = TraceProblem::lebesgue(5, 2, 1.0, q);
    const auto rep = trace_constants(tp, trace_family(tp, 50, kSeed));
    o.require(rep.pass, "q=" + num(q) + " C1 " + num(rep.extras.at("C1")) + " C2 " + num(rep.extras.at("C2")));
  }
  const auto dini = dini_report(TraceProblem::lebesgue(5, 2, 1.0, 2.0));
  o.require(dini.pass, "I(q=2) " + num(dini.extras.at("I")));
  TraceProblem tp = TraceProblem::lebesgue(4, 2, 1.0, 2.0);
  tp.alpha = 0.5 * mt_alpha0(4);
  tp.beta = mt_beta0(4);
  const auto ex = exp_trace_constants(tp, trace_family(tp, 50, kSeed));
  o.require(ex.pass, "C3 " + num(ex.extras.at("C3")) + " C4 " + num(ex.extras.at("C4")));
  return o;
}

Outcome consistency() {
  Outcome o;
  for (int n = 2; n <= 4; ++n) {
    const auto p = quartic_profile(n, 1, 1.0, 8192);
    const auto f = ScalarField::sample_radial_ball(n, 1.0, 64, [](double s) { return s * s * s * s / 4 + s * s / 2 - 0.75; });
    for (int k = 1; k <= n; ++k) {
      const double grid = field_energy(f, k);
      const double radial = hessian_energy(p, k);
      o.require(rel(grid, radial) <= 0.02, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " " + num(rel(grid, radial)));
    }
  }
  // Divergence identity: gap at h and h/2.
  auto bump = [](double s) { return -std::pow(1 - s * s, 4); };
  for (auto [n, k] : {std::pair{2, 1}, {3, 2}}) {
    std::vector<double> gaps;
    for (int cells : {16, 32, 64}) {
      const auto f = ScalarField::sample_radial_ball(n, 1.0, cells, bump);
      const auto [lhs, rhs] = divergence_identity_check(f, k);
      gaps.push_back(std::abs(lhs - rhs) / std::abs(rhs));
    }
    const double order = std::log2(gaps[1] / gaps[2]);
    o.require(order >= 1.0, "gap n=" + std::to_string(n) + " k=" + std::to_string(k) + " " + num(gaps[2]) + " order " +
                                num(order));
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / ("hesscap-acceptance-" + std::to_string(::getpid()));
  std::vector<std::vector<std::string>> runs = {{"cap"}, {"sweep"}};
  for (const auto& id : verify_ids()) runs.push_back({"verify", id});
  std::size_t compared = 0;
  bool same = true;
  for (const auto& cmd : runs) {
    for (const char* tag : {"a", "b"}) {
      std::vector<std::string> args = {"hesscap"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      args.push_back("--out");
      args.push_back((base / tag).string());
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
  }
  for (const auto& e : fs::directory_iterator(base / "a")) {
    const auto other = base / "b" / e.path().filename();
    same = same && fs::exists(other) && slurp(e.path()) == slurp(other);
    ++compared;
  }
  fs::remove_all(base);
  o.require(same && compared > 0, std::to_string(compared) + " files byte-identical");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 newtonian cross-check", newtonian},
      {"AC2 capacity functional form", functional_form},
      {"AC3 k=n/2 log branch", log_branch},
      {"AC4 capacity definitions agree", cap_definitions},
      {"AC5 weak-type estimate", weak_type},
      {"AC6 strong-type estimate", strong_type},
      {"AC7 sobolev best constant", sobolev},
      {"AC8 moser-trudinger", moser_trudinger},
      {"AC9 isocap scale invariance", isocap_scale},
      {"AC10 trace constants", trace},
      {"AC11 cross-module consistency", consistency},
      {"AC12 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
