#include "hesscap/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hesscap/error.hpp"
#include "hesscap/report_io.hpp"

namespace hesscap {

const std::vector<std::string>& verify_ids() {
  static const std::vector<std::string> ids = {"sobolev", "morrey",     "moser-trudinger", "isocap",
                                               "isocap-exp", "cap-defs", "wiener",          "weak-type",
                                               "strong-type", "trace",   "trace-exp"};
  return ids;
}

// ---------------------------------------------------------------------------
// Config

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n") c.n = value.get<int>();
      else if (key == "k") c.k = value.get<int>();
      else if (key == "m") c.m = value.get<int>();
      else if (key == "profiles") c.profiles = value.get<int>();
      else if (key == "t_points") c.t_points = value.get<int>();
      else if (key == "points") c.points = value.get<int>();
      else if (key == "r") c.r = value.get<double>();
      else if (key == "R") c.R = value.get<double>();
      else if (key == "q") c.q = value.get<double>();
      else if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "alpha_scale") c.alpha_scale = value.get<double>();
      else if (key == "beta") c.beta = value.get<double>();
      else if (key == "slack") c.slack = value.get<double>();
      else if (key == "r_min") c.r_min = value.get<double>();
      else if (key == "r_max") c.r_max = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "curve") c.curve = value.get<std::string>();
      else if (key == "out") c.out_dir = value.get<std::string>();
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

void RunConfig::override_with(const RunConfig& f) {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(n, f.n);
  take(k, f.k);
  take(m, f.m);
  take(profiles, f.profiles);
  take(t_points, f.t_points);
  take(points, f.points);
  take(r, f.r);
  take(R, f.R);
  take(q, f.q);
  take(alpha, f.alpha);
  take(alpha_scale, f.alpha_scale);
  take(beta, f.beta);
  take(slack, f.slack);
  take(r_min, f.r_min);
  take(r_max, f.r_max);
  take(seed, f.seed);
  take(curve, f.curve);
  take(out_dir, f.out_dir);
  if (!f.command.empty()) command = f.command;
  if (!f.id.empty()) id = f.id;
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (cfg.out_dir) return *cfg.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "hesscap-out";
}

namespace {

int positive(const std::optional<int>& v, int fallback, const char* name) {
  const int x = v.value_or(fallback);
  if (x < 1) throw UsageError(std::string("--") + name + " must be positive");
  return x;
}

void apply_slack(const RunConfig& cfg, VerificationReport& rep) {
  if (!cfg.slack) return;
  if (!(*cfg.slack >= 0.0)) throw UsageError("--slack must be >= 0");
  rep.slack = *cfg.slack;
  rep.finalize();
}

std::string status_line(const VerificationReport& rep) {
  return rep.id + ": " + (rep.pass ? "PASS" : "FAIL") + " worst_ratio=" + format_number(rep.worst_ratio) +
         " empirical_constant=" + format_number(rep.empirical_constant) + " slack=" + format_number(rep.slack);
}

}  // namespace

// ---------------------------------------------------------------------------
// cap

CommandResult run_cap(const RunConfig& cfg) {
  const Condenser c{cfg.n.value_or(3), cfg.k.value_or(1), cfg.r.value_or(1.0), cfg.R.value_or(2.0)};
  const int m = positive(cfg.m, 4096, "m");
  c.validate_capacity();
  const double closed = capacity_closed_form(c);
  const double flux = capacity_flux(c);
  const double var = capacity_variational(c, m);
  const double lo = std::min({closed, flux, var});
  const double hi = std::max({closed, flux, var});
  const double spread = (hi - lo) / lo;

  CommandResult res;
  auto& rep = res.report;
  rep.id = "cap";
  rep.slack = kQuadratureSlack;
  rep.param_names = {"value", "closed_form"};
  rep.add("closed_form", {closed, closed}, 1.0);
  rep.add("flux", {flux, closed}, 1.0 + std::abs(flux - closed) / closed);
  rep.add("variational", {var, closed}, 1.0 + std::abs(var - closed) / closed);
  rep.add("spread", {spread, closed}, 1.0 + spread);
  rep.finalize();
  rep.empirical_constant = closed;
  rep.extras["closed_form"] = closed;
  rep.extras["flux"] = flux;
  rep.extras["variational"] = var;
  rep.extras["spread"] = spread;
  if (c.log_branch()) rep.notes.push_back(log_branch_note());
  apply_slack(cfg, rep);
  res.params = {{"n", c.n}, {"k", c.k}, {"r", json_number(c.r)}, {"R", json_number(c.R)}, {"m", m}};
  res.summary = {"closed_form " + format_number(closed), "flux " + format_number(flux),
                 "variational " + format_number(var), "spread " + format_number(spread)};
  if (c.log_branch()) res.summary.push_back("note: " + log_branch_note());
  return res;
}

// ---------------------------------------------------------------------------
// verify

CommandResult run_verify(const RunConfig& cfg) {
  const std::string& id = cfg.id;
  const auto& ids = verify_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("unknown verification id '" + id + "'");
  const std::uint64_t seed = cfg.seed.value_or(7);
  CommandResult res;
  auto& p = res.params;
  p["id"] = id;

  if (id == "sobolev") {
    SobolevCheck s;
    s.n = cfg.n.value_or(5);
    s.k = cfg.k.value_or(2);
    s.R = cfg.R.value_or(100.0);
    s.profiles = static_cast<std::size_t>(positive(cfg.profiles, 100, "profiles"));
    s.seed = seed;
    res.report = sobolev_report(s);
    p.update({{"n", s.n}, {"k", s.k}, {"R", json_number(s.R)}, {"profiles", s.profiles}, {"seed", seed}});
  } else if (id == "morrey") {
    const int n = cfg.n.value_or(3), k = cfg.k.value_or(2);
    const double R = cfg.R.value_or(1.0);
    const int count = positive(cfg.profiles, 50, "profiles");
    res.report = morrey_report(n, k, R, static_cast<std::size_t>(count), seed);
    p.update({{"n", n}, {"k", k}, {"R", json_number(R)}, {"profiles", count}, {"seed", seed}});
  } else if (id == "moser-trudinger") {
    MTCheck mt;
    mt.n = cfg.n.value_or(4);
    mt.R = cfg.R.value_or(1.0);
    res.report = moser_trudinger_report(mt);
    p.update({{"n", mt.n}, {"R", json_number(mt.R)}, {"below", mt.below}, {"above", mt.above}});
  } else if (id == "isocap") {
    const int n = cfg.n.value_or(5), k = cfg.k.value_or(2);
    const double q = cfg.q.value_or(static_cast<double>(n) * (k + 1) / std::max(1, n - 2 * k));
    IsocapSweep sw;
    sw.R = cfg.R.value_or(1.0);
    res.report = isocap_report(n, k, q, sw);
    p.update({{"n", n}, {"k", k}, {"q", json_number(q)}, {"R", json_number(sw.R)}});
  } else if (id == "isocap-exp") {
    const int n = cfg.n.value_or(4);
    MTParams mt{n, 0.0, 0.0};
    mt.alpha = cfg.alpha ? *cfg.alpha : cfg.alpha_scale.value_or(1.0) * mt.alpha0();
    mt.beta = cfg.beta.value_or(mt.beta0());
    IsocapSweep sw{cfg.R.value_or(1.0), 4, 16, 0.9};
    res.report = isocap_exponential_report(n, mt, sw);
    p.update({{"n", n}, {"alpha", json_number(mt.alpha)}, {"beta", json_number(mt.beta)}, {"R", json_number(sw.R)}});
  } else if (id == "cap-defs") {
    const Condenser c{cfg.n.value_or(3), cfg.k.value_or(1), cfg.r.value_or(1.0), cfg.R.value_or(2.0)};
    const int m = positive(cfg.m, 4096, "m");
    res.report = cap_defs_report(c, m);
    p.update({{"n", c.n}, {"k", c.k}, {"r", json_number(c.r)}, {"R", json_number(c.R)}, {"m", m}});
  } else if (id == "wiener") {
    const int n = cfg.n.value_or(3);
    const double r = cfg.r.value_or(1.0), R = cfg.R.value_or(2.0);
    res.report = wiener_crosscheck(n, r, R);
    p.update({{"n", n}, {"r", json_number(r)}, {"R", json_number(R)}});
  } else if (id == "weak-type") {
    const int n = cfg.n.value_or(5), k = cfg.k.value_or(2);
    const int count = positive(cfg.profiles, 50, "profiles");
    const int tp = positive(cfg.t_points, 64, "t-points");
    res.report = weak_type_family_report(n, k, static_cast<std::size_t>(count), seed, tp);
    p.update({{"n", n}, {"k", k}, {"profiles", count}, {"seed", seed}, {"t_points", tp}});
  } else if (id == "strong-type") {
    const int n = cfg.n.value_or(4), k = cfg.k.value_or(2);
    const int count = positive(cfg.profiles, 50, "profiles");
    const std::vector<double> as = {2.0, static_cast<double>(n), 10.0};
    const std::vector<double> levels = {2.0, 4.0, 8.0};
    res.report = strong_type_family_report(n, k, static_cast<std::size_t>(count), seed, as, levels);
    p.update({{"n", n}, {"k", k}, {"profiles", count}, {"seed", seed}, {"a", as}, {"level_a", levels}});
  } else if (id == "trace") {
    const int n = cfg.n.value_or(5), k = cfg.k.value_or(2);
    const double R = cfg.R.value_or(1.0), q = cfg.q.value_or(k + 1.0);
    const int count = positive(cfg.profiles, 50, "profiles");
    const TraceProblem tp = TraceProblem::lebesgue(n, k, R, q);
    if (q < k + 1) {
      res.report = dini_report(tp);
    } else {
      res.report = trace_constants(tp, trace_family(tp, static_cast<std::size_t>(count), seed));
    }
    p.update({{"n", n}, {"k", k}, {"R", json_number(R)}, {"q", json_number(q)}, {"profiles", count},
              {"seed", seed}, {"measure", "lebesgue"}});
  } else if (id == "trace-exp") {
    const int n = cfg.n.value_or(4);
    const double R = cfg.R.value_or(1.0);
    const int count = positive(cfg.profiles, 50, "profiles");
    TraceProblem tp = TraceProblem::lebesgue(n, n / 2, R, 2.0);
    tp.alpha = cfg.alpha ? *cfg.alpha : cfg.alpha_scale.value_or(0.5) * mt_alpha0(n);
    tp.beta = cfg.beta.value_or(mt_beta0(n));
    res.report = exp_trace_constants(tp, trace_family(tp, static_cast<std::size_t>(count), seed));
    p.update({{"n", n}, {"k", n / 2}, {"R", json_number(R)}, {"alpha", json_number(tp.alpha)},
              {"beta", json_number(tp.beta)}, {"profiles", count}, {"seed", seed}, {"measure", "lebesgue"}});
  }
  apply_slack(cfg, res.report);
  res.summary = {status_line(res.report)};
  return res;
}

// ---------------------------------------------------------------------------
// sweep

namespace {

std::vector<double> linspace(double a, double b, int points) {
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (points - 1);
  return v;
}

const std::vector<std::string>& curve_names() {
  static const std::vector<std::string> names = {"capacity", "weak-type", "mt-alpha", "isocap"};
  return names;
}

nlohmann::json sweep_schema() {
  nlohmann::json s;
  s["schema_version"] = kSchemaVersion;
  s["curves"]["capacity"] = {
      {"file", "sweep_capacity.csv"},
      {"description", "condenser capacity against the inner radius at fixed R"},
      {"columns",
       {{"r", "inner radius"},
        {"R", "outer radius"},
        {"closed_form", "closed-form capacity"},
        {"flux", "flux of the extremal at r"},
        {"variational", "discrete minimum energy"}}}};
  s["curves"]["weak-type"] = {
      {"file", "sweep_weak-type.csv"},
      {"description", "weak-type ratio against the level t on the condenser extremal (r = R/2)"},
      {"columns",
       {{"t", "level"}, {"rho", "radius of M_t"}, {"capacity", "cap_k(M_t, B_R)"}, {"ratio", "cap t^(k+1) / energy"}}}};
  s["curves"]["mt-alpha"] = {
      {"file", "sweep_mt-alpha.csv"},
      {"description", "Moser-Trudinger functional over the truncated-log family against alpha"},
      {"columns",
       {{"alpha_over_alpha0", "alpha / alpha_0"},
        {"alpha", "alpha"},
        {"value_a_min", "functional at the smallest family parameter"},
        {"value_a_mid", "functional at the middle family parameter"},
        {"value_a_max", "functional at the largest family parameter"},
        {"sup", "max over the family"}}}};
  s["curves"]["isocap"] = {
      {"file", "sweep_isocap.csv"},
      {"description", "critical-q isocapacitary ratio against r at fixed R/r"},
      {"columns",
       {{"R_over_r", "outer over inner radius"},
        {"r", "inner radius"},
        {"R", "outer radius"},
        {"value", "|B_r|^((k+1)/q) / cap_k(B_r, B_R)"}}}};
  return s;
}

}  // namespace

CommandResult run_sweep(const RunConfig& cfg) {
  const std::string which = cfg.curve.value_or("all");
  const auto& names = curve_names();
  if (which != "all" && std::find(names.begin(), names.end(), which) == names.end()) {
    throw UsageError("unknown curve '" + which + "'");
  }
  const int points = cfg.points.value_or(16);
  const double r_min = cfg.r_min.value_or(0.05), r_max = cfg.r_max.value_or(0.95);
  if (points < 2 || !(r_min < r_max) || !(r_min > 0.0) || !(r_max < 1.0)) {
    throw UsageError("empty sweep range: need points >= 2 and 0 < r-min < r-max < 1");
  }
  const double R = cfg.R.value_or(1.0);
  const int m = positive(cfg.m, 1024, "m");
  auto want = [&](const std::string& c) { return which == "all" || which == c; };

  CommandResult res;
  auto& rep = res.report;
  rep.id = "sweep";
  rep.slack = kExactSlack;
  rep.param_names = {"value"};
  res.params = {{"curve", which}, {"points", points}, {"r_min", json_number(r_min)}, {"r_max", json_number(r_max)},
                {"R", json_number(R)}, {"m", m}};

  if (want("capacity")) {
    const int n = cfg.n.value_or(3), k = cfg.k.value_or(1);
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    double prev = 0.0;
    for (double f : linspace(r_min, r_max, points)) {
      const Condenser c{n, k, f * R, R};
      const double closed = capacity_closed_form(c);
      rows.push_back({c.r, R, closed, capacity_flux(c), capacity_variational(c, m)});
      if (prev > 0.0) worst = std::max(worst, prev / closed);
      prev = closed;
    }
    rep.add("capacity-increasing-in-r", {worst}, worst);
    res.files.emplace_back("sweep_capacity.csv",
                           table_to_csv({"r", "R", "closed_form", "flux", "variational"}, rows));
    res.params["capacity"] = {{"n", n}, {"k", k}};
  }
  if (want("weak-type")) {
    const int n = cfg.n.value_or(5), k = cfg.k.value_or(2);
    const auto ext = condenser_extremal(Condenser{n, k, 0.5 * R, R});
    const auto one = weak_type_report(ext, k, default_t_grid(1.0, points));
    std::vector<std::vector<double>> rows;
    for (const auto& pt : one.points) rows.push_back({pt.params[0], pt.params[1], pt.params[2], pt.ratio});
    rep.add("weak-type-ratio", {one.worst_ratio}, one.worst_ratio);
    res.files.emplace_back("sweep_weak-type.csv", table_to_csv({"t", "rho", "capacity", "ratio"}, rows));
    res.params["weak-type"] = {{"n", n}, {"k", k}};
  }
  if (want("mt-alpha")) {
    const int n = cfg.n.value_or(4);
    const double a0 = mt_alpha0(n);
    const auto family_a = linspace(0.5, 8.0, 16);
    std::vector<RadialProfile> family;
    for (double a : family_a) family.push_back(truncated_log(n, R, a));
    std::vector<std::vector<double>> rows;
    for (double s : linspace(0.5, 1.5, points)) {
      std::vector<double> vals;
      for (const auto& prof : family) vals.push_back(moser_trudinger_functional(prof, MTParams{n, s * a0, mt_beta0(n)}, n / 2).value);
      const double sup = *std::max_element(vals.begin(), vals.end());
      rows.push_back({s, s * a0, vals.front(), vals[vals.size() / 2], vals.back(), sup});
      if (s <= 0.9 + 1e-12) rep.add("bounded-below-alpha0", {s}, vals.back() / vals[vals.size() / 2]);
      if (s >= 1.1 - 1e-12) rep.add("growth-above-alpha0", {s}, vals[vals.size() / 2] / vals.back());
    }
    res.files.emplace_back("sweep_mt-alpha.csv",
                           table_to_csv({"alpha_over_alpha0", "alpha", "value_a_min", "value_a_mid", "value_a_max", "sup"},
                                        rows));
    res.params["mt-alpha"] = {{"n", n}};
  }
  if (want("isocap")) {
    const int n = cfg.n.value_or(5), k = cfg.k.value_or(2);
    if (!(2 * k < n)) throw UsageError("isocap curve needs 2k < n");
    const double q = static_cast<double>(n) * (k + 1) / (n - 2 * k);
    std::vector<std::vector<double>> rows;
    for (double span : {10.0, 100.0, 1000.0}) {
      double lo = INFINITY, hi = 0.0;
      for (double r : log_grid(1e-2, 1e2, points)) {
        const double v = std::pow(ball_volume(n, r), (k + 1) / q) / capacity_closed_form(Condenser{n, k, r, span * r});
        rows.push_back({span, r, span * r, v});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      rep.add("isocap-flat-in-r", {span}, (hi / lo - 1.0) / 0.02);
    }
    res.files.emplace_back("sweep_isocap.csv", table_to_csv({"R_over_r", "r", "R", "value"}, rows));
    res.params["isocap"] = {{"n", n}, {"k", k}, {"q", json_number(q)}};
  }
  res.files.emplace_back("sweep_schema.json", dump_json(sweep_schema()));
  rep.finalize();
  rep.empirical_constant = rep.worst_ratio;
  apply_slack(cfg, rep);
  res.summary = {status_line(rep)};
  return res;
}

// ---------------------------------------------------------------------------
// Output and entry point

std::vector<std::filesystem::path> write_result(const CommandResult& result, const std::string& stem,
                                                const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  const auto json_path = dir / (stem + ".json");
  write_atomic(json_path, dump_json(report_to_json(result.report, result.params)));
  written.push_back(json_path);
  const auto csv_path = dir / (stem + ".csv");
  write_atomic(csv_path, report_to_csv(result.report));
  written.push_back(csv_path);
  for (const auto& [name, content] : result.files) {
    write_atomic(dir / name, content);
    written.push_back(dir / name);
  }
  return written;
}

namespace {

void add_parameter_flags(CLI::App* sub, RunConfig& f) {
  sub->add_option("--n", f.n, "space dimension");
  sub->add_option("--k", f.k, "Hessian order");
  sub->add_option("--r", f.r, "inner radius");
  sub->add_option("--R", f.R, "outer radius");
  sub->add_option("--q", f.q, "integrability exponent");
  sub->add_option("--alpha", f.alpha, "exponential coefficient alpha");
  sub->add_option("--alpha-scale", f.alpha_scale, "alpha as a multiple of alpha_0");
  sub->add_option("--beta", f.beta, "exponential power beta");
  sub->add_option("--m", f.m, "cells for the variational capacity");
  sub->add_option("--profiles", f.profiles, "random profiles per family");
  sub->add_option("--seed", f.seed, "RNG seed");
  sub->add_option("--t-points", f.t_points, "level values per profile");
  sub->add_option("--slack", f.slack, "override the report slack");
  sub->add_option("--out", f.out_dir, std::string("output directory (default $") + kOutputDirEnv + " or ./hesscap-out)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hessian capacity laboratory"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values");

  auto* cap = app.add_subcommand("cap", "capacity of a ball condenser by three routes");
  add_parameter_flags(cap, flags);
  auto* verify = app.add_subcommand("verify", "run one verification report");
  verify->add_option("id", flags.id, "verification id")->required();
  add_parameter_flags(verify, flags);
  auto* sweep = app.add_subcommand("sweep", "plot-ready parameter sweeps");
  add_parameter_flags(sweep, flags);
  sweep->add_option("--curve", flags.curve, "capacity | weak-type | mt-alpha | isocap | all");
  sweep->add_option("--points", flags.points, "points per curve");
  sweep->add_option("--r-min", flags.r_min, "smallest r/R");
  sweep->add_option("--r-max", flags.r_max, "largest r/R");
  for (auto* sub : {cap, verify, sweep}) sub->add_option("--config", config_path, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read config file " + config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file " + config_path + ": " + e.what());
      }
      cfg = RunConfig::from_json(j);
    }
    cfg.override_with(flags);

    CommandResult result;
    std::string stem;
    if (cap->parsed()) {
      cfg.command = "cap";
      result = run_cap(cfg);
      stem = "cap";
    } else if (verify->parsed()) {
      cfg.command = "verify";
      result = run_verify(cfg);
      stem = cfg.id;
    } else {
      cfg.command = "sweep";
      result = run_sweep(cfg);
      stem = "sweep";
    }
    for (const auto& line : result.summary) out << line << "\n";
    for (const auto& path : write_result(result, stem, output_dir(cfg))) out << "wrote " << path.string() << "\n";
    return result.report.pass ? 0 : 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hesscap
