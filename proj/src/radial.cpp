#include "hesscap/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "hesscap/error.hpp"
#include "hesscap/simd/kernels.hpp"

namespace hesscap {

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n, double radius) { return sphere_area(n) * std::pow(radius, n) / n; }

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(int n, int k, std::vector<double> r, std::vector<double> u, Derivatives d)
    : n_(n), k_(k), r_(std::move(r)), u_(std::move(u)), d_(std::move(d)) {
  if (n_ < 1 || k_ < 1 || k_ > n_) throw DomainError("RadialProfile: need 1 <= k <= n");
  const std::size_t m = r_.size();
  if (m < 3) throw DomainError("RadialProfile: need at least 3 nodes");
  if (u_.size() != m || d_.du_left.size() != m || d_.du_right.size() != m || d_.d2u_left.size() != m ||
      d_.d2u_right.size() != m) {
    throw DomainError("RadialProfile: array lengths differ");
  }
  if (r_.front() != 0.0) throw DomainError("RadialProfile: first node must be s = 0");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(r_[i] > r_[i - 1])) throw DomainError("RadialProfile: nodes must be strictly increasing");
  }
  double scale = 0.0;
  for (double v : u_) {
    if (!std::isfinite(v)) throw DomainError("RadialProfile: non-finite value");
    scale = std::max(scale, std::abs(v));
  }
  if (u_.back() != 0.0) throw DomainError("RadialProfile: u(R) must be 0");
  for (double v : u_) {
    if (v > 1e-12 * scale) throw DomainError("RadialProfile: values must satisfy u <= 0");
  }
  // Symmetry at the origin.
  d_.du_left[0] = 0.0;
  d_.du_right[0] = 0.0;
  d_.d2u_left[0] = d_.d2u_right[0];
}

RadialProfile RadialProfile::from_samples(int n, int k, std::vector<double> r, std::vector<double> u) {
  const std::size_t m = r.size();
  if (m < 3 || u.size() != m) throw DomainError("RadialProfile: need at least 3 matching samples");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(r[i] > r[i - 1])) throw DomainError("RadialProfile: nodes must be strictly increasing");
  }
  std::vector<double> du(m), d2u(m);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h1 = r[i] - r[i - 1];
    const double h2 = r[i + 1] - r[i];
    du[i] = -h2 / (h1 * (h1 + h2)) * u[i - 1] + (h2 - h1) / (h1 * h2) * u[i] + h1 / (h2 * (h1 + h2)) * u[i + 1];
    d2u[i] = 2.0 * (u[i - 1] / (h1 * (h1 + h2)) - u[i] / (h1 * h2) + u[i + 1] / (h2 * (h1 + h2)));
  }
  // Even reflection at the origin: u(-r_1) = u(r_1).
  du[0] = 0.0;
  d2u[0] = 2.0 * (u[1] - u[0]) / ((r[1] - r[0]) * (r[1] - r[0]));
  {
    const std::size_t i = m - 1;
    const double h1 = r[i] - r[i - 1];
    const double h2 = r[i - 1] - r[i - 2];
    // Backward three-point formulas on nodes i-2, i-1, i.
    du[i] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * u[i] - (h1 + h2) / (h1 * h2) * u[i - 1] +
            h1 / (h2 * (h1 + h2)) * u[i - 2];
    d2u[i] = 2.0 * (u[i] / (h1 * (h1 + h2)) - u[i - 1] / (h1 * h2) + u[i - 2] / (h2 * (h1 + h2)));
  }
  Derivatives d{du, du, d2u, d2u};
  return RadialProfile(n, k, std::move(r), std::move(u), std::move(d));
}

RadialProfile RadialProfile::from_functions(int n, int k, std::vector<double> r,
                                            const std::function<double(double)>& u,
                                            const std::function<double(double)>& du,
                                            const std::function<double(double)>& d2u) {
  const std::size_t m = r.size();
  std::vector<double> uv(m), d1(m), d2(m);
  for (std::size_t i = 0; i < m; ++i) {
    uv[i] = u(r[i]);
    d1[i] = du(r[i]);
    d2[i] = d2u(r[i]);
  }
  uv.back() = 0.0;
  Derivatives d{d1, d1, d2, d2};
  return RadialProfile(n, k, std::move(r), std::move(uv), std::move(d));
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double v : u_) m = std::max(m, std::abs(v));
  return m;
}

double RadialProfile::value_at(double s) const {
  if (s >= r_.back()) return 0.0;
  if (s <= 0.0) return u_.front();
  const auto it = std::upper_bound(r_.begin(), r_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  const double h = r_[i + 1] - r_[i];
  const double t = (s - r_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * u_[i] + h10 * h * d_.du_right[i] + h01 * u_[i + 1] + h11 * h * d_.du_left[i + 1];
}

RadialProfile RadialProfile::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("RadialProfile::scaled: factor must be positive");
  auto mul = [c](std::vector<double> v) {
    for (double& x : v) x *= c;
    return v;
  };
  Derivatives d{mul(d_.du_left), mul(d_.du_right), mul(d_.d2u_left), mul(d_.d2u_right)};
  return RadialProfile(n_, k_, r_, mul(u_), std::move(d));
}

std::string RadialProfile::to_csv() const {
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%zu\n", n_, k_, r_.back(), r_.size() - 1);
  out += buf;
  for (std::size_t i = 0; i < r_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r_[i], u_[i]);
    out += buf;
  }
  return out;
}

RadialProfile RadialProfile::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("RadialProfile CSV: missing header");
  int n = 0, k = 0;
  double R = 0.0;
  std::size_t m = 0;
  if (std::sscanf(line.c_str(), "%d,%d,%lf,%zu", &n, &k, &R, &m) != 4) {
    throw DomainError("RadialProfile CSV: header must be n,k,R,m");
  }
  std::vector<double> r, u;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a = 0.0, b = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) != 2) throw DomainError("RadialProfile CSV: bad row '" + line + "'");
    r.push_back(a);
    u.push_back(b);
  }
  if (r.size() != m + 1) throw DomainError("RadialProfile CSV: expected m + 1 rows");
  if (r.back() != R) throw DomainError("RadialProfile CSV: last node must equal R");
  return from_samples(n, k, std::move(r), std::move(u));
}

// ---------------------------------------------------------------------------
// Condenser / MT parameters

void Condenser::validate() const {
  if (n < 2) throw DomainError("condenser: n must be >= 2");
  if (k < 1 || k > n) throw DomainError("condenser: need 1 <= k <= n");
  if (!(r > 0.0) || !(R > r) || !std::isfinite(R)) throw DomainError("condenser: need 0 < r < R < inf");
}

void Condenser::validate_capacity() const {
  validate();
  if (2 * k > n) throw UnsupportedError("unsupported: k exceeds n/2");
}

double mt_alpha0(int n) {
  if (n < 2 || n % 2 != 0) throw DomainError("mt_alpha0: n must be even");
  const int k = n / 2;
  return n * std::pow(sphere_area(n) / k * binomial(n - 1, k - 1), 2.0 / n);
}

double mt_beta0(int n) { return 1.0 + 2.0 / n; }

double MTParams::alpha0() const { return mt_alpha0(n); }
double MTParams::beta0() const { return mt_beta0(n); }

// ---------------------------------------------------------------------------
// Radial operators

Spectrum radial_spectrum(double du, double d2u, double s, int n) {
  if (!(s > 0.0)) throw DomainError("radial_spectrum: s must be positive");
  if (n < 1) throw DomainError("radial_spectrum: n must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(n), du / s);
  v[0] = d2u;
  return Spectrum(std::move(v));
}

std::vector<double> radial_fk(const RadialProfile& p, int k) {
  if (k < 1 || k > p.dim()) throw DomainError("radial_fk: k out of range");
  const auto& d = p.derivatives();
  std::vector<double> du = d.du_right;
  std::vector<double> d2u = d.d2u_right;
  du.back() = d.du_left.back();
  d2u.back() = d.d2u_left.back();
  std::vector<double> out(p.size());
  simd::active_kernels().radial_fk(du, d2u, p.nodes(), p.dim(), k, out);
  return out;
}

double trapezoid(std::span<const double> nodes, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) s += 0.5 * (nodes[i + 1] - nodes[i]) * (values[i] + values[i + 1]);
  return s;
}

namespace {

/// Cell-wise trapezoid weights: right limits feed the cell to the right of a
/// node, left limits the cell to the left.
struct TrapezoidWeights {
  std::vector<double> right, left;
  explicit TrapezoidWeights(std::span<const double> r) : right(r.size(), 0.0), left(r.size(), 0.0) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double half = 0.5 * (r[i + 1] - r[i]);
      right[i] = half;
      left[i + 1] = half;
    }
  }
  double integrate(std::span<const double> f_right, std::span<const double> f_left) const {
    const auto& kern = simd::active_kernels();
    return kern.dot(right, f_right) + kern.dot(left, f_left);
  }
};

void check_admissible(const RadialProfile& p, int k, double tol) {
  const auto& d = p.derivatives();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const double du = side == 0 ? d.du_right[i] : d.du_left[i];
      const double d2u = side == 0 ? d.d2u_right[i] : d.d2u_left[i];
      const Spectrum s = i == 0 ? Spectrum(std::vector<double>(static_cast<std::size_t>(p.dim()), d2u))
                                : radial_spectrum(du, d2u, p.r(i), p.dim());
      if (!is_k_admissible(s, k, tol)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "profile is not %d-admissible at node %zu (s=%.6g, u'=%.6g, u''=%.6g)", k, i,
                      p.r(i), du, d2u);
        throw AdmissibilityError(buf);
      }
    }
  }
}

}  // namespace

EnergyResult hessian_energy_detailed(const RadialProfile& p, int k, const RadialOptions& opts) {
  const int n = p.dim();
  if (k < 1 || k > n) throw DomainError("hessian_energy: k out of range");
  check_admissible(p, k, opts.tol_adm);

  const auto& kern = simd::active_kernels();
  const auto& d = p.derivatives();
  const std::size_t m = p.size();
  const TrapezoidWeights w(p.nodes());
  const double omega = sphere_area(n);
  const double flux_const = omega * binomial(n - 1, k - 1) / k;

  std::vector<double> fr(m), fl(m);
  kern.flux_integrand(d.du_right, p.nodes(), n, k, fr);
  kern.flux_integrand(d.du_left, p.nodes(), n, k, fl);
  EnergyResult res;
  res.flux = flux_const * w.integrate(fr, fl);

  // Direct form: regular part of (-u) F_k s^{n-1}, plus the singular F_k mass
  // carried by each corner, (omega_n C/k) s^{n-k} [(u')^k].
  std::vector<double> gr(m), gl(m);
  kern.radial_fk(d.du_right, d.d2u_right, p.nodes(), n, k, gr);
  kern.radial_fk(d.du_left, d.d2u_left, p.nodes(), n, k, gl);
  double corners = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double weight = -p.u(i) * std::pow(p.r(i), n - 1);
    gr[i] *= weight;
    gl[i] *= weight;
    if (p.is_kink(i)) {
      corners += -p.u(i) * std::pow(p.r(i), n - k) * (std::pow(d.du_right[i], k) - std::pow(d.du_left[i], k));
    }
  }
  res.direct = omega * w.integrate(gr, gl) + flux_const * corners;

  const double scale = std::max(std::abs(res.flux), std::abs(res.direct));
  res.relative_gap = scale > 0.0 ? std::abs(res.flux - res.direct) / scale : 0.0;
  if (res.relative_gap > 10.0 * opts.quad_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "hessian_energy: direct form %.12g and flux form %.12g disagree (gap %.3g)",
                  res.direct, res.flux, res.relative_gap);
    throw IntegrationError(buf);
  }
  return res;
}

double hessian_energy(const RadialProfile& p, int k, const RadialOptions& opts) {
  return hessian_energy_detailed(p, k, opts).flux;
}

// ---------------------------------------------------------------------------
// Condenser capacity

double capacity_constant(int n, int k) {
  const double base = sphere_area(n) * binomial(n - 1, k - 1) / k;
  if (2 * k == n) return base;
  return base * std::pow(static_cast<double>(n) / k - 2.0, k);
}

namespace {

/// Exponent 2 - n/k of the fundamental profile s^{2-n/k}.
double radial_exponent(const Condenser& c) { return 2.0 - static_cast<double>(c.n) / c.k; }

/// r^g - R^g computed as R^g expm1(g log(r/R)) to survive r -> R.
double power_gap(const Condenser& c) {
  const double g = radial_exponent(c);
  return std::pow(c.R, g) * std::expm1(g * std::log(c.r / c.R));
}

/// u'(s) of the extremal on [r, R].
double extremal_slope(const Condenser& c, double s) {
  if (c.log_branch()) return 1.0 / (s * std::log(c.R / c.r));
  const double g = radial_exponent(c);
  return -g * std::pow(s, g - 1.0) / power_gap(c);
}

}  // namespace

std::vector<double> geometric_nodes(double a, double b, int cells) {
  if (!(a > 0.0) || !(b > a) || cells < 1) throw DomainError("geometric_nodes: need 0 < a < b and cells >= 1");
  std::vector<double> s(static_cast<std::size_t>(cells) + 1);
  const double ratio = std::log(b / a);
  for (int i = 0; i <= cells; ++i) s[static_cast<std::size_t>(i)] = a * std::exp(ratio * i / cells);
  s.front() = a;
  s.back() = b;
  return s;
}

std::vector<double> clustered_nodes(double R, int cells, double s_min) {
  if (!(R > 0.0) || cells < 2) throw DomainError("clustered_nodes: need R > 0 and cells >= 2");
  std::vector<double> s(static_cast<std::size_t>(cells) + 1);
  const double uniform = R / cells;
  if (!(s_min > 0.0) || s_min >= uniform) {
    for (int i = 0; i <= cells; ++i) s[static_cast<std::size_t>(i)] = uniform * i;
  } else {
    // First cell of s = R sinh(b t)/sinh(b) is about R b / (cells sinh b); pick b.
    double lo = 1e-6, hi = 700.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double first = R * std::sinh(mid / cells) / std::sinh(mid);
      (first > s_min ? lo : hi) = mid;
    }
    const double b = 0.5 * (lo + hi);
    for (int i = 0; i <= cells; ++i) s[static_cast<std::size_t>(i)] = R * std::sinh(b * i / cells) / std::sinh(b);
  }
  s.front() = 0.0;
  s.back() = R;
  return s;
}

RadialProfile condenser_extremal(const Condenser& c, int m) {
  c.validate_capacity();
  if (m < 16) throw DomainError("condenser_extremal: need at least 16 cells");
  const int inner = std::max(4, m / 8);
  const int outer = m - inner;
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i < inner; ++i) s.push_back(c.r * i / inner);
  const auto ring = geometric_nodes(c.r, c.R, outer);
  s.insert(s.end(), ring.begin(), ring.end());

  const std::size_t nodes = s.size();
  const std::size_t corner = static_cast<std::size_t>(inner);
  std::vector<double> u(nodes), du(nodes, 0.0), d2u(nodes, 0.0);
  const double g = radial_exponent(c);
  const double log_ratio = std::log(c.R / c.r);
  const double gap = c.log_branch() ? 0.0 : std::expm1(g * std::log(c.r / c.R));
  for (std::size_t i = 0; i < nodes; ++i) {
    if (i <= corner) {
      u[i] = -1.0;
      continue;
    }
    const double x = s[i];
    if (c.log_branch()) {
      u[i] = -std::log(c.R / x) / log_ratio;
    } else {
      u[i] = -std::expm1(g * std::log(x / c.R)) / gap;
    }
    du[i] = extremal_slope(c, x);
    d2u[i] = c.log_branch() ? -du[i] / x : (g - 1.0) * du[i] / x;
  }
  u.back() = 0.0;
  RadialProfile::Derivatives d{du, du, d2u, d2u};
  d.du_right[corner] = extremal_slope(c, c.r);
  d.d2u_right[corner] = c.log_branch() ? -d.du_right[corner] / c.r : (g - 1.0) * d.du_right[corner] / c.r;
  return RadialProfile(c.n, c.k, std::move(s), std::move(u), std::move(d));
}

double capacity_closed_form(const Condenser& c) {
  c.validate_capacity();
  if (c.log_branch()) return capacity_constant(c.n, c.k) * std::pow(std::log(c.R / c.r), -c.k);
  return capacity_constant(c.n, c.k) * std::pow(power_gap(c), -c.k);
}

double capacity_flux(const Condenser& c) {
  c.validate_capacity();
  const double slope = extremal_slope(c, c.r);
  return sphere_area(c.n) * binomial(c.n - 1, c.k - 1) / c.k * std::pow(c.r, c.n - c.k) * std::pow(slope, c.k);
}

VariationalResult variational_minimizer(const Condenser& c, int m) {
  c.validate_capacity();
  if (m < 64) throw DomainError("capacity_variational: need m >= 64");
  const int n = c.n;
  const int k = c.k;
  const auto s = geometric_nodes(c.r, c.R, m);
  const int p = n - k + 1;

  // W_i = int_cell s^{n-k} ds = dx * (b^p - a^p) / (p (b - a)), summed without cancellation.
  std::vector<double> dx(static_cast<std::size_t>(m)), ratio(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double a = s[static_cast<std::size_t>(i)];
    const double b = s[static_cast<std::size_t>(i) + 1];
    double sum = 0.0;
    for (int j = 0; j < p; ++j) sum += std::pow(a, j) * std::pow(b, p - 1 - j);
    dx[static_cast<std::size_t>(i)] = b - a;
    ratio[static_cast<std::size_t>(i)] = p / sum;  // dx / W
  }

  // Euler-Lagrange: (u'_i)^k W_i / dx_i = phi on every cell. Bisect phi so the
  // profile climbs from -1 to 0.
  auto rise = [&](double log_phi) {
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      total += dx[static_cast<std::size_t>(i)] * std::exp((log_phi + std::log(ratio[static_cast<std::size_t>(i)])) / k);
    }
    return total;
  };
  double lo = -1.0, hi = 1.0;
  int guard = 0;
  while (rise(lo) > 1.0 && guard++ < 4000) lo -= 2.0;
  while (rise(hi) < 1.0 && guard++ < 4000) hi += 2.0;
  if (guard >= 4000) throw ConvergenceError("capacity_variational: could not bracket the first integral");
  int it = 0;
  constexpr int kMaxIterations = 200;
  while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo))) {
    if (++it > kMaxIterations) throw ConvergenceError("capacity_variational: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (rise(mid) < 1.0 ? lo : hi) = mid;
  }
  const double log_phi = 0.5 * (lo + hi);

  std::vector<double> slope(static_cast<std::size_t>(m));
  double energy = 0.0;
  double climbed = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    slope[ui] = std::exp((log_phi + std::log(ratio[ui])) / k);
    climbed += slope[ui] * dx[ui];
  }
  // Absorb the bisection residual so the profile meets u(R) = 0 exactly.
  for (double& v : slope) v /= climbed;
  double last_flux = 0.0;
  double telescoped = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const double w = dx[ui] / ratio[ui];
    energy += std::pow(slope[ui], k + 1) * w;
    const double flux = std::pow(slope[ui], k) * w / dx[ui];
    telescoped += flux - last_flux;
    last_flux = flux;
  }
  const double norm = sphere_area(n) * binomial(n - 1, k - 1) / k;

  // Profile on [0, R]: u = -1 inside, piecewise linear outside.
  const int inner = std::max(4, m / 8);
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(inner + m) + 1);
  for (int i = 0; i < inner; ++i) r.push_back(c.r * i / inner);
  r.insert(r.end(), s.begin(), s.end());
  const std::size_t nodes = r.size();
  std::vector<double> u(nodes, -1.0);
  RadialProfile::Derivatives d{std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0),
                               std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0)};
  double level = -1.0;
  for (int i = 0; i < m; ++i) {
    const std::size_t node = static_cast<std::size_t>(inner + i);
    d.du_right[node] = slope[static_cast<std::size_t>(i)];
    d.du_left[node + 1] = slope[static_cast<std::size_t>(i)];
    level += slope[static_cast<std::size_t>(i)] * dx[static_cast<std::size_t>(i)];
    u[node + 1] = std::min(level, 0.0);
  }
  u.back() = 0.0;

  return VariationalResult{norm * energy, norm * telescoped, last_flux, it,
                           RadialProfile(n, k, std::move(r), std::move(u), std::move(d))};
}

double capacity_variational(const Condenser& c, int m) { return variational_minimizer(c, m).capacity; }

// ---------------------------------------------------------------------------
// Functionals

double sobolev_quotient(const RadialProfile& p, double q, int k, const RadialOptions& opts) {
  if (!(q >= 1.0)) throw DomainError("sobolev_quotient: need q >= 1");
  const double energy = hessian_energy(p, k, opts);
  if (!(energy > 0.0)) throw DomainError("sobolev_quotient: zero energy");
  const double phi_norm = std::pow(energy, 1.0 / (k + 1));
  if (std::isinf(q)) return p.max_abs() / phi_norm;
  // Normalize by max|u| before raising to q to keep large q finite.
  const double top = p.max_abs();
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    f[i] = std::pow(std::abs(p.u(i)) / top, q) * std::pow(p.r(i), p.dim() - 1);
  }
  const double lq = top * std::pow(sphere_area(p.dim()) * trapezoid(p.nodes(), f), 1.0 / q);
  return lq / phi_norm;
}

MTResult moser_trudinger_functional(const RadialProfile& p, const MTParams& mt, int k, const RadialOptions& opts) {
  if (2 * k != p.dim()) throw DomainError("moser_trudinger_functional: requires k = n/2");
  if (!(mt.alpha > 0.0)) throw DomainError("moser_trudinger_functional: alpha must be positive");
  const double energy = hessian_energy(p, k, opts);
  if (!(energy > 0.0)) throw DomainError("moser_trudinger_functional: zero energy");
  const double norm = std::pow(energy, 1.0 / (k + 1));
  MTResult res;
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double arg = mt.alpha * std::pow(std::abs(p.u(i)) / norm, mt.beta);
    if (arg > 700.0) {
      arg = 700.0;
      res.overflow = true;
    }
    f[i] = std::exp(arg) * std::pow(p.r(i), p.dim() - 1);
  }
  res.value = sphere_area(p.dim()) * trapezoid(p.nodes(), f);
  return res;
}

}  // namespace hesscap
