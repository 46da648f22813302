#pragma once

// Radial reduction of F_k on balls, Hessian energies, condenser extremals and
// the three capacity routes (closed form, flux, variational).
//
// Conventions: omega_n = |S^{n-1}| (omega_3 = 4 pi, omega_4 = 2 pi^2). For a
// radial u with u' = du/ds the Hessian spectrum is (u'', u'/s, ..., u'/s), so
//
//   F_k[u] = C(n-1,k) (u'/s)^k + C(n-1,k-1) u'' (u'/s)^{k-1}
//          = (C(n-1,k-1)/k) s^{1-n} (s^{n-k} (u')^k)'
//
// and integrating by parts against -u with u(R) = 0 gives the flux form
//
//   int_{B_R} (-u) F_k[u] = (omega_n C(n-1,k-1)/k) int_0^R (u')^{k+1} s^{n-k} ds.

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hesscap/symm.hpp"

namespace hesscap {

double sphere_area(int n);
double ball_volume(int n, double radius);

/// Sampled radial function u(s) <= 0 on [0, R] with u(R) = 0.
///
/// Derivatives are stored as one-sided limits so that profiles with corners
/// (condenser extremals, truncations, maxima) integrate exactly cell by cell:
/// the left limit at node i belongs to cell [i-1, i], the right limit to
/// [i, i+1]. For smooth profiles both limits coincide.
class RadialProfile {
 public:
  struct Derivatives {
    std::vector<double> du_left, du_right, d2u_left, d2u_right;
  };

  RadialProfile(int n, int k, std::vector<double> r, std::vector<double> u, Derivatives d);

  /// Derivatives by second-order centred differences on the (non-uniform)
  /// nodes, one-sided at s = R, and by even reflection at s = 0.
  static RadialProfile from_samples(int n, int k, std::vector<double> r, std::vector<double> u);

  /// Smooth profile from analytic u, u', u''.
  static RadialProfile from_functions(int n, int k, std::vector<double> r, const std::function<double(double)>& u,
                                      const std::function<double(double)>& du,
                                      const std::function<double(double)>& d2u);

  int dim() const { return n_; }
  int order() const { return k_; }
  std::size_t size() const { return r_.size(); }
  double outer_radius() const { return r_.back(); }
  std::span<const double> nodes() const { return r_; }
  std::span<const double> values() const { return u_; }
  const Derivatives& derivatives() const { return d_; }
  double r(std::size_t i) const { return r_[i]; }
  double u(std::size_t i) const { return u_[i]; }
  bool is_kink(std::size_t i) const { return d_.du_left[i] != d_.du_right[i]; }
  double max_abs() const;

  /// Cubic Hermite interpolation from the one-sided derivatives; 0 for s >= R.
  double value_at(double s) const;

  /// c * u with derivatives scaled alongside (c > 0).
  RadialProfile scaled(double c) const;

  /// Header `n,k,R,m` (values; m = number of cells), then m + 1 rows `r,u`.
  std::string to_csv() const;
  static RadialProfile from_csv(const std::string& text);

 private:
  int n_;
  int k_;
  std::vector<double> r_;
  std::vector<double> u_;
  Derivatives d_;
};

/// Concentric ball pair (B_r, B_R) in R^n with capacity order k.
struct Condenser {
  int n = 3;
  int k = 1;
  double r = 1.0;
  double R = 2.0;

  /// Throws DomainError unless n >= 2, 1 <= k <= n and 0 < r < R.
  void validate() const;
  /// validate() plus UnsupportedError("unsupported: k exceeds n/2") when 2k > n.
  void validate_capacity() const;
  bool log_branch() const { return 2 * k == n; }
};

/// Moser-Trudinger parameters for k = n/2.
struct MTParams {
  int n = 4;
  double alpha = 1.0;
  double beta = 1.0;
  double alpha0() const;
  double beta0() const;
};

/// n (omega_n / k * C(n-1, k-1))^{2/n} with k = n/2. DomainError for odd n.
double mt_alpha0(int n);
/// 1 + 2/n.
double mt_beta0(int n);

struct RadialOptions {
  double tol_adm = 0.0;
  /// Relative tolerance between the direct and flux energy forms; a gap above
  /// 10x this raises IntegrationError.
  double quad_tol = 1e-3;
};

/// (u'', u'/s, ..., u'/s). DomainError for s <= 0.
Spectrum radial_spectrum(double du, double d2u, double s, int n);

/// F_k per node from the right-limit derivatives (left limit at the last node).
std::vector<double> radial_fk(const RadialProfile& p, int k);

struct EnergyResult {
  double flux = 0.0;
  double direct = 0.0;
  double relative_gap = 0.0;
};

/// int (-u) F_k[u] over B_R, both forms. Throws AdmissibilityError when a node
/// fails the scan and IntegrationError when the forms disagree.
EnergyResult hessian_energy_detailed(const RadialProfile& p, int k, const RadialOptions& opts = {});
/// The flux form of hessian_energy_detailed.
double hessian_energy(const RadialProfile& p, int k, const RadialOptions& opts = {});

/// omega_n C(n-1,k-1) (n/k - 2)^k / k for k < n/2; omega_n C(n-1,k-1) / k for k = n/2.
double capacity_constant(int n, int k);

/// Extremal of the condenser on nodes clustered near 0 and geometrically
/// graded on [r, R]; m is the total number of cells.
RadialProfile condenser_extremal(const Condenser& c, int m = 4096);

double capacity_closed_form(const Condenser& c);
double capacity_flux(const Condenser& c);

struct VariationalResult {
  double capacity = 0.0;
  /// Total F_k mass of the minimizer over the ball (telescoped discrete flux).
  double total_measure = 0.0;
  /// Discrete first integral s^{n-k} (u')^k shared by every cell.
  double first_integral = 0.0;
  int iterations = 0;
  RadialProfile profile;
};

/// Minimizes the flux-form energy over piecewise-linear monotone profiles with
/// u = -1 on [0, r] and u(R) = 0 (m cells on [r, R], m >= 64). Cell weights
/// integrate s^{n-k} exactly, so the result bounds the capacity from above.
VariationalResult variational_minimizer(const Condenser& c, int m);
double capacity_variational(const Condenser& c, int m);

/// ||u||_{L^q(B_R)} / ||u||_{Phi_0^k}; q = infinity gives the sup norm.
double sobolev_quotient(const RadialProfile& p, double q, int k, const RadialOptions& opts = {});

struct MTResult {
  double value = 0.0;
  bool overflow = false;
};

/// int_{B_R} exp(alpha (|u| / ||u||)^beta), exponent capped at 700.
MTResult moser_trudinger_functional(const RadialProfile& p, const MTParams& mt, int k,
                                    const RadialOptions& opts = {});

/// Node helpers.
std::vector<double> geometric_nodes(double a, double b, int cells);
/// Nodes on [0, R] graded like sinh so the smallest cell is about s_min.
std::vector<double> clustered_nodes(double R, int cells, double s_min);

/// Composite trapezoid of `values` on `nodes`.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

}  // namespace hesscap
