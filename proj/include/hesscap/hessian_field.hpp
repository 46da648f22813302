#pragma once

// Matrix-level k-Hessian operators and finite-difference evaluation on
// Cartesian grids. This is the non-radial route that cross-checks radial.hpp.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hesscap/symm.hpp"

namespace hesscap {

/// Dense symmetric matrix, row-major storage of the full n x n block.
class SymMatrix {
 public:
  /// Throws DomainError if entries are non-finite or |a_ij - a_ji| > 1e-12.
  SymMatrix(int dim, std::vector<double> entries);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> diag);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }
  std::span<const double> entries() const { return a_; }
  double frobenius_norm() const;

 private:
  int dim_;
  std::vector<double> a_;
};

struct EigenDecomposition {
  /// Eigenvalues in column order of `vectors` (not sorted).
  std::vector<double> values;
  /// Column-major n x n orthogonal matrix: column c is the eigenvector of values[c].
  std::vector<double> vectors;
  int sweeps = 0;
  /// ||Q diag(values) Q^T - m||_F.
  double residual = 0.0;
};

/// Cyclic Jacobi rotations. Stops once the off-diagonal Frobenius mass drops
/// below tol * ||m||_F; throws ConvergenceError after max_sweeps sweeps.
EigenDecomposition sym_eigen(const SymMatrix& m, double tol, int max_sweeps = 100);

/// Eigenvalues sorted descending.
Spectrum sym_eigenvalues(const SymMatrix& m, double tol, int max_sweeps = 100);

/// F_k[A] = S_k(lambda(A)).
double fk_value(const SymMatrix& m, int k);

/// F_k^{ij}[A] = dF_k/da_ij, assembled in the eigenbasis as
/// Q diag(dS_k/dlambda) Q^T. Equal eigenvalues give equal gradient entries, so
/// the result does not depend on the basis chosen inside an eigenspace.
SymMatrix fk_matrix_gradient(const SymMatrix& m, int k);

/// Samples on a uniform Cartesian lattice.
class ScalarField {
 public:
  /// Node i_d of axis d sits at origin[d] + i_d * h. Values are row-major
  /// (last axis fastest). Throws DomainError unless h > 0, every count >= 5
  /// and values.size() equals the node count.
  ScalarField(std::vector<int> counts, double h, std::vector<double> origin, std::vector<double> values);

  static ScalarField sample(std::vector<int> counts, double h, std::vector<double> origin,
                            const std::function<double(std::span<const double>)>& f);

  /// Radial function on B_R embedded in the cube [-R, R]^dim with
  /// `cells_per_radius` cells per unit R; nodes with |x| >= R are set to 0.
  static ScalarField sample_radial_ball(int dim, double R, int cells_per_radius,
                                        const std::function<double(double)>& profile);

  int dim() const { return static_cast<int>(counts_.size()); }
  std::span<const int> counts() const { return counts_; }
  double spacing() const { return h_; }
  std::span<const double> origin() const { return origin_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  std::size_t linear_index(std::span<const int> idx) const;
  double at(std::span<const int> idx) const { return values_[linear_index(idx)]; }

  /// Header line `dim,n1,...,nd,h`, then one value per line, row-major.
  std::string to_csv() const;
  /// Inverse of to_csv. The origin is not part of the format; imported
  /// fields are centred on 0.
  static ScalarField from_csv(const std::string& text);

 private:
  std::vector<int> counts_;
  double h_;
  std::vector<double> origin_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

/// Second-order central-difference Hessian at idx. Throws DomainError when idx
/// is within one cell of the boundary.
SymMatrix fd_hessian(const ScalarField& f, std::span<const int> idx);

struct FieldEnergyOptions {
  /// Slack on S_j >= 0 at finite-difference Hessians.
  double tol_adm = 0.0;
  /// Maximum fraction of evaluated nodes allowed to fail the admissibility scan.
  double max_failure_fraction = 0.01;
};

struct FieldEnergyResult {
  double value = 0.0;
  std::size_t evaluated_nodes = 0;
  /// Nodes with u < 0 whose stencil reaches u >= 0: the difference quotient
  /// there straddles the Dirichlet kink and is left out of the sum.
  std::size_t contact_nodes = 0;
  std::size_t failed_nodes = 0;
};

/// Midpoint sum of (-u) F_k[D^2 u] h^n over interior nodes. Requires u <= 0
/// (DomainError otherwise); throws AdmissibilityError listing the worst nodes
/// when more than max_failure_fraction of evaluated nodes fail the scan.
FieldEnergyResult field_energy_detailed(const ScalarField& f, int k, const FieldEnergyOptions& opts = {});
double field_energy(const ScalarField& f, int k, const FieldEnergyOptions& opts = {});

/// (int (-u) F_k[u], k^{-1} int u_i u_j F_k^{ij}[D^2 u]), both by midpoint
/// sums over interior nodes. The field must vanish on the lattice boundary.
std::pair<double, double> divergence_identity_check(const ScalarField& f, int k);

}  // namespace hesscap
