#include "hesscap/hessian_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>

#include "hesscap/error.hpp"
#include "hesscap/simd/kernels.hpp"

namespace hesscap {

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(int dim, std::vector<double> entries) : dim_(dim), a_(std::move(entries)) {
  if (dim < 1) throw DomainError("SymMatrix: dimension must be >= 1");
  if (a_.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw DomainError("SymMatrix: expected " + std::to_string(dim * dim) + " entries");
  }
  for (double v : a_) {
    if (!std::isfinite(v)) throw DomainError("SymMatrix: non-finite entry");
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > 1e-12) {
        throw DomainError("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) + ") not symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::identity(int dim) {
  std::vector<double> a(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return SymMatrix(dim, std::move(a));
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  const int dim = static_cast<int>(diag.size());
  std::vector<double> a(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i * dim + i)] = diag[static_cast<std::size_t>(i)];
  return SymMatrix(dim, std::move(a));
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {

double off_diagonal_mass(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += 2.0 * a[static_cast<std::size_t>(i * n + j)] * a[static_cast<std::size_t>(i * n + j)];
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m, double tol, int max_sweeps) {
  if (!(tol > 0.0)) throw DomainError("sym_eigen: tol must be positive");
  const int n = m.dim();
  const auto at = [n](int i, int j) { return static_cast<std::size_t>(i * n + j); };
  std::vector<double> a(m.entries().begin(), m.entries().end());
  std::vector<double> v(static_cast<std::size_t>(n * n), 0.0);  // column-major
  for (int i = 0; i < n; ++i) v[at(i, i)] = 1.0;

  const double target = tol * m.frobenius_norm();
  EigenDecomposition out;
  while (off_diagonal_mass(a, n) >= target && off_diagonal_mass(a, n) > 0.0) {
    if (out.sweeps >= max_sweeps) {
      throw ConvergenceError("sym_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
    }
    ++out.sweeps;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[at(p, q)];
        if (apq == 0.0) continue;
        const double theta = (a[at(q, q)] - a[at(p, p)]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[at(r, p)];
          const double arq = a[at(r, q)];
          a[at(r, p)] = a[at(p, r)] = c * arp - s * arq;
          a[at(r, q)] = a[at(q, r)] = s * arp + c * arq;
        }
        a[at(p, p)] -= t * apq;
        a[at(q, q)] += t * apq;
        a[at(p, q)] = a[at(q, p)] = 0.0;
        for (int r = 0; r < n; ++r) {
          const double vrp = v[static_cast<std::size_t>(p * n + r)];
          const double vrq = v[static_cast<std::size_t>(q * n + r)];
          v[static_cast<std::size_t>(p * n + r)] = c * vrp - s * vrq;
          v[static_cast<std::size_t>(q * n + r)] = s * vrp + c * vrq;
        }
      }
    }
  }

  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = a[at(i, i)];
  out.vectors = std::move(v);

  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) {
        s += out.vectors[static_cast<std::size_t>(c * n + i)] * out.values[static_cast<std::size_t>(c)] *
             out.vectors[static_cast<std::size_t>(c * n + j)];
      }
      const double d = s - m(i, j);
      res += d * d;
    }
  }
  out.residual = std::sqrt(res);
  return out;
}

Spectrum sym_eigenvalues(const SymMatrix& m, double tol, int max_sweeps) {
  return Spectrum(sym_eigen(m, tol, max_sweeps).values);
}

namespace {
constexpr double kOperatorTol = 1e-14;
}

double fk_value(const SymMatrix& m, int k) {
  if (k < 1 || k > m.dim()) throw DomainError("fk_value: k out of range");
  return esym(sym_eigenvalues(m, kOperatorTol), k);
}

SymMatrix fk_matrix_gradient(const SymMatrix& m, int k) {
  const int n = m.dim();
  if (k < 1 || k > n) throw DomainError("fk_matrix_gradient: k out of range");
  const EigenDecomposition eig = sym_eigen(m, kOperatorTol);
  const std::vector<double> g = detail::esym_gradient_raw(eig.values, k);
  std::vector<double> out(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) {
        s += eig.vectors[static_cast<std::size_t>(c * n + i)] * g[static_cast<std::size_t>(c)] *
             eig.vectors[static_cast<std::size_t>(c * n + j)];
      }
      out[static_cast<std::size_t>(i * n + j)] = s;
      out[static_cast<std::size_t>(j * n + i)] = s;
    }
  }
  return SymMatrix(n, std::move(out));
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(std::vector<int> counts, double h, std::vector<double> origin, std::vector<double> values)
    : counts_(std::move(counts)), h_(h), origin_(std::move(origin)), values_(std::move(values)) {
  if (counts_.empty()) throw DomainError("ScalarField: dimension must be >= 1");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw DomainError("ScalarField: spacing must be positive");
  if (origin_.size() != counts_.size()) throw DomainError("ScalarField: origin has wrong dimension");
  std::size_t total = 1;
  for (int c : counts_) {
    if (c < 5) throw DomainError("ScalarField: need at least 5 nodes per axis");
    total *= static_cast<std::size_t>(c);
  }
  if (values_.size() != total) {
    throw DomainError("ScalarField: expected " + std::to_string(total) + " values, got " +
                      std::to_string(values_.size()));
  }
  strides_.assign(counts_.size(), 1);
  for (int d = static_cast<int>(counts_.size()) - 2; d >= 0; --d) {
    strides_[static_cast<std::size_t>(d)] =
        strides_[static_cast<std::size_t>(d + 1)] * static_cast<std::size_t>(counts_[static_cast<std::size_t>(d + 1)]);
  }
}

ScalarField ScalarField::sample(std::vector<int> counts, double h, std::vector<double> origin,
                                const std::function<double(std::span<const double>)>& f) {
  const std::size_t dim = counts.size();
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(std::max(c, 0));
  std::vector<double> values(total);
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  for (std::size_t lin = 0; lin < total; ++lin) {
    for (std::size_t d = 0; d < dim; ++d) x[d] = origin[d] + idx[d] * h;
    values[lin] = f(x);
    for (int d = static_cast<int>(dim) - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < counts[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return ScalarField(std::move(counts), h, std::move(origin), std::move(values));
}

ScalarField ScalarField::sample_radial_ball(int dim, double R, int cells_per_radius,
                                            const std::function<double(double)>& profile) {
  if (dim < 1 || !(R > 0.0) || cells_per_radius < 2) throw DomainError("sample_radial_ball: bad parameters");
  const double h = R / cells_per_radius;
  const int nodes = 2 * cells_per_radius + 1;
  std::vector<int> counts(static_cast<std::size_t>(dim), nodes);
  std::vector<double> origin(static_cast<std::size_t>(dim), -R);

  // Squared radius accumulates axis by axis; the last axis varies fastest.
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(nodes);
  std::vector<double> values(total, 0.0);
  std::vector<double> coord(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) coord[static_cast<std::size_t>(i)] = (i - cells_per_radius) * h;
  std::vector<int> idx(static_cast<std::size_t>(dim - 1), 0);
  const std::size_t rows = total / static_cast<std::size_t>(nodes);
  const double R2 = R * R;
  for (std::size_t row = 0; row < rows; ++row) {
    double prefix = 0.0;
    for (double c : idx) prefix += coord[static_cast<std::size_t>(c)] * coord[static_cast<std::size_t>(c)];
    if (prefix < R2) {
      double* out = values.data() + row * static_cast<std::size_t>(nodes);
      for (int i = 0; i < nodes; ++i) {
        const double s2 = prefix + coord[static_cast<std::size_t>(i)] * coord[static_cast<std::size_t>(i)];
        if (s2 < R2) out[i] = profile(std::sqrt(s2));
      }
    }
    for (int d = dim - 2; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < nodes) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return ScalarField(std::move(counts), h, std::move(origin), std::move(values));
}

std::size_t ScalarField::linear_index(std::span<const int> idx) const {
  if (idx.size() != counts_.size()) throw DomainError("ScalarField: index has wrong dimension");
  std::size_t lin = 0;
  for (std::size_t d = 0; d < idx.size(); ++d) {
    if (idx[d] < 0 || idx[d] >= counts_[d]) throw DomainError("ScalarField: index out of range");
    lin += static_cast<std::size_t>(idx[d]) * strides_[d];
  }
  return lin;
}

std::string ScalarField::to_csv() const {
  std::string out = std::to_string(dim());
  char buf[64];
  for (int c : counts_) out += "," + std::to_string(c);
  std::snprintf(buf, sizeof buf, ",%.17g\n", h_);
  out += buf;
  out.reserve(out.size() + values_.size() * 24);
  for (double v : values_) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

ScalarField ScalarField::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw DomainError("ScalarField CSV: missing header");
  std::vector<double> fields;
  {
    std::istringstream hs(header);
    std::string tok;
    while (std::getline(hs, tok, ',')) {
      try {
        fields.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw DomainError("ScalarField CSV: bad header token '" + tok + "'");
      }
    }
  }
  if (fields.size() < 3) throw DomainError("ScalarField CSV: header must be dim,n1,...,nd,h");
  const int dim = static_cast<int>(fields[0]);
  if (dim < 1 || fields.size() != static_cast<std::size_t>(dim) + 2) {
    throw DomainError("ScalarField CSV: header length does not match dim");
  }
  std::vector<int> counts(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) counts[static_cast<std::size_t>(d)] = static_cast<int>(fields[static_cast<std::size_t>(d + 1)]);
  const double h = fields.back();
  std::vector<double> origin(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) origin[static_cast<std::size_t>(d)] = -0.5 * (counts[static_cast<std::size_t>(d)] - 1) * h;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw DomainError("ScalarField CSV: bad value '" + line + "'");
    }
  }
  return ScalarField(std::move(counts), h, std::move(origin), std::move(values));
}

// ---------------------------------------------------------------------------
// Finite differences

namespace {

/// Linear offsets of the central-difference stencil around a node.
struct Stencil {
  int dim;
  std::vector<std::ptrdiff_t> axis;  // stride of axis a
  explicit Stencil(const ScalarField& f) : dim(f.dim()) {
    for (int a = 0; a < dim; ++a) axis.push_back(static_cast<std::ptrdiff_t>(f.stride(a)));
  }

  double second(const double* u, int a, int b, double inv_h2) const {
    const std::ptrdiff_t sa = axis[static_cast<std::size_t>(a)];
    if (a == b) return (u[sa] - 2.0 * u[0] + u[-sa]) * inv_h2;
    const std::ptrdiff_t sb = axis[static_cast<std::size_t>(b)];
    return (u[sa + sb] - u[sa - sb] - u[-sa + sb] + u[-sa - sb]) * (0.25 * inv_h2);
  }

  double first(const double* u, int a, double inv_2h) const {
    const std::ptrdiff_t sa = axis[static_cast<std::size_t>(a)];
    return (u[sa] - u[-sa]) * inv_2h;
  }

  /// Smallest and largest value touched by the Hessian stencil.
  std::pair<double, double> range(const double* u) const {
    double lo = u[0];
    double hi = u[0];
    for (int a = 0; a < dim; ++a) {
      const std::ptrdiff_t sa = axis[static_cast<std::size_t>(a)];
      for (const std::ptrdiff_t off : {sa, -sa}) {
        lo = std::min(lo, u[off]);
        hi = std::max(hi, u[off]);
      }
      for (int b = a + 1; b < dim; ++b) {
        const std::ptrdiff_t sb = axis[static_cast<std::size_t>(b)];
        for (const std::ptrdiff_t off : {sa + sb, sa - sb, -sa + sb, -sa - sb}) {
          lo = std::min(lo, u[off]);
          hi = std::max(hi, u[off]);
        }
      }
    }
    return {lo, hi};
  }
};

/// Calls row(first_linear_index, length) for every run of interior nodes along
/// the last axis, in increasing linear order.
template <class RowFn>
void for_each_interior_row(const ScalarField& f, RowFn&& row) {
  const int dim = f.dim();
  const auto counts = f.counts();
  const int last = counts[static_cast<std::size_t>(dim - 1)];
  std::vector<int> idx(static_cast<std::size_t>(dim - 1), 1);
  while (true) {
    std::size_t base = 1;  // last-axis index 1
    for (int d = 0; d < dim - 1; ++d) base += static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]) * f.stride(d);
    row(base, static_cast<std::size_t>(last - 2));
    int d = dim - 2;
    for (; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < counts[static_cast<std::size_t>(d)] - 1) break;
      idx[static_cast<std::size_t>(d)] = 1;
    }
    if (d < 0) break;
  }
}

void check_batch_dim(int dim) {
  if (dim > simd::kMaxBatchDim) {
    throw DomainError("field operators support dim <= " + std::to_string(simd::kMaxBatchDim));
  }
}

}  // namespace

SymMatrix fd_hessian(const ScalarField& f, std::span<const int> idx) {
  const int dim = f.dim();
  if (static_cast<int>(idx.size()) != dim) throw DomainError("fd_hessian: index has wrong dimension");
  for (int d = 0; d < dim; ++d) {
    if (idx[static_cast<std::size_t>(d)] < 1 || idx[static_cast<std::size_t>(d)] > f.counts()[static_cast<std::size_t>(d)] - 2) {
      throw DomainError("fd_hessian: index within one cell of the boundary");
    }
  }
  const Stencil st(f);
  const double* u = f.values().data() + f.linear_index(idx);
  const double inv_h2 = 1.0 / (f.spacing() * f.spacing());
  std::vector<double> a(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double v = st.second(u, i, j, inv_h2);
      a[static_cast<std::size_t>(i * dim + j)] = v;
      a[static_cast<std::size_t>(j * dim + i)] = v;
    }
  }
  return SymMatrix(dim, std::move(a));
}

FieldEnergyResult field_energy_detailed(const ScalarField& f, int k, const FieldEnergyOptions& opts) {
  const int dim = f.dim();
  if (k < 1 || k > dim) throw DomainError("field_energy: k out of range");
  check_batch_dim(dim);
  for (double v : f.values()) {
    if (v > 0.0) throw DomainError("field_energy: field must satisfy u <= 0");
  }

  const auto& kernels = simd::active_kernels();
  const Stencil st(f);
  const double inv_h2 = 1.0 / (f.spacing() * f.spacing());
  const int packed = simd::packed_size(dim);
  const std::size_t row_len = static_cast<std::size_t>(f.counts()[static_cast<std::size_t>(dim - 1)]);
  std::vector<double> hess(static_cast<std::size_t>(packed) * row_len);
  std::vector<double> es(static_cast<std::size_t>(k) * row_len);
  std::vector<double> weight(row_len);
  std::vector<double> frob(row_len);
  std::vector<std::size_t> where(row_len);
  const double eps = std::numeric_limits<double>::epsilon();

  struct Failure {
    std::size_t node;
    double worst;
  };
  std::vector<Failure> failures;
  FieldEnergyResult res;
  double total = 0.0;

  for_each_interior_row(f, [&](std::size_t base, std::size_t len) {
    const double* row = f.values().data() + base;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const double* u = row + i;
      if (u[0] == 0.0) continue;
      if (st.range(u).second >= 0.0) {
        ++res.contact_nodes;
        continue;
      }
      where[cnt] = base + i;
      weight[cnt] = -u[0];
      ++cnt;
    }
    if (cnt == 0) return;
    for (std::size_t c = 0; c < cnt; ++c) {
      const double* u = f.values().data() + where[c];
      double fr = 0.0;
      for (int a = 0; a < dim; ++a) {
        for (int b = a; b < dim; ++b) {
          const double v = st.second(u, a, b, inv_h2);
          hess[static_cast<std::size_t>(simd::packed_index(dim, a, b)) * cnt + c] = v;
          fr += (a == b ? 1.0 : 2.0) * v * v;
        }
      }
      frob[c] = std::sqrt(fr);
    }
    simd::HessianBatch batch;
    batch.dim = dim;
    batch.k = k;
    batch.count = cnt;
    batch.hess = std::span<const double>(hess.data(), static_cast<std::size_t>(packed) * cnt);
    batch.esym = std::span<double>(es.data(), static_cast<std::size_t>(k) * cnt);
    kernels.hessian_batch(batch);

    for (std::size_t c = 0; c < cnt; ++c) {
      double worst = 0.0;
      double scale = 1.0;
      for (int j = 1; j <= k; ++j) {
        scale *= frob[c];
        const double guard = 8.0 * dim * eps * binomial(dim, j) * scale;
        const double s = es[static_cast<std::size_t>(j - 1) * cnt + c];
        if (s < -(opts.tol_adm + guard)) worst = std::min(worst, s);
      }
      if (worst < 0.0) failures.push_back({where[c], worst});
    }
    res.evaluated_nodes += cnt;
    const std::span<const double> sk(es.data() + static_cast<std::size_t>(k - 1) * cnt, cnt);
    total += kernels.dot(std::span<const double>(weight.data(), cnt), sk);
  });

  res.failed_nodes = failures.size();
  if (res.evaluated_nodes > 0 &&
      static_cast<double>(failures.size()) > opts.max_failure_fraction * static_cast<double>(res.evaluated_nodes)) {
    std::sort(failures.begin(), failures.end(), [](const Failure& a, const Failure& b) {
      return a.worst < b.worst || (a.worst == b.worst && a.node < b.node);
    });
    std::ostringstream msg;
    msg << "field_energy: " << failures.size() << " of " << res.evaluated_nodes
        << " nodes fail k-admissibility; worst linear indices:";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, failures.size()); ++i) {
      msg << " " << failures[i].node << " (S_j=" << failures[i].worst << ")";
    }
    throw AdmissibilityError(msg.str());
  }
  res.value = total * std::pow(f.spacing(), dim);
  return res;
}

double field_energy(const ScalarField& f, int k, const FieldEnergyOptions& opts) {
  return field_energy_detailed(f, k, opts).value;
}

std::pair<double, double> divergence_identity_check(const ScalarField& f, int k) {
  const int dim = f.dim();
  if (k < 1 || k > dim) throw DomainError("divergence_identity_check: k out of range");
  check_batch_dim(dim);
  // Boundary nodes: any axis index at 0 or n-1.
  {
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    for (std::size_t lin = 0; lin < f.size(); ++lin) {
      bool boundary = false;
      for (int d = 0; d < dim; ++d) {
        const int i = idx[static_cast<std::size_t>(d)];
        if (i == 0 || i == f.counts()[static_cast<std::size_t>(d)] - 1) boundary = true;
      }
      if (boundary && f.values()[lin] != 0.0) {
        throw DomainError("divergence_identity_check: field must vanish on the lattice boundary");
      }
      for (int d = dim - 1; d >= 0; --d) {
        if (++idx[static_cast<std::size_t>(d)] < f.counts()[static_cast<std::size_t>(d)]) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
    }
  }

  const auto& kernels = simd::active_kernels();
  const Stencil st(f);
  const double inv_h2 = 1.0 / (f.spacing() * f.spacing());
  const double inv_2h = 0.5 / f.spacing();
  const int packed = simd::packed_size(dim);
  const std::size_t row_len = static_cast<std::size_t>(f.counts()[static_cast<std::size_t>(dim - 1)]);
  std::vector<double> hess(static_cast<std::size_t>(packed) * row_len);
  std::vector<double> grad(static_cast<std::size_t>(dim) * row_len);
  std::vector<double> es(static_cast<std::size_t>(k) * row_len);
  std::vector<double> form(row_len);
  std::vector<double> weight(row_len);
  std::vector<double> ones(row_len, 1.0);

  double lhs = 0.0;
  double rhs = 0.0;
  for_each_interior_row(f, [&](std::size_t base, std::size_t len) {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const double* u = f.values().data() + base + i;
      const auto [lo, hi] = st.range(u);
      if (lo == 0.0 && hi == 0.0) continue;
      for (int a = 0; a < dim; ++a) {
        grad[static_cast<std::size_t>(a) * row_len + cnt] = st.first(u, a, inv_2h);
        for (int b = a; b < dim; ++b) {
          hess[static_cast<std::size_t>(simd::packed_index(dim, a, b)) * row_len + cnt] = st.second(u, a, b, inv_h2);
        }
      }
      weight[cnt] = -u[0];
      ++cnt;
    }
    if (cnt == 0) return;
    // Compact the SoA buffers from stride row_len to stride cnt.
    if (cnt != row_len) {
      for (int e = 1; e < packed; ++e)
        std::copy_n(hess.data() + static_cast<std::size_t>(e) * row_len, cnt, hess.data() + static_cast<std::size_t>(e) * cnt);
      for (int a = 1; a < dim; ++a)
        std::copy_n(grad.data() + static_cast<std::size_t>(a) * row_len, cnt, grad.data() + static_cast<std::size_t>(a) * cnt);
    }
    simd::HessianBatch batch;
    batch.dim = dim;
    batch.k = k;
    batch.count = cnt;
    batch.hess = std::span<const double>(hess.data(), static_cast<std::size_t>(packed) * cnt);
    batch.grad = std::span<const double>(grad.data(), static_cast<std::size_t>(dim) * cnt);
    batch.esym = std::span<double>(es.data(), static_cast<std::size_t>(k) * cnt);
    batch.form = std::span<double>(form.data(), cnt);
    kernels.hessian_batch(batch);
    lhs += kernels.dot(std::span<const double>(weight.data(), cnt),
                       std::span<const double>(es.data() + static_cast<std::size_t>(k - 1) * cnt, cnt));
    rhs += kernels.dot(std::span<const double>(ones.data(), cnt), std::span<const double>(form.data(), cnt));
  });
  const double vol = std::pow(f.spacing(), dim);
  return {lhs * vol, rhs * vol / k};
}

}  // namespace hesscap
