#pragma once

// Kernel bodies written once against a lane type V. The scalar TU instantiates
// them with LaneScalar, the AVX2 TU with its 4-lane wrapper, so both variants
// execute identical operation sequences. Everything here has internal linkage:
// the AVX2 TU is compiled with -mavx2 and must not donate code to the scalar
// path through the linker.

#include <cstddef>

#include "hesscap/simd/kernels.hpp"

namespace hesscap::simd {
namespace {

struct LaneScalar {
  static constexpr std::size_t width = 1;
  double v;
  static LaneScalar load(const double* p) { return {*p}; }
  static LaneScalar splat(double x) { return {x}; }
  void store(double* p) const { *p = v; }
  friend LaneScalar operator+(LaneScalar a, LaneScalar b) { return {a.v + b.v}; }
  friend LaneScalar operator-(LaneScalar a, LaneScalar b) { return {a.v - b.v}; }
  friend LaneScalar operator*(LaneScalar a, LaneScalar b) { return {a.v * b.v}; }
  friend LaneScalar operator/(LaneScalar a, LaneScalar b) { return {a.v / b.v}; }
  /// r > 0 ? a : b
  static LaneScalar select_positive(LaneScalar r, LaneScalar a, LaneScalar b) { return r.v > 0.0 ? a : b; }
};

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

template <class V>
void radial_fk_lanes(const double* du, const double* d2u, const double* r, int n, int k, double* out) {
  const V c_k = V::splat(binom(n - 1, k));
  const V c_km1 = V::splat(binom(n - 1, k - 1));
  const V d1 = V::load(du);
  const V d2 = V::load(d2u);
  const V rr = V::load(r);
  const V q = V::select_positive(rr, d1 / rr, d2);
  V q_km1 = V::splat(1.0);
  for (int j = 0; j < k - 1; ++j) q_km1 = q_km1 * q;
  const V q_k = q_km1 * q;
  const V t1 = c_k * q_k;
  const V t2 = c_km1 * (d2 * q_km1);
  (t1 + t2).store(out);
}

template <class V>
void flux_integrand_lanes(const double* du, const double* r, int n, int k, double* out) {
  const V d = V::load(du);
  V p = d;
  for (int j = 0; j < k; ++j) p = p * d;
  const V rr = V::load(r);
  V rp = V::splat(1.0);
  for (int j = 0; j < n - k; ++j) rp = rp * rr;
  (p * rp).store(out);
}

/// Nodes [i, i + V::width) of a HessianBatch.
template <class V>
void hessian_lanes(const HessianBatch& b, std::size_t i) {
  const int n = b.dim;
  const int k = b.k;
  const std::size_t cnt = b.count;
  V a[kMaxBatchDim][kMaxBatchDim];
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      const V x = V::load(b.hess.data() + static_cast<std::size_t>(packed_index(n, r, c)) * cnt + i);
      a[r][c] = x;
      a[c][r] = x;
    }
  }

  // Power sums p_m = tr(A^m), m = 1..k.
  V p[kMaxBatchDim + 1];
  V pw[kMaxBatchDim][kMaxBatchDim]{};
  V tmp[kMaxBatchDim][kMaxBatchDim];
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) pw[r][c] = a[r][c];
  {
    V tr = pw[0][0];
    for (int d = 1; d < n; ++d) tr = tr + pw[d][d];
    p[1] = tr;
  }
  for (int m = 2; m <= k; ++m) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        V s = pw[r][0] * a[0][c];
        for (int l = 1; l < n; ++l) s = s + pw[r][l] * a[l][c];
        tmp[r][c] = s;
      }
    }
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) pw[r][c] = tmp[r][c];
    V tr = pw[0][0];
    for (int d = 1; d < n; ++d) tr = tr + pw[d][d];
    p[m] = tr;
  }

  // Newton's identities: j e_j = sum_{i=1}^j (-1)^{i-1} e_{j-i} p_i.
  V e[kMaxBatchDim + 1];
  e[0] = V::splat(1.0);
  for (int j = 1; j <= k; ++j) {
    V acc = e[j - 1] * p[1];
    for (int m = 2; m <= j; ++m) {
      const V term = e[j - m] * p[m];
      acc = (m % 2 == 1) ? acc + term : acc - term;
    }
    e[j] = acc / V::splat(static_cast<double>(j));
    e[j].store(b.esym.data() + static_cast<std::size_t>(j - 1) * cnt + i);
  }

  if (b.grad.empty()) return;

  // F_k^{ij} = sum_{m=0}^{k-1} (-1)^m e_{k-1-m} (A^m)_{ij}, contracted with g twice.
  V g[kMaxBatchDim];
  V v[kMaxBatchDim];
  V w[kMaxBatchDim];
  for (int d = 0; d < n; ++d) {
    g[d] = V::load(b.grad.data() + static_cast<std::size_t>(d) * cnt + i);
    v[d] = g[d];
  }
  V gv = g[0] * v[0];
  for (int d = 1; d < n; ++d) gv = gv + g[d] * v[d];
  V form = e[k - 1] * gv;
  for (int m = 1; m <= k - 1; ++m) {
    for (int r = 0; r < n; ++r) {
      V s = a[r][0] * v[0];
      for (int l = 1; l < n; ++l) s = s + a[r][l] * v[l];
      w[r] = s;
    }
    for (int d = 0; d < n; ++d) v[d] = w[d];
    gv = g[0] * v[0];
    for (int d = 1; d < n; ++d) gv = gv + g[d] * v[d];
    const V term = e[k - 1 - m] * gv;
    form = (m % 2 == 1) ? form - term : form + term;
  }
  form.store(b.form.data() + i);
}

inline double dot_tail(const double* a, const double* b, std::size_t from, std::size_t to, double total) {
  for (std::size_t i = from; i < to; ++i) total = total + a[i] * b[i];
  return total;
}

}  // namespace
}  // namespace hesscap::simd
