#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86,
// an AVX2 variant. The variants perform the same IEEE operations in the same
// order per element (reductions use four interleaved partial sums in both), so
// they agree bit for bit; tests/test_kernels.cpp pins that.

#include <cstddef>
#include <span>
#include <string_view>

namespace hesscap::simd {

/// Largest matrix dimension the batched Hessian kernel accepts.
inline constexpr int kMaxBatchDim = 8;

/// Packed index of (i, j), i <= j, in the upper triangle of an n x n matrix.
constexpr int packed_index(int n, int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * n - (i * (i - 1)) / 2 + (j - i);
}

constexpr int packed_size(int n) { return n * (n + 1) / 2; }

/// Inputs for hessian_batch, structure-of-arrays over `count` nodes.
///   hess[e * count + i]  packed upper-triangle entry e of node i
///   grad[d * count + i]  gradient component d of node i (may be empty)
/// Outputs:
///   esym[(j - 1) * count + i]  S_j of the node's Hessian, j = 1..k
///   form[i]  g^T F_k^{ij} g  (only written when grad is non-empty)
struct HessianBatch {
  int dim = 0;
  int k = 0;
  std::size_t count = 0;
  std::span<const double> hess;
  std::span<const double> grad;
  std::span<double> esym;
  std::span<double> form;
};

struct KernelTable {
  std::string_view name;
  /// sum_i a_i b_i with four interleaved partial sums, combined (s0+s1)+(s2+s3).
  double (*dot)(std::span<const double> a, std::span<const double> b);
  /// out_i = C(n-1,k) q^k + C(n-1,k-1) d2u_i q^{k-1}, q = du_i / r_i (q = d2u_i at r_i = 0).
  void (*radial_fk)(std::span<const double> du, std::span<const double> d2u, std::span<const double> r, int n, int k,
                    std::span<double> out);
  /// out_i = du_i^{k+1} r_i^{n-k}.
  void (*flux_integrand)(std::span<const double> du, std::span<const double> r, int n, int k, std::span<double> out);
  /// S_1..S_k of each node's Hessian via power sums; optionally g^T F_k^{ij} g.
  void (*hessian_batch)(const HessianBatch& batch);
};

const KernelTable& scalar_kernels();
/// nullptr when AVX2 was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

/// Kernel table chosen at first use: AVX2 when available, unless the
/// environment variable HESSCAP_SIMD is set to "scalar".
const KernelTable& active_kernels();

}  // namespace hesscap::simd
