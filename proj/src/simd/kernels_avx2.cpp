// Compiled with -mavx2 (no FMA: contraction would change rounding vs scalar).

#include <immintrin.h>

#include "kernel_body.hpp"

namespace hesscap::simd {

namespace detail {
void radial_fk_scalar_range(std::span<const double> du, std::span<const double> d2u, std::span<const double> r,
                            int n, int k, std::span<double> out);
void flux_integrand_scalar_range(std::span<const double> du, std::span<const double> r, int n, int k,
                                 std::span<double> out);
void hessian_batch_scalar_range(const HessianBatch& b, std::size_t from);
}  // namespace detail

namespace {

struct LaneAvx2 {
  static constexpr std::size_t width = 4;
  __m256d v;
  static LaneAvx2 load(const double* p) { return {_mm256_loadu_pd(p)}; }
  static LaneAvx2 splat(double x) { return {_mm256_set1_pd(x)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  friend LaneAvx2 operator+(LaneAvx2 a, LaneAvx2 b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend LaneAvx2 operator-(LaneAvx2 a, LaneAvx2 b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend LaneAvx2 operator*(LaneAvx2 a, LaneAvx2 b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend LaneAvx2 operator/(LaneAvx2 a, LaneAvx2 b) { return {_mm256_div_pd(a.v, b.v)}; }
  static LaneAvx2 select_positive(LaneAvx2 r, LaneAvx2 a, LaneAvx2 b) {
    const __m256d mask = _mm256_cmp_pd(r.v, _mm256_setzero_pd(), _CMP_GT_OQ);
    return {_mm256_blendv_pd(b.v, a.v, mask)};
  }
};

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  const double total = (s[0] + s[1]) + (s[2] + s[3]);
  return dot_tail(a.data(), b.data(), i, n, total);
}

void radial_fk_avx2(std::span<const double> du, std::span<const double> d2u, std::span<const double> r, int n, int k,
                    std::span<double> out) {
  const std::size_t m = du.size();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) radial_fk_lanes<LaneAvx2>(&du[i], &d2u[i], &r[i], n, k, &out[i]);
  detail::radial_fk_scalar_range(du.subspan(i), d2u.subspan(i), r.subspan(i), n, k, out.subspan(i));
}

void flux_integrand_avx2(std::span<const double> du, std::span<const double> r, int n, int k, std::span<double> out) {
  const std::size_t m = du.size();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) flux_integrand_lanes<LaneAvx2>(&du[i], &r[i], n, k, &out[i]);
  detail::flux_integrand_scalar_range(du.subspan(i), r.subspan(i), n, k, out.subspan(i));
}

void hessian_batch_avx2(const HessianBatch& b) {
  std::size_t i = 0;
  for (; i + 4 <= b.count; i += 4) hessian_lanes<LaneAvx2>(b, i);
  detail::hessian_batch_scalar_range(b, i);
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", &dot_avx2, &radial_fk_avx2, &flux_integrand_avx2, &hessian_batch_avx2};
  __builtin_cpu_init();
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  return &table;
}

}  // namespace hesscap::simd
