#include "kernel_body.hpp"

namespace hesscap::simd {
namespace {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) s[l] = s[l] + a[i + l] * b[i + l];
  }
  const double total = (s[0] + s[1]) + (s[2] + s[3]);
  return dot_tail(a.data(), b.data(), i, n, total);
}

void radial_fk_scalar(std::span<const double> du, std::span<const double> d2u, std::span<const double> r, int n, int k,
                      std::span<double> out) {
  for (std::size_t i = 0; i < du.size(); ++i) {
    radial_fk_lanes<LaneScalar>(&du[i], &d2u[i], &r[i], n, k, &out[i]);
  }
}

void flux_integrand_scalar(std::span<const double> du, std::span<const double> r, int n, int k,
                           std::span<double> out) {
  for (std::size_t i = 0; i < du.size(); ++i) flux_integrand_lanes<LaneScalar>(&du[i], &r[i], n, k, &out[i]);
}

void hessian_batch_scalar(const HessianBatch& b) {
  for (std::size_t i = 0; i < b.count; ++i) hessian_lanes<LaneScalar>(b, i);
}

}  // namespace

namespace detail {
// Tails of the AVX2 kernels reuse these entry points.
void radial_fk_scalar_range(std::span<const double> du, std::span<const double> d2u, std::span<const double> r,
                            int n, int k, std::span<double> out) {
  radial_fk_scalar(du, d2u, r, n, k, out);
}
void flux_integrand_scalar_range(std::span<const double> du, std::span<const double> r, int n, int k,
                                 std::span<double> out) {
  flux_integrand_scalar(du, r, n, k, out);
}
void hessian_batch_scalar_range(const HessianBatch& b, std::size_t from) {
  for (std::size_t i = from; i < b.count; ++i) hessian_lanes<LaneScalar>(b, i);
}
}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &dot_scalar, &radial_fk_scalar, &flux_integrand_scalar,
                                 &hessian_batch_scalar};
  return table;
}

}  // namespace hesscap::simd
