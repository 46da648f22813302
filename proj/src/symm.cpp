#include "hesscap/symm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hesscap/error.hpp"

namespace hesscap {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("spectrum must have at least one entry");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("spectrum entries must be finite");
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

namespace detail {

std::vector<double> esym_prefix(std::span<const double> values, int kmax) {
  std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
  e[0] = 1.0;
  // Coefficients of prod_i (1 + lambda_i t), truncated at degree kmax.
  int seen = 0;
  for (double lambda : values) {
    ++seen;
    for (int j = std::min(seen, kmax); j >= 1; --j) e[j] += lambda * e[j - 1];
  }
  return e;
}

std::vector<double> esym_gradient_raw(std::span<const double> values, int k) {
  const std::size_t n = values.size();
  std::vector<double> grad(n);
  std::vector<double> rest;
  rest.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rest.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rest.push_back(values[j]);
    }
    grad[i] = esym_prefix(rest, k - 1)[static_cast<std::size_t>(k - 1)];
  }
  return grad;
}

}  // namespace detail

double esym(const Spectrum& s, int k) {
  if (k < 0 || k > s.dim()) {
    throw DomainError("esym: k=" + std::to_string(k) + " outside [0, " + std::to_string(s.dim()) + "]");
  }
  return detail::esym_prefix(s.values(), k)[static_cast<std::size_t>(k)];
}

std::vector<double> esym_all(const Spectrum& s) { return detail::esym_prefix(s.values(), s.dim()); }

std::vector<double> esym_gradient(const Spectrum& s, int k) {
  if (k < 1 || k > s.dim()) {
    throw DomainError("esym_gradient: k=" + std::to_string(k) + " outside [1, " + std::to_string(s.dim()) + "]");
  }
  return detail::esym_gradient_raw(s.values(), k);
}

bool is_k_admissible(const Spectrum& s, int k, double tol) {
  k = std::clamp(k, 1, s.dim());
  const auto e = detail::esym_prefix(s.values(), k);
  std::vector<double> abs_values(s.values().begin(), s.values().end());
  for (double& v : abs_values) v = std::abs(v);
  const auto scale = detail::esym_prefix(abs_values, k);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int j = 1; j <= k; ++j) {
    const double guard = 8.0 * s.dim() * eps * scale[j];
    if (e[j] < -(tol + guard)) return false;
  }
  return true;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

}  // namespace hesscap
