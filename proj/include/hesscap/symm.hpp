#pragma once

// Elementary symmetric polynomials of eigenvalue spectra.

#include <span>
#include <vector>

namespace hesscap {

/// Ordered eigenvalue list. Entries are sorted descending on construction so
/// every downstream sum runs in the same order regardless of input order.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  int dim() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> values_;
};

/// S_k(lambda). S_0 = 1. Throws DomainError unless 0 <= k <= n.
double esym(const Spectrum& s, int k);

/// (S_0, ..., S_n).
std::vector<double> esym_all(const Spectrum& s);

/// dS_k/dlambda_i = S_{k-1}(lambda without entry i), in the spectrum's order.
/// Throws DomainError unless 1 <= k <= n.
std::vector<double> esym_gradient(const Spectrum& s, int k);

/// True iff S_j >= -tol for j = 1..k. A roundoff allowance proportional to
/// S_j(|lambda|) is added to tol so that exact zeros computed in floating
/// point (F_k = 0 of an extremal) are not rejected.
bool is_k_admissible(const Spectrum& s, int k, double tol = 0.0);

/// C(n, k) as a double; zero when k < 0 or k > n.
double binomial(int n, int k);

namespace detail {
/// (S_0..S_kmax) of values taken in the given order, by the product recurrence.
std::vector<double> esym_prefix(std::span<const double> values, int kmax);
/// S_{k-1} of values with entry i removed, for every i, in the given order.
std::vector<double> esym_gradient_raw(std::span<const double> values, int k);
}  // namespace detail

}  // namespace hesscap
