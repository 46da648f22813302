#pragma once

// Test profile families: seeded random admissible profiles, the Sobolev
// extremal truncated to a ball, the truncated-log family for k = n/2, and a
// few closed-form smooth profiles.

#include <cstdint>
#include <span>
#include <vector>

#include "hesscap/radial.hpp"

namespace hesscap {

/// One term of a random slope u'(s):
///   bump:       c s (1 + (s/sigma)^2)^{-beta}
///   monomial:   c s^{2j+1}   (sigma unused, beta = -j)
/// With c >= 0 and 0 <= beta <= n/(2k) every term satisfies
/// (n-k) u'/s + k u'' >= 0, and so does any sum of them.
struct SlopeTerm {
  double c = 1.0;
  double sigma = 1.0;
  double beta = 0.0;
  int power = -1;  ///< j >= 0 selects the monomial form
};

/// Profile on [0, R] whose slope is the sum of `terms`; u(R) = 0.
/// Nodes default to sinh-clustered ones resolving the smallest sigma.
RadialProfile profile_from_slopes(int n, int k, double R, std::span<const SlopeTerm> terms, int cells = 2048);
RadialProfile profile_from_slopes(int n, int k, std::vector<double> nodes, std::span<const SlopeTerm> terms);

struct RandomProfileOptions {
  double R = 1.0;
  int cells = 2048;
  /// Bump scales are log-uniform in [sigma_min, sigma_max] * R.
  double sigma_min = 0.05;
  double sigma_max = 2.0;
  int max_terms = 3;
  /// Attempts before giving up on a draw that fails the admissibility scan.
  int max_rejections = 100;
};

/// Deterministic in (n, k, opts, seed). Each profile is drawn from its own
/// stream seeded with (seed, index), so families are prefix-stable.
std::vector<SlopeTerm> random_slope_terms(int n, int k, const RandomProfileOptions& opts, std::uint64_t seed,
                                          std::uint64_t index);
RadialProfile random_admissible_profile(int n, int k, const RandomProfileOptions& opts, std::uint64_t seed,
                                        std::uint64_t index);
std::vector<RadialProfile> random_profile_family(int n, int k, std::size_t count, std::uint64_t seed,
                                                 const RandomProfileOptions& opts = {});

/// -(1+s^2)^e + (1+R^2)^e with e = (2k-n)/(2k), on nodes clustered near 0.
/// Requires 2k < n.
RadialProfile sobolev_extremal(int n, int k, double R, int cells = 4096);

/// -min(a, log(R/s)) for k = n/2; corner at s = R e^{-a}. Its energy is
/// (omega_n C(n-1,k-1)/k) a.
RadialProfile truncated_log(int n, double R, double a, int cells = 4096);

/// (s^2 - R^2)/2: Hessian is the identity.
RadialProfile quadratic_profile(int n, int k, double R, int cells = 1024);
/// s^4/4 + s^2/2 - (R^4/4 + R^2/2).
RadialProfile quartic_profile(int n, int k, double R, int cells = 1024);

}  // namespace hesscap
