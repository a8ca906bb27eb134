#pragma once

#include <vector>

namespace lack::duration {

// Piecewise analytic fit to a measured VoIP call-duration density, supported
// on [0, 455] s:
//
//   [0, 27.5)      log-normal form, mu = 3.8, sigma = 1.55
//   [27.5, 66.5]   0.000114 e^{-0.00114 t} + 0.027252 e^{-0.03028 t}
//   (66.5, 455]    same log-normal form as the first branch
//
// The branches do not integrate to one on their own, so the density is
// renormalized numerically over the support. CDF and first-moment tables are
// built once at construction; the object is immutable afterwards.
class EmpiricalDensity {
 public:
  static constexpr double kSupportEnd = 455.0;
  static constexpr double kMixtureBegin = 27.5;
  static constexpr double kMixtureEnd = 66.5;

  EmpiricalDensity();

  // The published branches, before renormalization. Zero outside the support.
  static double unnormalized(double t);

  // Integral of `unnormalized` over the support.
  double normalization() const noexcept { return normalization_; }

  double density(double t) const;
  double cdf(double t) const;
  double survival(double t) const { return 1.0 - cdf(t); }
  double mean() const noexcept { return mean_; }

  // E(D | D > t) over the truncated support; t must be < kSupportEnd.
  double conditional_mean_duration(double t) const;

  // Inverse CDF for p in [0, 1].
  double quantile(double p) const;

 private:
  static constexpr double kCell = 0.5;

  double partial_integral(double a, double b, bool first_moment) const;

  double normalization_ = 1.0;
  double mean_ = 0.0;
  std::vector<double> cdf_nodes_;
  std::vector<double> moment_nodes_;
};

}  // namespace lack::duration
