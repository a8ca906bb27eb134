#include "lack/empirical_density.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "lack/error.hpp"

namespace lack::duration {
namespace {

double lognormal_branch(double t) {
  if (t <= 0.0) return 0.0;
  const double log_dev = std::log(t) - 3.8;
  return std::exp(-log_dev * log_dev / 4.805) / (1.55 * t * std::sqrt(2.0 * std::numbers::pi));
}

double mixture_branch(double t) {
  return 0.000114 * std::exp(-0.00114 * t) + 0.027252 * std::exp(-0.03028 * t);
}

template <class F>
double gk15(F&& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 10, 1e-14);
}

}  // namespace

double EmpiricalDensity::unnormalized(double t) {
  if (t < 0.0 || t > kSupportEnd) return 0.0;
  if (t < kMixtureBegin) return lognormal_branch(t);
  if (t <= kMixtureEnd) return mixture_branch(t);
  return lognormal_branch(t);
}

// Cells are aligned with both branch boundaries, so [a, b] inside one cell
// never straddles a discontinuity.
double EmpiricalDensity::partial_integral(double a, double b, bool first_moment) const {
  auto f = [first_moment](double x) {
    const double v = unnormalized(x);
    return first_moment ? x * v : v;
  };
  return gk15(f, a, b);
}

EmpiricalDensity::EmpiricalDensity() {
  const auto cells = static_cast<std::size_t>(kSupportEnd / kCell);
  cdf_nodes_.assign(cells + 1, 0.0);
  moment_nodes_.assign(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = static_cast<double>(i) * kCell;
    cdf_nodes_[i + 1] = cdf_nodes_[i] + partial_integral(a, a + kCell, false);
    moment_nodes_[i + 1] = moment_nodes_[i] + partial_integral(a, a + kCell, true);
  }
  normalization_ = cdf_nodes_.back();
  mean_ = moment_nodes_.back() / normalization_;
}

double EmpiricalDensity::density(double t) const { return unnormalized(t) / normalization_; }

double EmpiricalDensity::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= kSupportEnd) return 1.0;
  const auto i = static_cast<std::size_t>(t / kCell);
  const double node = static_cast<double>(i) * kCell;
  return (cdf_nodes_[i] + partial_integral(node, t, false)) / normalization_;
}

double EmpiricalDensity::conditional_mean_duration(double t) const {
  if (!(t >= 0.0) || t >= kSupportEnd) {
    throw DomainError("empirical conditional mean needs 0 <= t < 455 s");
  }
  const auto i = static_cast<std::size_t>(t / kCell);
  const double node = static_cast<double>(i) * kCell;
  const double moment_below = moment_nodes_[i] + partial_integral(node, t, true);
  const double mass_below = cdf_nodes_[i] + partial_integral(node, t, false);
  return (moment_nodes_.back() - moment_below) / (normalization_ - mass_below);
}

double EmpiricalDensity::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return kSupportEnd;
  const double target = p * normalization_;
  std::size_t lo = 0;
  std::size_t hi = cdf_nodes_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (cdf_nodes_[mid] < target ? lo : hi) = mid;
  }
  double a = static_cast<double>(lo) * kCell;
  double b = a + kCell;
  const double base = cdf_nodes_[lo];
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (a + b);
    if (base + partial_integral(static_cast<double>(lo) * kCell, mid, false) < target) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace lack::duration
