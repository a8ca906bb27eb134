#include "lack/duration.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lack/error.hpp"
#include "quadrature.hpp"

namespace lack::duration {
namespace {

// -ln(1e-15): the tail is cut where conditional survival falls below 1e-15.
const double kTailCutoff = -std::log(1e-15);

// Cumulative hazard beyond which survival(t) is subnormal or zero.
const double kSaturationHazard = -std::log(std::numeric_limits<double>::min());

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + " must be a finite non-negative time");
  }
}

}  // namespace

WeibullModel::WeibullModel(double shape, double scale) : shape_(shape), scale_(scale) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("Weibull shape must be > 0");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("Weibull scale must be > 0");
}

double WeibullModel::cumulative_hazard(double t) const { return std::pow(t / scale_, shape_); }

DurationStats DurationStats::from_moments(double mean, double std_dev) {
  if (!(mean > 0.0)) throw DomainError("mean duration must be > 0");
  if (!(std_dev >= 0.0)) throw DomainError("standard deviation must be >= 0");
  return {mean, std_dev, std_dev / mean};
}

DurationStats weibull_stats(const WeibullModel& model) {
  const double g1 = std::tgamma(1.0 + 1.0 / model.shape());
  const double g2 = std::tgamma(1.0 + 2.0 / model.shape());
  const double mean = model.scale() * g1;
  const double var = model.scale() * model.scale() * (g2 - g1 * g1);
  return DurationStats::from_moments(mean, std::sqrt(std::max(var, 0.0)));
}

WeibullModel calibrate_scale(double shape, double target_mean) {
  if (!(shape > 0.0)) throw DomainError("Weibull shape must be > 0");
  if (!(target_mean > 0.0)) throw DomainError("target mean must be > 0");
  return WeibullModel(shape, target_mean / std::tgamma(1.0 + 1.0 / shape));
}

double survival(const WeibullModel& model, double t) {
  require_time(t, "t");
  return std::exp(-model.cumulative_hazard(t));
}

double cdf(const WeibullModel& model, double t) {
  require_time(t, "t");
  return -std::expm1(-model.cumulative_hazard(t));
}

double density(const WeibullModel& model, double t) {
  require_time(t, "t");
  const double k = model.shape();
  const double lambda = model.scale();
  if (t == 0.0) {
    if (k < 1.0) return std::numeric_limits<double>::infinity();
    return k == 1.0 ? 1.0 / lambda : 0.0;
  }
  const double z = model.cumulative_hazard(t);
  return k / t * z * std::exp(-z);
}

double conditional_survival(const WeibullModel& model, double elapsed, double horizon) {
  require_time(elapsed, "elapsed time");
  require_time(horizon, "horizon");
  if (horizon < elapsed) throw DomainError("horizon must not precede elapsed time");
  // Hazard difference instead of a ratio of survivals: no underflow deep in the tail.
  return std::exp(-(model.cumulative_hazard(horizon) - model.cumulative_hazard(elapsed)));
}

double residual_mean(const DurationStats& stats) {
  return (stats.cv * stats.cv + 1.0) / 2.0 * stats.mean;
}

double mean_residual_life(const WeibullModel& model, double t) {
  require_time(t, "t");
  const double z_t = model.cumulative_hazard(t);
  if (z_t >= kSaturationHazard) {
    throw SaturationError("survival at t=" + std::to_string(t) +
                          " s underflows; conditional duration is undefined");
  }
  const double k = model.shape();
  const double lambda = model.scale();
  const double end = lambda * std::pow(z_t + kTailCutoff, 1.0 / k);
  auto conditional_tail = [&](double x) { return std::exp(-(model.cumulative_hazard(x) - z_t)); };
  return detail::integrate(conditional_tail, t, end);
}

double conditional_mean_duration(const WeibullModel& model, double t) {
  return t + mean_residual_life(model, t);
}

double quantile_horizon(const WeibullModel& model, double t, double xi) {
  require_time(t, "t");
  if (!(xi > 0.0 && xi <= 1.0)) throw DomainError("xi must lie in (0, 1]");
  if (xi == 1.0) return t;
  const double z = model.cumulative_hazard(t) - std::log(xi);
  return std::max(t, model.scale() * std::pow(z, 1.0 / model.shape()));
}

double approx_conditional_mean_minutes(double cv, double t_minutes) {
  return 1.32 * cv + t_minutes * std::sqrt(cv) + 0.59;
}

double approx_horizon_minutes(double cv, double t_minutes) {
  return -0.06 * cv * cv + cv * (0.05 * t_minutes + 0.32) + 0.95 * t_minutes + 0.17;
}

double sample_duration(const WeibullModel& model, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("uniform draw must lie in (0, 1)");
  return model.scale() * std::pow(-std::log(u), 1.0 / model.shape());
}

}  // namespace lack::duration
