#pragma once

// Call-duration models: the two-parameter Weibull family with survival,
// conditional-expectation and quantile-horizon analytics.
//
// Times are in seconds except for the two published polynomial
// approximations, which take and return minutes.

namespace lack::duration {

class WeibullModel {
 public:
  // Throws DomainError unless shape > 0 and scale > 0.
  WeibullModel(double shape, double scale);

  double shape() const noexcept { return shape_; }
  double scale() const noexcept { return scale_; }

  // (t / scale)^shape, the cumulative hazard at t.
  double cumulative_hazard(double t) const;

  friend bool operator==(const WeibullModel&, const WeibullModel&) = default;

 private:
  double shape_;
  double scale_;
};

struct DurationStats {
  double mean;     // seconds
  double std_dev;  // seconds
  double cv;       // std_dev / mean

  // Builds stats from mean and standard deviation; throws DomainError if
  // mean <= 0 or std_dev < 0.
  static DurationStats from_moments(double mean, double std_dev);
};

DurationStats weibull_stats(const WeibullModel& model);

// Scale that gives `target_mean` for the requested shape.
WeibullModel calibrate_scale(double shape, double target_mean);

double survival(const WeibullModel& model, double t);
double cdf(const WeibullModel& model, double t);
double density(const WeibullModel& model, double t);

// P(D > horizon | D > elapsed). Requires 0 <= elapsed <= horizon.
double conditional_survival(const WeibullModel& model, double elapsed, double horizon);

// Mean residual time seen from an arbitrary instant, (cv^2 + 1) / 2 * mean.
double residual_mean(const DurationStats& stats);

// E(D - t | D > t), computed by adaptive quadrature of the survival tail.
// Throws SaturationError when survival(t) underflows double precision.
double mean_residual_life(const WeibullModel& model, double t);

// E(D | D > t) = t + mean_residual_life(model, t).
double conditional_mean_duration(const WeibullModel& model, double t);

// Largest T with P(D > T | D > t) >= xi. Requires 0 < xi <= 1, t >= 0.
double quantile_horizon(const WeibullModel& model, double t, double xi);

// Published polynomial fits, minutes in and out.
//   conditional mean:  1.32 cv + t sqrt(cv) + 0.59
//   horizon (xi=0.8):  -0.06 cv^2 + cv (0.05 t + 0.32) + 0.95 t + 0.17
double approx_conditional_mean_minutes(double cv, double t_minutes);
double approx_horizon_minutes(double cv, double t_minutes);

// Inverse-transform sample: the t with survival(t) == u, for 0 < u < 1.
double sample_duration(const WeibullModel& model, double u);

}  // namespace lack::duration
