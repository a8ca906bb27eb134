#include "lack/control.hpp"

#include <algorithm>
#include <cmath>

#include "lack/error.hpp"

namespace lack::control {
namespace {

// Mean residual life, falling back to its first-order tail expansion
// t / (k z(t)) once the survival probability underflows.
double residual_life(const duration::WeibullModel& model, double t) {
  try {
    return duration::mean_residual_life(model, t);
  } catch (const SaturationError&) {
    return t / (model.shape() * model.cumulative_hazard(t));
  }
}

Dominance leader(double a, double b, double tie_tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) <= tie_tol * scale) return Dominance::Tie;
  return a > b ? Dominance::First : Dominance::Second;
}

}  // namespace

void ControllerConfig::validate() const {
  if (mode == Mode::Quantile && !(xi > 0.0 && xi < 1.0)) {
    throw DomainError("quantile controller needs xi in (0, 1)");
  }
  if (mode == Mode::Constant && !(constant_rate_bps >= 0.0)) {
    throw DomainError("constant rate must be >= 0");
  }
}

ControllerState::ControllerState(std::uint64_t total_bits) : total_bits_(total_bits) {}

void ControllerState::advance(double rate_bps, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  if (!(rate_bps >= 0.0)) throw DomainError("rate must be >= 0");
  elapsed_ += dt;
  if (exhausted()) return;
  const double amount = rate_bps * dt;
  if (amount >= remaining()) {
    delivered_bits_ = total_bits_;
    carry_ = 0.0;
    return;
  }
  carry_ += amount;
  const auto whole = std::min(static_cast<std::uint64_t>(std::floor(carry_)), remaining_bits());
  delivered_bits_ += whole;
  carry_ -= static_cast<double>(whole);
  if (exhausted()) carry_ = 0.0;
}

void ControllerState::deliver(std::uint64_t bits) {
  delivered_bits_ += std::min(bits, remaining_bits());
  if (exhausted()) carry_ = 0.0;
}

void ControllerState::account_arrears(double base_bps, double applied_bps, double irq_bps,
                                      double t, double dt) {
  if (base_bps > irq_bps) {
    arrears_ += (base_bps - irq_bps) * dt;
    arrears_anchor_ = -1.0;
    return;
  }
  if (arrears_ <= 0.0) return;
  if (arrears_anchor_ < 0.0) arrears_anchor_ = t;
  arrears_ = std::max(0.0, arrears_ - std::max(0.0, applied_bps - base_bps) * dt);
  if (arrears_ == 0.0) arrears_anchor_ = -1.0;
}

double constant_rate(double bits, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  if (!(bits >= 0.0)) throw DomainError("steganogram size must be >= 0");
  return bits / horizon;
}

double required_duration(double bits, double rate_bps) {
  if (!(rate_bps > 0.0)) throw DomainError("rate must be > 0");
  if (!(bits >= 0.0)) throw DomainError("steganogram size must be >= 0");
  return bits / rate_bps;
}

double base_rate(const ControllerConfig& config, const ControllerState& state,
                 const duration::WeibullModel& model, double t) {
  if (state.exhausted()) return 0.0;
  const double remaining = state.remaining();
  switch (config.mode) {
    case Mode::Constant:
      return config.constant_rate_bps;
    case Mode::ResidualMean: {
      const double residual = residual_life(model, t);
      const double denom =
          config.denominator == Denominator::MeanResidual ? residual : t + residual;
      return remaining / denom;
    }
    case Mode::Quantile: {
      if (!(config.xi > 0.0 && config.xi < 1.0)) {
        throw DomainError("quantile controller needs xi in (0, 1)");
      }
      return remaining / (duration::quantile_horizon(model, t, config.xi) - t);
    }
  }
  return 0.0;
}

double arrears_rate(double arrears_bits, const duration::WeibullModel& model, double anchor_time) {
  if (!(arrears_bits >= 0.0)) throw DomainError("arrears must be >= 0");
  if (arrears_bits == 0.0) return 0.0;
  return arrears_bits / (anchor_time + residual_life(model, anchor_time));
}

RateDecision decide(const ControllerConfig& config, const ControllerState& state,
                    const duration::WeibullModel& model, double t, double irq_bps) {
  if (!(irq_bps >= 0.0)) throw DomainError("quality cap must be >= 0");
  RateDecision d;
  d.irq = irq_bps;
  d.base_bps = base_rate(config, state, model, t);
  if (config.compensate_arrears && state.arrears() > 0.0 && d.base_bps <= irq_bps &&
      !state.exhausted()) {
    d.arrears_bps = arrears_rate(state.arrears(), model, state.arrears_anchor().value_or(t));
  }
  d.ir_raw = d.base_bps + d.arrears_bps;
  d.cap_active = d.ir_raw > irq_bps;
  d.ir_capped = std::min(d.ir_raw, irq_bps);
  return d;
}

RateDecision step(const ControllerConfig& config, ControllerState& state,
                  const duration::WeibullModel& model, double t, double dt, double irq_bps) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  const RateDecision d = decide(config, state, model, t, irq_bps);
  state.account_arrears(d.base_bps, d.ir_capped, irq_bps, t, dt);
  state.advance(d.ir_capped, dt);
  return d;
}

RateDecision residual_mean_step(ControllerState& state, const duration::WeibullModel& model,
                                double t, double dt, double irq_bps, Denominator denominator) {
  ControllerConfig config;
  config.mode = Mode::ResidualMean;
  config.denominator = denominator;
  return step(config, state, model, t, dt, irq_bps);
}

RateDecision quantile_step(ControllerState& state, const duration::WeibullModel& model, double t,
                           double dt, double xi, double irq_bps) {
  ControllerConfig config;
  config.mode = Mode::Quantile;
  config.xi = xi;
  config.validate();
  return step(config, state, model, t, dt, irq_bps);
}

GainMetrics gain_metrics(std::span<const double> times, std::span<const double> rates, double bits,
                         double mean_duration) {
  if (times.size() != rates.size()) throw DomainError("times and rates differ in length");
  if (!(mean_duration > 0.0)) throw DomainError("mean duration must be > 0");
  GainMetrics g;
  const double initial = bits / mean_duration;
  g.reduction.reserve(rates.size());
  for (double r : rates) g.reduction.push_back(initial - r);
  for (std::size_t i = 1; i < times.size(); ++i) {
    g.total += 0.5 * (g.reduction[i] + g.reduction[i - 1]) * (times[i] - times[i - 1]);
  }
  return g;
}

RateCurve simulate_curve(const ControllerConfig& config, const duration::WeibullModel& model,
                         std::uint64_t bits, double horizon, double dt, double irq_bps) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be >= 0");
  config.validate();
  ControllerState state(bits);
  RateCurve curve;
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  curve.times.reserve(steps + 1);
  curve.rates.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const RateDecision d = step(config, state, model, t, dt, irq_bps);
    curve.times.push_back(t);
    curve.rates.push_back(d.ir_capped);
  }
  return curve;
}

ComparisonReport compare_curves(const RateCurve& first, const RateCurve& second, double tie_tol) {
  if (first.times.size() != second.times.size() || first.times.size() != first.rates.size() ||
      second.times.size() != second.rates.size()) {
    throw DomainError("curves must share one time grid");
  }
  ComparisonReport report;
  report.times = first.times;
  report.first = first.rates;
  report.second = second.rates;
  if (first.times.empty()) return report;

  std::optional<Dominance> last_strict;
  std::size_t last_strict_index = 0;
  for (std::size_t i = 0; i < first.times.size(); ++i) {
    const Dominance who = leader(first.rates[i], second.rates[i], tie_tol);
    const double t = first.times[i];
    if (report.intervals.empty() || report.intervals.back().leader != who) {
      if (!report.intervals.empty()) report.intervals.back().end = t;
      report.intervals.push_back({t, t, who});
    } else {
      report.intervals.back().end = t;
    }
    if (who == Dominance::Tie) continue;
    if (!report.crossing && last_strict && *last_strict != who) {
      // Linear interpolation of the difference between the two bracketing samples.
      const std::size_t j = last_strict_index;
      const double dj = first.rates[j] - second.rates[j];
      const double di = first.rates[i] - second.rates[i];
      const double tj = first.times[j];
      report.crossing = tj + (t - tj) * dj / (dj - di);
    }
    last_strict = who;
    last_strict_index = i;
  }
  return report;
}

ComparisonReport compare_controllers(const duration::WeibullModel& model, std::uint64_t bits,
                                     double xi, double horizon, double grid_step, double dt) {
  if (!(grid_step >= dt)) throw DomainError("report grid must not be finer than the time step");
  ControllerConfig residual;
  ControllerConfig quantile;
  quantile.mode = Mode::Quantile;
  quantile.xi = xi;
  quantile.validate();
  const RateCurve a = simulate_curve(residual, model, bits, horizon, dt);
  const RateCurve b = simulate_curve(quantile, model, bits, horizon, dt);
  ComparisonReport fine = compare_curves(a, b);

  ComparisonReport report;
  report.crossing = fine.crossing;
  report.intervals = std::move(fine.intervals);
  const auto stride = static_cast<std::size_t>(std::llround(grid_step / dt));
  for (std::size_t i = 0; i < fine.times.size(); i += stride) {
    report.times.push_back(fine.times[i]);
    report.first.push_back(fine.first[i]);
    report.second.push_back(fine.second[i]);
  }
  return report;
}

}  // namespace lack::control
