#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lack/duration.hpp"

namespace lack::control {

inline constexpr double kUncapped = std::numeric_limits<double>::infinity();

enum class Mode {
  Constant,      // fixed rate for the whole call
  ResidualMean,  // remaining bits over the expected remaining duration
  Quantile,      // remaining bits over the time the call survives with probability xi
};

// Which "expected duration" divides the remaining steganogram in ResidualMean mode.
//   MeanResidual:     E(D | D > t) - t, the expected time left (default)
//   FullConditional:  E(D | D > t), the expected total duration
// Both agree at t = 0.
enum class Denominator { MeanResidual, FullConditional };

struct ControllerConfig {
  Mode mode = Mode::ResidualMean;
  Denominator denominator = Denominator::MeanResidual;
  double xi = 0.9;                 // Quantile mode only, in (0, 1)
  double constant_rate_bps = 0.0;  // Constant mode only
  bool compensate_arrears = true;

  void validate() const;
};

// Steganogram bookkeeping of one call. Whole delivered bits are counted as
// integers, so delivered + remaining == total holds exactly; a fractional
// carry in [0, 1) holds the part of a bit that analytic stepping has sent.
class ControllerState {
 public:
  explicit ControllerState(std::uint64_t total_bits);

  std::uint64_t total_bits() const noexcept { return total_bits_; }
  std::uint64_t delivered_bits() const noexcept { return delivered_bits_; }
  std::uint64_t remaining_bits() const noexcept { return total_bits_ - delivered_bits_; }
  double carry() const noexcept { return carry_; }

  // S_R(t) as a real number: remaining whole bits minus the carry.
  double remaining() const noexcept { return static_cast<double>(remaining_bits()) - carry_; }
  bool exhausted() const noexcept { return remaining_bits() == 0; }

  double arrears() const noexcept { return arrears_; }
  std::optional<double> arrears_anchor() const noexcept {
    return arrears_anchor_ < 0.0 ? std::nullopt : std::optional<double>(arrears_anchor_);
  }
  double elapsed() const noexcept { return elapsed_; }

  // Sends rate * dt bits (never more than what remains) and moves the clock.
  void advance(double rate_bps, double dt);

  // Packet-level delivery confirmed by the receiver; clamps at what remains.
  void deliver(std::uint64_t bits);
  void set_elapsed(double t) noexcept { elapsed_ = t; }

  // Arrears bookkeeping after a decision at time t held for dt seconds.
  void account_arrears(double base_bps, double applied_bps, double irq_bps, double t, double dt);

 private:
  std::uint64_t total_bits_;
  std::uint64_t delivered_bits_ = 0;
  double carry_ = 0.0;
  double arrears_ = 0.0;
  double arrears_anchor_ = -1.0;  // negative while no anchor is set
  double elapsed_ = 0.0;
};

struct RateDecision {
  double ir_raw = 0.0;     // controller rate including arrears compensation
  double ir_capped = 0.0;  // min(ir_raw, irq)
  bool cap_active = false;
  double irq = kUncapped;
  double base_bps = 0.0;     // controller rate without arrears compensation
  double arrears_bps = 0.0;  // compensation term
};

// IR = S / T and the dual T = S / IR.
double constant_rate(double bits, double horizon);
double required_duration(double bits, double rate_bps);

// Uncompensated controller rate at time t for the state's remaining bits.
double base_rate(const ControllerConfig& config, const ControllerState& state,
                 const duration::WeibullModel& model, double t);

// Rate at time t without touching the state.
RateDecision decide(const ControllerConfig& config, const ControllerState& state,
                    const duration::WeibullModel& model, double t, double irq_bps = kUncapped);

// decide, account arrears, then advance the state by dt.
RateDecision step(const ControllerConfig& config, ControllerState& state,
                  const duration::WeibullModel& model, double t, double dt,
                  double irq_bps = kUncapped);

RateDecision residual_mean_step(ControllerState& state, const duration::WeibullModel& model,
                                double t, double dt, double irq_bps = kUncapped,
                                Denominator denominator = Denominator::MeanResidual);

// Throws DomainError for xi outside (0, 1).
RateDecision quantile_step(ControllerState& state, const duration::WeibullModel& model, double t,
                           double dt, double xi, double irq_bps = kUncapped);

// arrears / E(D | D > t'), the extra rate that pays back capped-off bits.
double arrears_rate(double arrears_bits, const duration::WeibullModel& model, double anchor_time);

struct GainMetrics {
  std::vector<double> reduction;  // X(t) = S / E(D) - IR(t)
  double total = 0.0;             // Z, trapezoidal integral of X over the trace
};

GainMetrics gain_metrics(std::span<const double> times, std::span<const double> rates, double bits,
                         double mean_duration);

struct RateCurve {
  std::vector<double> times;
  std::vector<double> rates;
};

// Steps a fresh controller from t = 0 to `horizon` and records ir_capped at
// every step.
RateCurve simulate_curve(const ControllerConfig& config, const duration::WeibullModel& model,
                         std::uint64_t bits, double horizon, double dt, double irq_bps = kUncapped);

enum class Dominance { First, Second, Tie };

struct DominanceInterval {
  double begin;
  double end;
  Dominance leader;
};

struct ComparisonReport {
  std::vector<double> times;  // report grid
  std::vector<double> first;
  std::vector<double> second;
  std::optional<double> crossing;  // first sign change of first - second
  std::vector<DominanceInterval> intervals;
};

// Compares two curves sampled on the same times. Values within `tie_tol`
// relative of each other count as a tie.
ComparisonReport compare_curves(const RateCurve& first, const RateCurve& second,
                                double tie_tol = 1e-12);

// Residual-mean controller (first) against the quantile controller (second),
// both uncapped, stepped at `dt` and reported on a `grid_step` grid.
ComparisonReport compare_controllers(const duration::WeibullModel& model, std::uint64_t bits,
                                     double xi, double horizon, double grid_step = 1.0,
                                     double dt = 0.01);

}  // namespace lack::control
