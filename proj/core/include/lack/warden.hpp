#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lack/duration.hpp"
#include "lack/empirical_density.hpp"
#include "lack/quality.hpp"
#include "lack/sim.hpp"

namespace lack::warden {

struct WardenReport {
  bool flagged = false;  // statistic > threshold
  double statistic = 0.0;
  double threshold = 0.0;

  // Active warden only.
  std::uint64_t packets_erased = 0;
  std::uint64_t steg_bits_destroyed = 0;
  std::uint64_t legit_destroyed = 0;  // would have been played by the receiver
  double mos_penalty = 0.0;
};

WardenReport make_report(double statistic, double threshold);

// --- passive loss-statistics scan -------------------------------------------

struct PassiveScan {
  double threshold = 0.0;
  std::vector<WardenReport> calls;  // statistic = observed loss fraction
  std::size_t flagged = 0;
  double flag_rate = 0.0;
};

// Mean + sigmas * (sample) standard deviation of reference loss fractions.
// Throws DomainError when fewer than two values are given.
double population_threshold(std::span<const double> reference_losses, double sigmas = 2.0);

// Observed loss of a call as a passive observer sees it: lost plus late, over sent.
double observed_loss(const sim::CallTrace& trace);

// Throws DomainError for empty input.
PassiveScan passive_loss_scan(std::span<const double> loss_fractions, double threshold);
PassiveScan passive_loss_scan(std::span<const sim::CallTrace> traces, double threshold);

// --- call-duration distribution test ------------------------------------------

// Two-sided one-sample Kolmogorov-Smirnov distance between the sample and `cdf`.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

// P(K > x) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double x);

// Asymptotic critical distance K_alpha / sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

// Flags the sample when its KS distance exceeds the critical value. Throws
// DomainError for an empty sample, fewer than 30 values, or alpha outside (0, 1).
WardenReport duration_distribution_test(std::span<const double> durations,
                                        const duration::WeibullModel& reference, double alpha);
WardenReport duration_distribution_test(std::span<const double> durations,
                                        const duration::EmpiricalDensity& reference, double alpha);

// --- active delayed-packet filter ----------------------------------------------

struct ActiveFilterResult {
  sim::CallTrace filtered;
  WardenReport report;  // statistic = largest arrival delay, threshold = assumed buffer
};

// Erases the payload of every arriving packet delayed beyond `assumed_buffer_ms`.
// Timing is preserved, so erased packets count as late at the receiver; an
// erased packet that the receiver would have played is collateral damage.
ActiveFilterResult active_filter(const sim::CallTrace& trace, double assumed_buffer_ms,
                                 const quality::MosParams& params = {});

}  // namespace lack::warden
