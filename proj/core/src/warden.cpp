#include "lack/warden.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lack/error.hpp"

namespace lack::warden {
namespace {

constexpr std::size_t kMinSample = 30;

void check_sample(std::span<const double> durations, double alpha) {
  if (durations.empty()) throw DomainError("duration test needs a non-empty sample");
  if (durations.size() < kMinSample) throw DomainError("duration test needs at least 30 calls");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

WardenReport make_report(double statistic, double threshold) {
  WardenReport r;
  r.statistic = statistic;
  r.threshold = threshold;
  r.flagged = statistic > threshold;
  return r;
}

double population_threshold(std::span<const double> reference_losses, double sigmas) {
  if (reference_losses.size() < 2) throw DomainError("threshold needs at least two reference calls");
  double mean = 0.0;
  for (double v : reference_losses) mean += v;
  mean /= static_cast<double>(reference_losses.size());
  double ss = 0.0;
  for (double v : reference_losses) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(reference_losses.size() - 1));
  return mean + sigmas * sd;
}

double observed_loss(const sim::CallTrace& trace) { return trace.realized_total_loss(); }

PassiveScan passive_loss_scan(std::span<const double> loss_fractions, double threshold) {
  if (loss_fractions.empty()) throw DomainError("passive scan needs at least one call");
  PassiveScan scan;
  scan.threshold = threshold;
  scan.calls.reserve(loss_fractions.size());
  for (double loss : loss_fractions) {
    scan.calls.push_back(make_report(loss, threshold));
    if (scan.calls.back().flagged) ++scan.flagged;
  }
  scan.flag_rate = static_cast<double>(scan.flagged) / static_cast<double>(loss_fractions.size());
  return scan;
}

PassiveScan passive_loss_scan(std::span<const sim::CallTrace> traces, double threshold) {
  std::vector<double> losses;
  losses.reserve(traces.size());
  for (const auto& t : traces) losses.push_back(observed_loss(t));
  return passive_loss_scan(losses, threshold);
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("KS statistic of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const auto k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - f, f - k / n});
  }
  return d;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // Jacobi-theta form converges fast for small x.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double m = 2.0 * k - 1.0;
      sum += std::exp(-m * m * c);
    }
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw DomainError("critical value needs n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  double lo = 0.0;
  double hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

WardenReport duration_distribution_test(std::span<const double> durations,
                                        const duration::WeibullModel& reference, double alpha) {
  check_sample(durations, alpha);
  const double d = ks_statistic(durations, [&](double t) {
    return t <= 0.0 ? 0.0 : duration::cdf(reference, t);
  });
  return make_report(d, ks_critical_value(durations.size(), alpha));
}

WardenReport duration_distribution_test(std::span<const double> durations,
                                        const duration::EmpiricalDensity& reference,
                                        double alpha) {
  check_sample(durations, alpha);
  const double d = ks_statistic(durations, [&](double t) { return reference.cdf(t); });
  return make_report(d, ks_critical_value(durations.size(), alpha));
}

ActiveFilterResult active_filter(const sim::CallTrace& trace, double assumed_buffer_ms,
                                 const quality::MosParams& params) {
  if (!(assumed_buffer_ms >= 0.0)) throw DomainError("assumed buffer must be >= 0");
  ActiveFilterResult result;
  result.filtered = trace;
  WardenReport& r = result.report;
  double worst = 0.0;
  for (auto& e : result.filtered.events) {
    if (e.outcome == sim::Outcome::NetworkLost) continue;
    worst = std::max(worst, e.total_delay_ms);
    if (e.total_delay_ms <= assumed_buffer_ms) continue;
    ++r.packets_erased;
    if (e.carries_steg && e.extracted) r.steg_bits_destroyed += e.steg_bits;
    if (e.outcome == sim::Outcome::Played) {
      ++r.legit_destroyed;
      e.outcome = sim::Outcome::Late;
    }
    e.extracted = false;
  }
  result.filtered.recount();
  const WardenReport verdict = make_report(worst, assumed_buffer_ms);
  r.flagged = verdict.flagged;
  r.statistic = verdict.statistic;
  r.threshold = verdict.threshold;
  r.mos_penalty = quality::mos_from_loss(params, trace.realized_total_loss()) -
                  quality::mos_from_loss(params, result.filtered.realized_total_loss());
  return result;
}

}  // namespace lack::warden
