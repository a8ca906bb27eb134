#include "lack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lack/error.hpp"

namespace lack::sim {
namespace {

class NetworkDelaySampler {
 public:
  explicit NetworkDelaySampler(const NetworkConfig& net) : net_(net) {}

  // Whole milliseconds; the simulator's time base is a 1 ms tick.
  double operator()(std::mt19937_64& rng) {
    if (net_.jitter_ms == 0.0) return std::round(net_.base_delay_ms);
    double offset = 0.0;
    if (net_.jitter_model == JitterModel::Uniform) {
      offset = std::uniform_real_distribution<double>(-net_.jitter_ms, net_.jitter_ms)(rng);
    } else {
      std::normal_distribution<double> normal(0.0, net_.jitter_ms / 2.0);
      do {
        offset = normal(rng);
      } while (std::abs(offset) > net_.jitter_ms);
    }
    return std::clamp(std::round(net_.base_delay_ms + offset), std::ceil(net_.min_delay_ms()),
                      std::floor(net_.max_delay_ms()));
  }

 private:
  const NetworkConfig& net_;
};

double quality_cap(const Scenario& s, const RtcpReport* last_report) {
  const double p_n = last_report && last_report->expected > 0 ? last_report->network_loss_fraction
                                                              : s.network.loss_at(0.0);
  double irq = control::kUncapped;
  switch (s.cap.policy) {
    case CapPolicy::None:
      break;
    case CapPolicy::Static:
      irq = s.cap.static_irq_bps;
      break;
    case CapPolicy::Dynamic:
      // Budget down to the floor, granted only while network loss alone
      // keeps the estimated MOS at or above it.
      irq = quality::mos_from_loss(s.mos, p_n) >= s.cap.mos_floor
                ? quality::irq_dynamic(s.mos, s.cap.mos_floor, s.cap.mos_floor, p_n, s.codec)
                : 0.0;
      break;
  }
  if (s.cap.codec_tolerance) {
    const double cap_loss = budget::effective_loss_cap(s.codec, p_n, s.cap.total_loss_target);
    irq = std::min(irq, budget::loss_to_rate(s.codec, cap_loss));
  }
  return irq;
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Played:
      return "played";
    case Outcome::Late:
      return "late";
    case Outcome::NetworkLost:
      return "network_lost";
  }
  return "played";
}

Outcome outcome_from_string(std::string_view text) {
  if (text == "played") return Outcome::Played;
  if (text == "late") return Outcome::Late;
  if (text == "network_lost") return Outcome::NetworkLost;
  throw DomainError("unknown packet outcome `" + std::string(text) + "`");
}

double CallTrace::realized_network_loss() const {
  return sent ? static_cast<double>(network_lost) / static_cast<double>(sent) : 0.0;
}

double CallTrace::realized_lack_loss() const {
  return sent ? static_cast<double>(steg_packets) / static_cast<double>(sent) : 0.0;
}

double CallTrace::realized_total_loss() const {
  return sent ? static_cast<double>(network_lost + late) / static_cast<double>(sent) : 0.0;
}

double CallTrace::mean_mos(const quality::MosParams& params) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : reports) {
    if (r.expected == 0) continue;
    sum += r.mos;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : quality::mos_from_loss(params, realized_total_loss());
}

void CallTrace::recount() {
  sent = played = late = network_lost = steg_packets = steg_network_lost = delivered_bits = 0;
  for (const auto& e : events) {
    ++sent;
    switch (e.outcome) {
      case Outcome::Played:
        ++played;
        break;
      case Outcome::Late:
        ++late;
        break;
      case Outcome::NetworkLost:
        ++network_lost;
        break;
    }
    if (e.carries_steg) {
      ++steg_packets;
      if (e.outcome == Outcome::NetworkLost) ++steg_network_lost;
      if (e.extracted) delivered_bits += e.steg_bits;
    }
  }
}

Outcome classify_arrival(bool arrived, double total_delay_ms, double allowance_ms) {
  if (!arrived) return Outcome::NetworkLost;
  return total_delay_ms <= allowance_ms ? Outcome::Played : Outcome::Late;
}

RtcpReport rtcp_feedback(std::span<const PacketEvent> window, const RtcpReport& previous,
                         double time_s, const quality::MosParams& params) {
  RtcpReport r = previous;
  r.time_s = time_s;
  r.expected = 0;
  r.network_lost = 0;
  r.discarded = 0;
  if (window.empty()) return r;

  double delay_sum = 0.0;
  std::uint64_t arrived = 0;
  double jitter = previous.jitter_ms;
  const PacketEvent* last_arrival = nullptr;
  for (const auto& e : window) {
    ++r.expected;
    if (e.outcome == Outcome::NetworkLost) {
      ++r.network_lost;
      continue;
    }
    if (e.outcome == Outcome::Late) ++r.discarded;
    ++arrived;
    delay_sum += e.total_delay_ms;
    if (last_arrival) {
      const double d = e.total_delay_ms - last_arrival->total_delay_ms;
      jitter += (std::abs(d) - jitter) / 16.0;
    }
    last_arrival = &e;
  }
  const auto expected = static_cast<double>(r.expected);
  r.loss_fraction = static_cast<double>(r.network_lost + r.discarded) / expected;
  r.network_loss_fraction = static_cast<double>(r.network_lost) / expected;
  r.cumulative_lost = previous.cumulative_lost + r.network_lost + r.discarded;
  r.mean_delay_ms = arrived ? delay_sum / static_cast<double>(arrived) : previous.mean_delay_ms;
  r.jitter_ms = jitter;
  r.mos = quality::mos_from_loss(params, r.loss_fraction);
  return r;
}

AdaptiveJitterBuffer::AdaptiveJitterBuffer(const JitterBufferConfig& config, double processing_ms)
    : config_(config), processing_ms_(processing_ms) {}

double AdaptiveJitterBuffer::allowance_ms() const {
  if (window_.empty()) return std::clamp(config_.size_ms, config_.min_ms, config_.max_ms);
  const double worst = *std::max_element(window_.begin(), window_.end());
  return std::clamp(processing_ms_ + worst + config_.margin_ms, config_.min_ms, config_.max_ms);
}

void AdaptiveJitterBuffer::observe_played(double network_delay_ms) {
  window_.push_back(network_delay_ms);
  if (window_.size() > config_.window) window_.pop_front();
}

double lack_delay_ms(const Scenario& s) {
  budget::DelayBudget d = s.delays;
  double required = 0.0;
  if (s.jitter_buffer.mode == budget::BufferMode::Fixed) {
    d.jitter_buffer_ms = s.jitter_buffer.size_ms;
    // The fixed-buffer bound is d_T >= t_B; one extra tick keeps a packet with
    // zero network delay from landing exactly on the deadline.
    required = budget::min_lack_delay(d, budget::BufferMode::Fixed) + budget::kStrictnessStepMs;
  } else {
    // Worst case for the sender: largest allowance, fastest network.
    d.jitter_buffer_ms = s.jitter_buffer.max_ms;
    d.network_ms = s.network.min_delay_ms();
    required = budget::min_lack_delay(d, budget::BufferMode::Adaptive);
  }
  const double lack = std::ceil(required + s.lack_extra_delay_ms);
  if (lack > s.lack_max_delay_ms) {
    throw InfeasibleScenario("scenario `" + s.name + "` needs a LACK delay of " +
                             std::to_string(lack) + " ms, above the " +
                             std::to_string(s.lack_max_delay_ms) + " ms maximum");
  }
  return lack;
}

CallTrace run_call(const Scenario& s) {
  s.validate();
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CallTrace trace;
  trace.scenario = s.name;
  trace.seed = s.seed;
  trace.steganogram_bits = s.steganogram_bits;
  if (s.fixed_duration_s) {
    trace.duration_s = *s.fixed_duration_s;
  } else {
    double u = 0.0;
    do {
      u = unit(rng);
    } while (u == 0.0);
    trace.duration_s = duration::sample_duration(s.duration_model, u);
  }

  const double d_lack = lack_delay_ms(s);
  const double processing = s.delays.processing_ms();
  const double capacity = s.codec.capacity_bps();
  const auto duration_ms = static_cast<std::int64_t>(std::llround(trace.duration_s * 1000.0));
  const auto rtcp_ms = static_cast<std::int64_t>(std::llround(s.rtcp_interval_s * 1000.0));
  const double update_s = s.cadence == UpdateCadence::Rtcp ? s.rtcp_interval_s : s.fine_step_s;
  const auto update_ms =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(update_s * 1000.0)));
  if (rtcp_ms < 1) throw DomainError("RTCP interval below the 1 ms tick");

  NetworkDelaySampler network_delay(s.network);
  AdaptiveJitterBuffer adaptive(s.jitter_buffer, processing);
  control::ControllerState state(s.steganogram_bits);
  control::RateDecision decision;

  std::int64_t next_update_ms = 0;
  std::int64_t next_rtcp_ms = rtcp_ms;
  std::size_t window_begin = 0;
  RtcpReport last_report;
  bool have_report = false;

  auto emit_reports_until = [&](std::int64_t now_ms) {
    while (next_rtcp_ms <= now_ms && next_rtcp_ms <= duration_ms) {
      const std::span<const PacketEvent> window(trace.events.data() + window_begin,
                                                trace.events.size() - window_begin);
      last_report = rtcp_feedback(window, last_report, static_cast<double>(next_rtcp_ms) / 1000.0,
                                  s.mos);
      have_report = have_report || !window.empty();
      trace.reports.push_back(last_report);
      window_begin = trace.events.size();
      next_rtcp_ms += rtcp_ms;
    }
  };

  auto update_controller_until = [&](std::int64_t now_ms) {
    while (next_update_ms <= now_ms && next_update_ms < duration_ms) {
      const double t = static_cast<double>(next_update_ms) / 1000.0;
      const double irq = quality_cap(s, have_report ? &last_report : nullptr);
      state.set_elapsed(t);
      decision = control::decide(s.controller, state, s.duration_model, t, irq);
      state.account_arrears(decision.base_bps, decision.ir_capped, irq, t,
                            static_cast<double>(update_ms) / 1000.0);
      trace.rates.push_back({t, decision.ir_raw, decision.ir_capped, irq});
      next_update_ms += update_ms;
    }
  };

  for (std::uint64_t seq = 0;; ++seq) {
    const auto send_ms = static_cast<std::int64_t>(
        std::floor(static_cast<double>(seq) * 1000.0 / s.codec.packets_per_second));
    if (send_ms >= duration_ms) break;
    emit_reports_until(send_ms);
    update_controller_until(send_ms);

    const double t = static_cast<double>(send_ms) / 1000.0;
    const double p_lack = std::clamp(decision.ir_capped / capacity, 0.0, 1.0);
    // Three draws per packet keep the random stream aligned across scenarios.
    const bool select = unit(rng) < p_lack;
    const bool lost = unit(rng) < s.network.loss_at(t);
    const double d_net = network_delay(rng);

    PacketEvent e;
    e.seq = seq;
    e.send_time_ms = send_ms;
    e.carries_steg = select && !state.exhausted();
    if (e.carries_steg) {
      e.steg_bits = std::min<std::uint64_t>(static_cast<std::uint64_t>(s.codec.payload_bits),
                                            state.remaining_bits());
      e.lack_delay_ms = d_lack;
    }
    e.network_delay_ms = d_net;
    e.total_delay_ms = processing + e.lack_delay_ms + d_net;
    e.buffer_ms = s.jitter_buffer.mode == budget::BufferMode::Fixed ? s.jitter_buffer.size_ms
                                                                     : adaptive.allowance_ms();
    e.outcome = classify_arrival(!lost, e.total_delay_ms, e.buffer_ms);

    if (e.outcome == Outcome::Played && s.jitter_buffer.mode == budget::BufferMode::Adaptive) {
      adaptive.observe_played(d_net);
    }
    // Network-lost steganogram bits stay pending and go out in a later packet.
    if (e.carries_steg && e.outcome == Outcome::Late && s.receiver_aware) {
      state.deliver(e.steg_bits);
      e.extracted = true;
    }
    trace.events.push_back(e);
  }
  emit_reports_until(duration_ms);

  trace.recount();
  return trace;
}

}  // namespace lack::sim
