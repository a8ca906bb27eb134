#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string_view>
#include <vector>

#include "lack/scenario.hpp"

namespace lack::sim {

enum class Outcome { Played, Late, NetworkLost };

std::string_view to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view text);

struct PacketEvent {
  std::uint64_t seq = 0;
  std::int64_t send_time_ms = 0;
  bool carries_steg = false;
  std::uint64_t steg_bits = 0;     // steganogram bits in the payload
  double lack_delay_ms = 0.0;      // d_L, zero for ordinary packets
  double network_delay_ms = 0.0;   // d_N
  double total_delay_ms = 0.0;     // processing + d_L + d_N
  double buffer_ms = 0.0;          // playout allowance in force for this packet
  Outcome outcome = Outcome::Played;
  bool extracted = false;          // an aware receiver recovered the steganogram bits

  friend bool operator==(const PacketEvent&, const PacketEvent&) = default;
};

struct RtcpReport {
  double time_s = 0.0;
  std::uint64_t expected = 0;        // packets sent in the window
  std::uint64_t network_lost = 0;    // never arrived
  std::uint64_t discarded = 0;       // arrived after the playout deadline
  double loss_fraction = 0.0;        // (network_lost + discarded) / expected
  double network_loss_fraction = 0.0;
  std::uint64_t cumulative_lost = 0;  // network_lost + discarded since call start
  double mean_delay_ms = 0.0;         // over packets that arrived
  double jitter_ms = 0.0;             // RFC 3550 interarrival jitter estimate
  double mos = 0.0;                   // MOS of the window's loss fraction

  friend bool operator==(const RtcpReport&, const RtcpReport&) = default;
};

struct RateSample {
  double time_s;
  double ir_raw;
  double ir_capped;
  double irq;

  friend bool operator==(const RateSample&, const RateSample&) = default;
};

struct CallTrace {
  std::string scenario;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  std::uint64_t steganogram_bits = 0;
  std::vector<PacketEvent> events;
  std::vector<RtcpReport> reports;
  std::vector<RateSample> rates;

  std::uint64_t sent = 0;
  std::uint64_t played = 0;
  std::uint64_t late = 0;
  std::uint64_t network_lost = 0;
  std::uint64_t steg_packets = 0;
  std::uint64_t steg_network_lost = 0;
  std::uint64_t delivered_bits = 0;

  double realized_network_loss() const;
  double realized_lack_loss() const;
  double realized_total_loss() const;
  // Mean of the per-report MOS values; MOS of the realized loss when there are none.
  double mean_mos(const quality::MosParams& params) const;

  // Recomputes the tallies, including delivered bits, from `events`.
  void recount();

  friend bool operator==(const CallTrace&, const CallTrace&) = default;
};

// Played when the packet arrived within the playout allowance, else Late.
Outcome classify_arrival(bool arrived, double total_delay_ms, double allowance_ms);

// Summarizes the packets of one report window. An empty window repeats the
// previous report's statistics with a zero packet count.
RtcpReport rtcp_feedback(std::span<const PacketEvent> window, const RtcpReport& previous,
                         double time_s, const quality::MosParams& params);

// Receiver-side adaptive playout allowance (see JitterBufferConfig).
class AdaptiveJitterBuffer {
 public:
  AdaptiveJitterBuffer(const JitterBufferConfig& config, double processing_ms);

  double allowance_ms() const;
  void observe_played(double network_delay_ms);

 private:
  JitterBufferConfig config_;
  double processing_ms_;
  std::deque<double> window_;
};

// LACK delay d_L the transmitter applies to steganogram packets. Throws
// InfeasibleScenario when it exceeds scenario.lack_max_delay_ms.
double lack_delay_ms(const Scenario& scenario);

// One seeded call. Identical scenarios produce identical traces.
CallTrace run_call(const Scenario& scenario);

}  // namespace lack::sim
