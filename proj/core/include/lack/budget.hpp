#pragma once

#include "lack/codec.hpp"

namespace lack::budget {

// 1 - (1 - p_N)(1 - p_L): loss seen by the decoder when network and LACK
// losses are independent.
double total_loss(double network_loss, double lack_loss);

// Largest LACK loss keeping total loss at `total_target`, clamped at zero.
// Throws DomainError when network_loss == 1.
double admissible_lack_loss(double total_target, double network_loss);

// Delay components along the path of one RTP packet, all in milliseconds.
struct DelayBudget {
  double dsp_ms = 10.0;            // d_D, typically 2-20 ms
  double coding_ms = 5.0;          // d_K, typically under 10 ms
  double encapsulation_ms = 25.0;  // d_E, typically 20-30 ms
  double jitter_buffer_ms = 100.0; // t_B, usually 60-120 ms
  double network_ms = 0.0;         // d_N
  double lack_ms = 0.0;            // d_L

  void validate() const;
  double processing_ms() const noexcept { return dsp_ms + coding_ms + encapsulation_ms; }
  double transmitter_exit_ms() const noexcept { return processing_ms() + lack_ms; }
};

enum class BufferMode { Fixed, Adaptive };

// Granularity that turns the adaptive-buffer inequality into a strict one.
inline constexpr double kStrictnessStepMs = 1.0;

// Smallest LACK delay that makes the packet miss its playout deadline.
// Fixed buffers ignore network delay; adaptive buffers subtract it and add
// `step_ms` so the total strictly exceeds the buffer.
double min_lack_delay(const DelayBudget& delays, BufferMode mode,
                      double step_ms = kStrictnessStepMs);

// ir = p_L * N_p * P_p and its inverse. Throws DomainError for negative input
// or a rate above the codec's capacity.
double rate_to_loss(const CodecProfile& codec, double rate_bps);
double loss_to_rate(const CodecProfile& codec, double lack_loss);

// Tighter of the codec-tolerance budget and the quality-derived total-loss budget.
double effective_loss_cap(const CodecProfile& codec, double network_loss, double quality_total_loss);

}  // namespace lack::budget
