#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lack/budget.hpp"
#include "lack/codec.hpp"
#include "lack/control.hpp"
#include "lack/duration.hpp"
#include "lack/keyvalue.hpp"
#include "lack/quality.hpp"

namespace lack::sim {

enum class JitterModel { Uniform, TruncatedNormal };

struct LossSegment {
  double start_s;
  double loss;
};

struct NetworkConfig {
  std::vector<LossSegment> loss_schedule{{0.0, 0.0}};  // piecewise-constant p_N(t)
  double base_delay_ms = 30.0;
  double jitter_ms = 10.0;  // bound of the zero-mean jitter term
  JitterModel jitter_model = JitterModel::Uniform;

  double loss_at(double t) const;
  double min_delay_ms() const noexcept { return base_delay_ms - jitter_ms; }
  double max_delay_ms() const noexcept { return base_delay_ms + jitter_ms; }
};

struct JitterBufferConfig {
  budget::BufferMode mode = budget::BufferMode::Fixed;
  double size_ms = 100.0;  // fixed size, and the adaptive starting point
  // Adaptive playout allowance: processing + max network delay over the last
  // `window` played packets + margin, clamped to [min_ms, max_ms].
  std::size_t window = 50;
  double margin_ms = 10.0;
  double min_ms = 40.0;
  double max_ms = 200.0;
};

enum class CapPolicy { None, Static, Dynamic };

struct CapConfig {
  CapPolicy policy = CapPolicy::None;
  double static_irq_bps = 0.0;  // resolved at load time for Static
  double mos_floor = 3.5;       // Dynamic
  bool codec_tolerance = true;  // also cap by the codec's tolerable loss
  double total_loss_target = 1.0;
};

enum class UpdateCadence { Rtcp, Fine };

struct Scenario {
  std::string name = "scenario";
  CodecProfile codec = CodecProfile::g711();
  NetworkConfig network;
  budget::DelayBudget delays;  // processing components; buffer and LACK terms are derived
  JitterBufferConfig jitter_buffer;

  // Distribution the controller believes in; also the sampling model unless
  // the call length is fixed.
  duration::WeibullModel duration_model = duration::calibrate_scale(1.0, 117.31);
  std::optional<double> fixed_duration_s;

  control::ControllerConfig controller;
  UpdateCadence cadence = UpdateCadence::Rtcp;
  double fine_step_s = 0.1;
  CapConfig cap;
  quality::MosParams mos;

  std::uint64_t steganogram_bits = 1000;
  bool receiver_aware = true;
  double rtcp_interval_s = 5.0;
  double lack_extra_delay_ms = 0.0;
  double lack_max_delay_ms = 1000.0;
  std::uint64_t seed = 0;

  // Throws DomainError on an invalid combination.
  void validate() const;

  // Reads a scenario from configuration keys. `seed` is mandatory. Unknown
  // keys are rejected unless they start with one of `ignored_prefixes`.
  static Scenario from_config(const KeyValueConfig& config,
                              const std::set<std::string>& ignored_prefixes = {"sweep."});
};

}  // namespace lack::sim
