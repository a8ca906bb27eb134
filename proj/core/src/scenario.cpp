#include "lack/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "lack/error.hpp"

namespace lack::sim {
namespace {

double parse_number(const std::string& key, const std::string& text) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected a number, got `" + text + "`");
  }
  return out;
}

CodecProfile read_codec(const KeyValueConfig& cfg) {
  const std::string name = cfg.get_string("codec.name", "G.711");
  const bool plc = cfg.get_bool("codec.plc", false);
  CodecProfile codec;
  if (name == "G.711") {
    codec = CodecProfile::g711(plc);
  } else if (name == "G.729A" || name == "G.723.1") {
    // No published framing for these codecs: both values are required.
    const double pps = cfg.get_double("codec.packets_per_second");
    const double bits = cfg.get_double("codec.payload_bits");
    codec = name == "G.729A" ? CodecProfile::g729a(pps, bits) : CodecProfile::g723_1(pps, bits);
  } else {
    codec.name = name;
    codec.packets_per_second = cfg.get_double("codec.packets_per_second");
    codec.payload_bits = cfg.get_double("codec.payload_bits");
    codec.loss_tolerance = cfg.get_double("codec.loss_tolerance");
  }
  codec.packets_per_second = cfg.get_double("codec.packets_per_second", codec.packets_per_second);
  codec.payload_bits = cfg.get_double("codec.payload_bits", codec.payload_bits);
  codec.loss_tolerance = cfg.get_double("codec.loss_tolerance", codec.loss_tolerance);
  codec.plc_loss_tolerance =
      cfg.get_double("codec.plc_loss_tolerance",
                     codec.plc_loss_tolerance > 0.0 ? codec.plc_loss_tolerance
                                                    : codec.loss_tolerance);
  codec.plc_enabled = plc;
  try {
    codec.validate();
  } catch (const DomainError& e) {
    throw ConfigError("codec", e.what());
  }
  return codec;
}

NetworkConfig read_network(const KeyValueConfig& cfg) {
  NetworkConfig net;
  if (cfg.has("network.loss_schedule")) {
    if (cfg.has("network.loss")) {
      throw ConfigError("network.loss", "give either network.loss or network.loss_schedule");
    }
    net.loss_schedule.clear();
    for (const auto& item : cfg.get_list("network.loss_schedule")) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("network.loss_schedule", "expected `start_s:loss` pairs");
      }
      net.loss_schedule.push_back({parse_number("network.loss_schedule", item.substr(0, colon)),
                                   parse_number("network.loss_schedule", item.substr(colon + 1))});
    }
  } else {
    net.loss_schedule = {{0.0, cfg.get_double("network.loss", 0.0)}};
  }
  net.base_delay_ms = cfg.get_double("network.delay", net.base_delay_ms);
  net.jitter_ms = cfg.get_double("network.jitter", net.jitter_ms);
  const std::string model = cfg.get_string("network.jitter_model", "uniform");
  if (model == "uniform") {
    net.jitter_model = JitterModel::Uniform;
  } else if (model == "normal") {
    net.jitter_model = JitterModel::TruncatedNormal;
  } else {
    throw ConfigError("network.jitter_model", "expected `uniform` or `normal`");
  }
  return net;
}

JitterBufferConfig read_buffer(const KeyValueConfig& cfg) {
  JitterBufferConfig jb;
  const std::string mode = cfg.get_string("jitter_buffer.mode", "fixed");
  if (mode == "fixed") {
    jb.mode = budget::BufferMode::Fixed;
  } else if (mode == "adaptive") {
    jb.mode = budget::BufferMode::Adaptive;
  } else {
    throw ConfigError("jitter_buffer.mode", "expected `fixed` or `adaptive`");
  }
  jb.size_ms = cfg.get_double("jitter_buffer.size", jb.size_ms);
  jb.window = cfg.get_uint("jitter_buffer.window", jb.window);
  jb.margin_ms = cfg.get_double("jitter_buffer.margin", jb.margin_ms);
  jb.min_ms = cfg.get_double("jitter_buffer.min", jb.min_ms);
  jb.max_ms = cfg.get_double("jitter_buffer.max", jb.max_ms);
  return jb;
}

duration::WeibullModel read_duration_model(const KeyValueConfig& cfg) {
  const double shape = cfg.get_double("duration.shape", 1.0);
  const bool has_scale = cfg.has("duration.scale");
  const bool has_mean = cfg.has("duration.mean");
  if (has_scale && has_mean) {
    throw ConfigError("duration.mean", "give either duration.scale or duration.mean");
  }
  try {
    if (has_scale) return duration::WeibullModel(shape, cfg.get_double("duration.scale"));
    return duration::calibrate_scale(shape, cfg.get_double("duration.mean", 117.31));
  } catch (const DomainError& e) {
    throw ConfigError("duration", e.what());
  }
}

control::ControllerConfig read_controller(const KeyValueConfig& cfg, const CodecProfile& codec,
                                          std::uint64_t bits,
                                          const duration::WeibullModel& model) {
  control::ControllerConfig c;
  const std::string mode = cfg.get_string("controller.mode", "residual_mean");
  if (mode == "constant") {
    c.mode = control::Mode::Constant;
    if (cfg.has("controller.rate") && cfg.has("controller.target_loss")) {
      throw ConfigError("controller.rate", "give either controller.rate or controller.target_loss");
    }
    if (cfg.has("controller.rate")) {
      c.constant_rate_bps = cfg.get_double("controller.rate");
    } else if (cfg.has("controller.target_loss")) {
      c.constant_rate_bps = cfg.get_double("controller.target_loss") * codec.capacity_bps();
    } else {
      // S / E(D): spread the steganogram over the expected call.
      c.constant_rate_bps = control::constant_rate(static_cast<double>(bits),
                                                   duration::weibull_stats(model).mean);
    }
  } else if (mode == "residual_mean") {
    c.mode = control::Mode::ResidualMean;
  } else if (mode == "quantile") {
    c.mode = control::Mode::Quantile;
  } else {
    throw ConfigError("controller.mode", "expected `constant`, `residual_mean` or `quantile`");
  }
  c.xi = cfg.get_double("controller.xi", c.xi);
  const std::string denom = cfg.get_string("controller.denominator", "mean_residual");
  if (denom == "mean_residual") {
    c.denominator = control::Denominator::MeanResidual;
  } else if (denom == "full_conditional") {
    c.denominator = control::Denominator::FullConditional;
  } else {
    throw ConfigError("controller.denominator", "expected `mean_residual` or `full_conditional`");
  }
  c.compensate_arrears = cfg.get_bool("controller.arrears", true);
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError("controller", e.what());
  }
  return c;
}

}  // namespace

double NetworkConfig::loss_at(double t) const {
  double loss = loss_schedule.front().loss;
  for (const auto& seg : loss_schedule) {
    if (seg.start_s <= t) loss = seg.loss;
  }
  return loss;
}

void Scenario::validate() const {
  codec.validate();
  delays.validate();
  controller.validate();
  mos.validate();
  if (network.loss_schedule.empty()) throw DomainError("network loss schedule is empty");
  for (std::size_t i = 0; i < network.loss_schedule.size(); ++i) {
    const auto& seg = network.loss_schedule[i];
    if (!(seg.loss >= 0.0 && seg.loss < 1.0)) throw DomainError("network loss must lie in [0, 1)");
    if (i == 0 ? seg.start_s != 0.0 : seg.start_s <= network.loss_schedule[i - 1].start_s) {
      throw DomainError("loss schedule must start at 0 s and increase");
    }
  }
  if (!(network.jitter_ms >= 0.0) || !(network.min_delay_ms() >= 0.0)) {
    throw DomainError("network delay jitter must lie within [0, base delay]");
  }
  if (!(jitter_buffer.size_ms > 0.0)) throw DomainError("jitter buffer size must be > 0");
  if (jitter_buffer.mode == budget::BufferMode::Adaptive &&
      (jitter_buffer.window == 0 || !(jitter_buffer.min_ms <= jitter_buffer.max_ms))) {
    throw DomainError("adaptive jitter buffer needs window > 0 and min <= max");
  }
  if (fixed_duration_s && !(*fixed_duration_s > 0.0)) {
    throw DomainError("fixed call duration must be > 0");
  }
  if (!(rtcp_interval_s > 0.0)) throw DomainError("RTCP interval must be > 0");
  if (!(fine_step_s > 0.0)) throw DomainError("controller step must be > 0");
  if (!(lack_extra_delay_ms >= 0.0)) throw DomainError("extra LACK delay must be >= 0");
  if (!(cap.static_irq_bps >= 0.0)) throw DomainError("static cap must be >= 0");
  if (!(cap.total_loss_target >= 0.0 && cap.total_loss_target <= 1.0)) {
    throw DomainError("total loss target must lie in [0, 1]");
  }
}

Scenario Scenario::from_config(const KeyValueConfig& cfg,
                               const std::set<std::string>& ignored_prefixes) {
  Scenario s;
  s.name = cfg.get_string("name", s.name);
  s.seed = cfg.get_uint("seed");
  s.steganogram_bits = cfg.get_uint("steganogram_bits", s.steganogram_bits);
  s.receiver_aware = cfg.get_bool("receiver_aware", s.receiver_aware);
  s.rtcp_interval_s = cfg.get_double("rtcp_interval", s.rtcp_interval_s);

  s.codec = read_codec(cfg);
  s.network = read_network(cfg);
  s.delays.dsp_ms = cfg.get_double("delays.dsp", s.delays.dsp_ms);
  s.delays.coding_ms = cfg.get_double("delays.coding", s.delays.coding_ms);
  s.delays.encapsulation_ms = cfg.get_double("delays.encapsulation", s.delays.encapsulation_ms);
  s.jitter_buffer = read_buffer(cfg);
  s.delays.jitter_buffer_ms = s.jitter_buffer.size_ms;

  s.duration_model = read_duration_model(cfg);
  if (cfg.has("duration.fixed")) s.fixed_duration_s = cfg.get_double("duration.fixed");

  s.controller = read_controller(cfg, s.codec, s.steganogram_bits, s.duration_model);
  const std::string cadence = cfg.get_string("controller.update", "rtcp");
  if (cadence == "rtcp") {
    s.cadence = UpdateCadence::Rtcp;
  } else if (cadence == "fine") {
    s.cadence = UpdateCadence::Fine;
  } else {
    throw ConfigError("controller.update", "expected `rtcp` or `fine`");
  }
  s.fine_step_s = cfg.get_double("controller.step", s.fine_step_s);

  s.mos.alpha = cfg.get_double("mos.alpha", s.mos.alpha);
  s.mos.beta = cfg.get_double("mos.beta", s.mos.beta);
  s.mos.gamma = cfg.get_double("mos.gamma", s.mos.gamma);

  const std::string policy = cfg.get_string("cap.policy", "none");
  if (policy == "none") {
    s.cap.policy = CapPolicy::None;
  } else if (policy == "static") {
    s.cap.policy = CapPolicy::Static;
    if (cfg.has("cap.irq") == cfg.has("cap.histogram")) {
      throw ConfigError("cap.irq", "static cap needs exactly one of cap.irq or cap.histogram");
    }
    if (cfg.has("cap.irq")) {
      s.cap.static_irq_bps = cfg.get_double("cap.irq");
    } else {
      std::filesystem::path path = cfg.get_string("cap.histogram");
      if (path.is_relative()) path = cfg.base_dir() / path;
      try {
        const auto hist = quality::MosHistogram::from_csv(path);
        const double p_n = cfg.get_double("cap.network_loss", s.network.loss_at(0.0));
        s.cap.static_irq_bps =
            quality::irq_static(hist, cfg.get_double("cap.eta"), s.mos, p_n, s.codec).irq_bps;
      } catch (const DomainError& e) {
        throw ConfigError("cap.histogram", e.what());
      }
    }
  } else if (policy == "dynamic") {
    s.cap.policy = CapPolicy::Dynamic;
    s.cap.mos_floor = cfg.get_double("cap.mos_floor");
  } else {
    throw ConfigError("cap.policy", "expected `none`, `static` or `dynamic`");
  }
  s.cap.codec_tolerance = cfg.get_bool("cap.codec_tolerance", s.cap.codec_tolerance);
  s.cap.total_loss_target = cfg.get_double("cap.total_loss", s.cap.total_loss_target);

  s.lack_extra_delay_ms = cfg.get_double("lack.extra_delay", s.lack_extra_delay_ms);
  s.lack_max_delay_ms = cfg.get_double("lack.max_delay", s.lack_max_delay_ms);

  cfg.reject_unused(ignored_prefixes);
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError("", e.what());
  }
  return s;
}

}  // namespace lack::sim
