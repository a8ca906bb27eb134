#include "lack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lack/budget.hpp"
#include "lack/csv.hpp"
#include "lack/error.hpp"
#include "lack/sim.hpp"
#include "lack/trace_io.hpp"
#include "lack/warden.hpp"

namespace lack::experiment {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kMinKsSample = 30;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct PlannedPoint {
  std::string label;
  sim::Scenario scenario;
  std::uint64_t master;
};

std::string point_label(const std::string& name,
                        const std::vector<std::pair<std::string, std::string>>& assignment) {
  std::string label = name;
  if (assignment.empty()) return label;
  label += '[';
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i) label += ';';
    label += assignment[i].first + '=' + assignment[i].second;
  }
  return label + ']';
}

std::vector<PlannedPoint> plan(const ExperimentConfig& config) {
  std::vector<PlannedPoint> planned;
  for (const auto& path : config.scenarios) {
    const KeyValueConfig base = KeyValueConfig::load(path);
    std::vector<SweepAxis> axes = sweep_axes(base);
    for (const auto& extra : config.axes) {
      std::erase_if(axes, [&](const SweepAxis& a) { return a.key == extra.key; });
      axes.push_back(extra);
    }
    std::sort(axes.begin(), axes.end(),
              [](const SweepAxis& a, const SweepAxis& b) { return a.key < b.key; });
    for (const auto& assignment : sweep_points(axes)) {
      KeyValueConfig cfg = base;
      for (const auto& [key, value] : assignment) cfg.set(key, value);
      sim::Scenario s;
      try {
        s = sim::Scenario::from_config(cfg);
        sim::lack_delay_ms(s);
      } catch (const DomainError& e) {
        throw ConfigError("", path.string() + ": " + e.what());
      } catch (const ConfigError& e) {
        const std::string where = e.key().empty() ? "" : e.key() + ": ";
        throw ConfigError(e.key(), path.string() + ": " + where + e.message(), false);
      }
      planned.push_back({point_label(s.name, assignment), s, config.master_seed.value_or(s.seed)});
    }
  }
  return planned;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? csv::number(*v) : std::string();
}

void open_output(std::ofstream& out, const fs::path& path) {
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scenarios.empty()) throw ConfigError("scenario", "at least one scenario file is required");
  for (const auto& p : scenarios) {
    if (!fs::is_regular_file(p)) throw ConfigError("scenario", "no such file: " + p.string());
  }
  for (const auto& a : axes) {
    if (a.key.empty()) throw ConfigError("sweep", "empty sweep key");
    if (a.values.empty()) throw ConfigError("sweep." + a.key, "sweep axis has no values");
  }
  if (output_dir.empty()) throw ConfigError("out", "an output directory is required");
  if (replications == 0) throw ConfigError("replications", "must be at least 1");
  if (!(ks_alpha > 0.0 && ks_alpha < 1.0)) throw ConfigError("ks_alpha", "must lie in (0, 1)");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t replication) {
  return splitmix64(splitmix64(splitmix64(master) ^ point) ^ replication);
}

std::vector<SweepAxis> sweep_axes(const KeyValueConfig& config) {
  std::vector<SweepAxis> axes;
  const std::string prefix = "sweep.";
  for (const auto& key : config.keys_with_prefix(prefix)) {
    SweepAxis axis{key.substr(prefix.size()), config.get_list(key)};
    if (axis.key.empty()) throw ConfigError(key, "empty sweep key");
    if (axis.values.empty()) throw ConfigError(key, "sweep axis has no values");
    axes.push_back(std::move(axis));
  }
  return axes;
}

std::vector<std::vector<std::pair<std::string, std::string>>> sweep_points(
    const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        auto q = p;
        q.emplace_back(axis.key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::vector<PlannedPoint> planned = plan(config);

  fs::create_directories(config.output_dir);
  if (config.write_traces) fs::create_directories(config.output_dir / "traces");
  std::ofstream calls_csv;
  std::ofstream aggregate_csv;
  std::ofstream warden_csv;
  open_output(calls_csv, config.output_dir / "calls.csv");
  open_output(aggregate_csv, config.output_dir / "aggregate.csv");
  open_output(warden_csv, config.output_dir / "warden.csv");
  calls_csv << "point,replication," << sim::kSummaryHeader << '\n';
  aggregate_csv << kAggregateHeader << '\n';
  warden_csv << kWardenHeader << '\n';

  ExperimentResult result;
  for (std::size_t p = 0; p < planned.size(); ++p) {
    const PlannedPoint& point = planned[p];
    PointSummary sum;
    sum.label = point.label;
    std::vector<double> durations;
    std::vector<double> network_losses;
    std::vector<double> observed_losses;
    double mos_sum = 0.0;

    for (std::size_t r = 0; r < config.replications; ++r) {
      sim::Scenario s = point.scenario;
      s.seed = derive_seed(point.master, p, r);
      const sim::CallTrace trace = sim::run_call(s);
      calls_csv << csv::join({point.label, std::to_string(r)}) << ','
                << sim::summary_row(trace, s.mos) << '\n';
      if (config.write_traces) {
        std::ofstream events;
        open_output(events, config.output_dir / "traces" /
                                ("p" + std::to_string(p) + "_r" + std::to_string(r) + ".csv"));
        sim::write_events_csv(trace, events);
      }
      ++sum.calls;
      sum.sent += trace.sent;
      sum.steg_packets += trace.steg_packets;
      sum.network_lost += trace.network_lost;
      sum.late += trace.late;
      sum.delivered_bits += trace.delivered_bits;
      sum.requested_bits += trace.steganogram_bits;
      mos_sum += trace.mean_mos(s.mos);
      durations.push_back(trace.duration_s);
      network_losses.push_back(trace.realized_network_loss());
      observed_losses.push_back(warden::observed_loss(trace));
    }

    const auto n = static_cast<double>(sum.calls);
    const auto sent = static_cast<double>(sum.sent);
    if (sum.sent) {
      sum.realized_network_loss = static_cast<double>(sum.network_lost) / sent;
      sum.realized_lack_loss = static_cast<double>(sum.steg_packets) / sent;
      sum.lack_loss_sigma =
          std::sqrt(sum.realized_lack_loss * (1.0 - sum.realized_lack_loss) / sent);
      sum.realized_total_loss = static_cast<double>(sum.network_lost + sum.late) / sent;
      sum.predicted_total_loss =
          budget::total_loss(sum.realized_network_loss, sum.realized_lack_loss);
    }
    double duration_sum = 0.0;
    for (double d : durations) duration_sum += d;
    sum.mean_duration_s = duration_sum / n;
    sum.mean_mos = mos_sum / n;

    // The reference population is the same calls with LACK removed, whose
    // observed loss is the network loss alone.
    if (config.passive_threshold) {
      sum.passive_threshold = *config.passive_threshold;
    } else if (network_losses.size() >= 2) {
      sum.passive_threshold = warden::population_threshold(network_losses);
    } else {
      sum.passive_threshold = network_losses.front();
    }
    const warden::PassiveScan scan = warden::passive_loss_scan(observed_losses, sum.passive_threshold);
    sum.passive_flagged = scan.flagged;
    sum.passive_flag_rate = scan.flag_rate;

    if (!point.scenario.fixed_duration_s && durations.size() >= kMinKsSample) {
      const warden::WardenReport ks = warden::duration_distribution_test(
          durations, point.scenario.duration_model, config.ks_alpha);
      sum.ks_statistic = ks.statistic;
      sum.ks_critical = ks.threshold;
      sum.ks_flagged = ks.flagged;
    }

    aggregate_csv << csv::join({sum.label, std::to_string(sum.calls), std::to_string(sum.sent),
                                std::to_string(sum.steg_packets), std::to_string(sum.network_lost),
                                std::to_string(sum.late), std::to_string(sum.delivered_bits),
                                std::to_string(sum.requested_bits),
                                csv::number(sum.realized_network_loss),
                                csv::number(sum.realized_lack_loss),
                                csv::number(sum.lack_loss_sigma),
                                csv::number(sum.realized_total_loss),
                                csv::number(sum.predicted_total_loss),
                                csv::number(sum.mean_duration_s), csv::number(sum.mean_mos)})
                  << '\n';
    warden_csv << csv::join({sum.label, csv::number(sum.passive_threshold),
                             std::to_string(sum.passive_flagged),
                             csv::number(sum.passive_flag_rate),
                             sum.ks_statistic ? std::to_string(durations.size()) : std::string(),
                             optional_number(sum.ks_statistic), optional_number(sum.ks_critical),
                             sum.ks_statistic ? (sum.ks_flagged ? "1" : "0") : std::string()})
               << '\n';
    result.calls += sum.calls;
    result.points.push_back(std::move(sum));
  }
  if (!calls_csv || !aggregate_csv || !warden_csv) {
    throw std::runtime_error("write error in " + config.output_dir.string());
  }
  return result;
}

}  // namespace lack::experiment
