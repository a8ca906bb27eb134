#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lack/keyvalue.hpp"
#include "lack/scenario.hpp"

namespace lack::experiment {

// One swept scenario key and the values it takes, e.g. `duration.shape`.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> scenarios;
  // Extra axes on top of the `sweep.<key> = v1, v2, ...` entries of each file.
  std::vector<SweepAxis> axes;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> master_seed;  // defaults to each file's `seed`
  std::size_t replications = 1;
  bool write_traces = false;  // per-call event CSVs under <output_dir>/traces
  std::optional<double> passive_threshold;  // absolute; default is mean + 2 sd
  double ks_alpha = 0.05;

  // Throws ConfigError for missing files, empty axes or zero replications.
  void validate() const;
};

// Independent per-call seed from the master seed, sweep point and replication.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t replication);

// Axes declared in the file under `sweep.`, sorted by key.
std::vector<SweepAxis> sweep_axes(const KeyValueConfig& config);

// Cartesian product of the axes; the last axis varies fastest.
std::vector<std::vector<std::pair<std::string, std::string>>> sweep_points(
    const std::vector<SweepAxis>& axes);

struct PointSummary {
  std::string label;
  std::size_t calls = 0;
  std::uint64_t sent = 0;
  std::uint64_t steg_packets = 0;
  std::uint64_t network_lost = 0;
  std::uint64_t late = 0;
  std::uint64_t delivered_bits = 0;
  std::uint64_t requested_bits = 0;
  double realized_network_loss = 0.0;
  double realized_lack_loss = 0.0;
  double lack_loss_sigma = 0.0;  // binomial standard error of realized_lack_loss
  double realized_total_loss = 0.0;
  double predicted_total_loss = 0.0;  // total_loss of the pooled network and LACK losses
  double mean_duration_s = 0.0;
  double mean_mos = 0.0;

  double passive_threshold = 0.0;
  std::size_t passive_flagged = 0;
  double passive_flag_rate = 0.0;
  std::optional<double> ks_statistic;  // absent for fixed-length calls or n < 30
  std::optional<double> ks_critical;
  bool ks_flagged = false;
};

struct ExperimentResult {
  std::vector<PointSummary> points;
  std::size_t calls = 0;
};

// Runs every sweep point of every scenario `replications` times and writes
// calls.csv, aggregate.csv and warden.csv into output_dir. Outputs depend only
// on the inputs and seeds.
ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr const char* kAggregateHeader =
    "point,calls,sent,steg_packets,network_lost,late,delivered_bits,requested_bits,"
    "realized_network_loss,realized_lack_loss,lack_loss_sigma,realized_total_loss,"
    "predicted_total_loss,mean_duration_s,mean_mos";

inline constexpr const char* kWardenHeader =
    "point,passive_threshold,passive_flagged,passive_flag_rate,ks_n,ks_statistic,ks_critical,"
    "ks_flagged";

}  // namespace lack::experiment
