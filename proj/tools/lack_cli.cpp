// lack: scenario runner, figure datasets, trace analysis and self-test.
//
//   lack run      --scenario FILE... --out DIR [--seed N] [--replications N]
//                 [--sweep KEY=V1,V2...] [--traces] [--passive-threshold P]
//   lack figure   --figure-id ID [--out FILE]      (ID may be `all` with --out DIR)
//   lack warden   --trace FILE... [--threshold P | --baseline FILE...]
//                 [--assumed-buffer MS] [--calls FILE --shape K --mean S [--alpha A]]
//   lack selftest
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "acceptance.hpp"
#include "lack/csv.hpp"
#include "lack/duration.hpp"
#include "lack/error.hpp"
#include "lack/experiment.hpp"
#include "lack/figures.hpp"
#include "lack/trace_io.hpp"
#include "lack/warden.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

namespace fs = std::filesystem;

struct RunOptions {
  std::vector<std::string> scenarios;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t replications = 1;
  std::vector<std::string> sweeps;
  bool traces = false;
  std::optional<double> passive_threshold;
};

struct FigureOptions {
  std::string id;
  std::string out;
};

struct WardenOptions {
  std::vector<std::string> traces;
  std::vector<std::string> baseline;
  std::optional<double> threshold;
  std::optional<double> assumed_buffer;
  std::string calls;
  double shape = 1.0;
  double mean = lack::figures::kReferenceMean;
  double alpha = 0.05;
};

lack::experiment::SweepAxis parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw lack::ConfigError("sweep", "expected KEY=V1,V2,..., got `" + text + "`");
  }
  lack::experiment::SweepAxis axis{text.substr(0, eq), {}};
  for (auto& v : lack::csv::split(text.substr(eq + 1))) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    if (b != std::string::npos) axis.values.push_back(v.substr(b, e - b + 1));
  }
  if (axis.values.empty()) throw lack::ConfigError("sweep." + axis.key, "sweep axis has no values");
  return axis;
}

int run(const RunOptions& o) {
  lack::experiment::ExperimentConfig config;
  for (const auto& s : o.scenarios) config.scenarios.emplace_back(s);
  for (const auto& s : o.sweeps) config.axes.push_back(parse_sweep(s));
  config.output_dir = o.out;
  config.master_seed = o.seed;
  config.replications = o.replications;
  config.write_traces = o.traces;
  config.passive_threshold = o.passive_threshold;
  const auto result = lack::experiment::run_experiment(config);
  std::cerr << "ran " << result.calls << " calls over " << result.points.size()
            << " sweep points into " << o.out << '\n';
  return kOk;
}

void write_one_figure(const std::string& id, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  lack::figures::write_figure(id, out);
}

int figure(const FigureOptions& o) {
  if (o.id == "all") {
    if (o.out.empty()) throw lack::ConfigError("out", "`--figure-id all` needs an output directory");
    fs::create_directories(o.out);
    for (const auto& id : lack::figures::supported_ids()) {
      write_one_figure(id, fs::path(o.out) / ("figure_" + id + ".csv"));
    }
    return kOk;
  }
  const auto ids = lack::figures::supported_ids();
  if (std::find(ids.begin(), ids.end(), o.id) == ids.end()) {
    throw lack::ConfigError("figure-id", "unknown figure id `" + o.id + "`");
  }
  if (o.out.empty()) {
    lack::figures::write_figure(o.id, std::cout);
  } else {
    write_one_figure(o.id, o.out);
  }
  return kOk;
}

std::vector<double> read_durations(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw lack::ConfigError("calls", "cannot open " + path.string());
  std::string line;
  if (!lack::csv::next_line(in, line)) throw lack::ConfigError("calls", "empty file");
  const auto header = lack::csv::split(line);
  const auto it = std::find(header.begin(), header.end(), "duration_s");
  if (it == header.end()) throw lack::ConfigError("calls", "no duration_s column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  while (lack::csv::next_line(in, line)) {
    const auto f = lack::csv::split(line);
    if (f.size() != header.size()) throw lack::DomainError("ragged row in " + path.string());
    out.push_back(lack::csv::to_double(f[col]));
  }
  return out;
}

int warden(const WardenOptions& o) {
  if (o.traces.empty() && o.calls.empty()) {
    throw lack::ConfigError("trace", "give --trace files, a --calls file, or both");
  }
  if (!o.traces.empty()) {
    std::vector<lack::sim::CallTrace> traces;
    for (const auto& t : o.traces) traces.push_back(lack::sim::read_events_csv(fs::path(t)));
    double threshold = 0.0;
    if (o.threshold) {
      threshold = *o.threshold;
    } else {
      if (o.baseline.size() < 2) {
        throw lack::ConfigError("threshold", "give --threshold or at least two --baseline traces");
      }
      std::vector<double> reference;
      for (const auto& b : o.baseline) {
        reference.push_back(lack::warden::observed_loss(lack::sim::read_events_csv(fs::path(b))));
      }
      threshold = lack::warden::population_threshold(reference);
    }
    const auto scan = lack::warden::passive_loss_scan(traces, threshold);
    std::cout << "trace,observed_loss,passive_threshold,passive_flagged";
    if (o.assumed_buffer) {
      std::cout << ",assumed_buffer_ms,max_delay_ms,packets_erased,steg_bits_destroyed,"
                   "legit_destroyed,mos_penalty,delivered_bits_after";
    }
    std::cout << '\n';
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const auto& r = scan.calls[i];
      std::cout << lack::csv::join({traces[i].scenario, lack::csv::number(r.statistic),
                                    lack::csv::number(r.threshold), r.flagged ? "1" : "0"});
      if (o.assumed_buffer) {
        const auto active = lack::warden::active_filter(traces[i], *o.assumed_buffer);
        const auto& a = active.report;
        std::cout << ',' << lack::csv::join({lack::csv::number(a.threshold),
                                             lack::csv::number(a.statistic),
                                             std::to_string(a.packets_erased),
                                             std::to_string(a.steg_bits_destroyed),
                                             std::to_string(a.legit_destroyed),
                                             lack::csv::number(a.mos_penalty),
                                             std::to_string(active.filtered.delivered_bits)});
      }
      std::cout << '\n';
    }
  }
  if (!o.calls.empty()) {
    const auto durations = read_durations(o.calls);
    const auto model = lack::duration::calibrate_scale(o.shape, o.mean);
    const auto r = lack::warden::duration_distribution_test(durations, model, o.alpha);
    std::cout << "ks_n,ks_statistic,ks_critical,ks_flagged\n"
              << lack::csv::join({std::to_string(durations.size()), lack::csv::number(r.statistic),
                                  lack::csv::number(r.threshold), r.flagged ? "1" : "0"})
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LACK steganography simulator and analysis tool"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario sweep and write CSV artifacts");
  run_cmd->add_option("--scenario", run_opts.scenarios, "Scenario file(s)")->required()->expected(1, -1);
  run_cmd->add_option("--out", run_opts.out, "Output directory")->required();
  run_cmd->add_option("--seed", run_opts.seed, "Master seed (default: the scenario's seed)");
  run_cmd->add_option("--replications", run_opts.replications, "Calls per sweep point")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--sweep", run_opts.sweeps, "Extra sweep axis KEY=V1,V2,...");
  run_cmd->add_flag("--traces", run_opts.traces, "Also write per-call packet-event CSVs");
  run_cmd->add_option("--passive-threshold", run_opts.passive_threshold,
                      "Absolute loss threshold for the passive scan");

  FigureOptions fig_opts;
  auto* fig_cmd = app.add_subcommand("figure", "Write the dataset behind a figure");
  fig_cmd->add_option("--figure-id", fig_opts.id, "Figure id, or `all`")->required();
  fig_cmd->add_option("--out", fig_opts.out, "Output file (directory for `all`); default stdout");

  WardenOptions w_opts;
  auto* w_cmd = app.add_subcommand("warden", "Run the wardens over packet-event traces");
  w_cmd->add_option("--trace", w_opts.traces, "Packet-event CSV(s) to analyze");
  w_cmd->add_option("--baseline", w_opts.baseline, "Non-LACK traces for the mean + 2 sd threshold");
  w_cmd->add_option("--threshold", w_opts.threshold, "Absolute passive threshold");
  w_cmd->add_option("--assumed-buffer", w_opts.assumed_buffer, "Active filter buffer in ms");
  w_cmd->add_option("--calls", w_opts.calls, "calls.csv whose durations are KS-tested");
  w_cmd->add_option("--shape", w_opts.shape, "Reference Weibull shape");
  w_cmd->add_option("--mean", w_opts.mean, "Reference mean duration in s");
  w_cmd->add_option("--alpha", w_opts.alpha, "KS significance level");

  auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return run(run_opts);
    if (*fig_cmd) return figure(fig_opts);
    if (*w_cmd) return warden(w_opts);
    if (*self_cmd) return lack::acceptance::all_passed(lack::acceptance::run_acceptance(std::cout))
                              ? kOk
                              : kRuntimeError;
  } catch (const lack::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const lack::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
