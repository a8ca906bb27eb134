#include "lack/figures.hpp"

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "lack/budget.hpp"
#include "lack/control.hpp"
#include "lack/csv.hpp"
#include "lack/duration.hpp"
#include "lack/empirical_density.hpp"
#include "lack/error.hpp"
#include "lack/quality.hpp"

namespace lack::figures {
namespace {

constexpr std::uint64_t kBits = 1000;
constexpr double kHorizon = 600.0;
constexpr double kGrid = 1.0;
constexpr double kCurveStep = 0.1;  // controller integration step
constexpr std::size_t kGridPoints = 601;

using Cell = std::optional<double>;
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  void write(std::ostream& out) const {
    out << csv::join(header) << '\n';
    for (const auto& row : rows) {
      std::vector<std::string> fields;
      fields.reserve(row.size());
      for (const auto& c : row) fields.push_back(c ? csv::number(*c) : std::string());
      out << csv::join(fields) << '\n';
    }
  }
};

std::string shape_label(double k) { return "k" + csv::number(k); }

duration::WeibullModel reference_model(double shape) {
  return duration::calibrate_scale(shape, kReferenceMean);
}

double grid_time(std::size_t i) { return static_cast<double>(i) * kGrid; }

// Builds a table over the 1 s time grid with one column per generator.
Table time_table(const std::vector<std::string>& columns,
                 const std::vector<std::function<Cell(std::size_t)>>& generators) {
  Table table;
  table.header.push_back("t_s");
  table.header.insert(table.header.end(), columns.begin(), columns.end());
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    Row row{grid_time(i)};
    for (const auto& g : generators) row.push_back(g(i));
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Controller rate on the 1 s grid for S = 1000 bits, uncapped.
std::vector<double> rate_on_grid(const control::ControllerConfig& config,
                                 const duration::WeibullModel& model) {
  const control::RateCurve curve = control::simulate_curve(config, model, kBits, kHorizon, kCurveStep);
  const auto stride = static_cast<std::size_t>(std::llround(kGrid / kCurveStep));
  std::vector<double> out;
  for (std::size_t i = 0; i < curve.rates.size(); i += stride) out.push_back(curve.rates[i]);
  return out;
}

control::ControllerConfig residual_config() { return {}; }

control::ControllerConfig quantile_config(double xi) {
  control::ControllerConfig c;
  c.mode = control::Mode::Quantile;
  c.xi = xi;
  return c;
}

Table loss_table(bool mos) {
  const std::vector<double> lack_losses{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  const quality::MosParams params;
  Table table;
  table.header.push_back("p_n");
  for (double p_l : lack_losses) table.header.push_back((mos ? "mos_pl" : "total_pl") + csv::number(p_l));
  for (int i = 0; i <= 100; ++i) {
    const double p_n = i / 1000.0;
    Row row{p_n};
    for (double p_l : lack_losses) {
      const double total = budget::total_loss(p_n, p_l);
      row.push_back(mos ? quality::mos_from_loss(params, total) : total);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table conditional_mean_table() {
  std::vector<std::string> cols;
  std::vector<std::function<Cell(std::size_t)>> gens;
  for (double k : kReferenceShapes) {
    const auto m = reference_model(k);
    cols.push_back("cmd_" + shape_label(k));
    gens.emplace_back([m](std::size_t i) -> Cell {
      return duration::conditional_mean_duration(m, grid_time(i));
    });
  }
  for (double k : kReferenceShapes) {
    const double cv = duration::weibull_stats(reference_model(k)).cv;
    cols.push_back("fit_" + shape_label(k));
    gens.emplace_back([cv](std::size_t i) -> Cell {
      return 60.0 * duration::approx_conditional_mean_minutes(cv, grid_time(i) / 60.0);
    });
  }
  auto empirical = std::make_shared<duration::EmpiricalDensity>();
  cols.push_back("cmd_empirical");
  gens.emplace_back([empirical](std::size_t i) -> Cell {
    const double t = grid_time(i);
    if (t >= duration::EmpiricalDensity::kSupportEnd) return std::nullopt;
    return empirical->conditional_mean_duration(t);
  });
  return time_table(cols, gens);
}

Table rate_table(const control::ControllerConfig& config, const std::string& prefix) {
  std::vector<std::string> cols;
  std::vector<std::function<Cell(std::size_t)>> gens;
  for (double k : kReferenceShapes) {
    auto rates = std::make_shared<std::vector<double>>(rate_on_grid(config, reference_model(k)));
    cols.push_back(prefix + shape_label(k));
    gens.emplace_back([rates](std::size_t i) -> Cell { return (*rates)[i]; });
  }
  return time_table(cols, gens);
}

Table reduction_table() {
  std::vector<std::string> cols;
  std::vector<std::function<Cell(std::size_t)>> gens;
  for (double k : kReferenceShapes) {
    const auto rates = rate_on_grid(residual_config(), reference_model(k));
    std::vector<double> times(rates.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = grid_time(i);
    auto gain = std::make_shared<control::GainMetrics>(
        control::gain_metrics(times, rates, static_cast<double>(kBits), kReferenceMean));
    cols.push_back("x_" + shape_label(k));
    gens.emplace_back([gain](std::size_t i) -> Cell { return gain->reduction[i]; });
  }
  return time_table(cols, gens);
}

Table horizon_table(double xi, bool with_fit) {
  const std::vector<double> shapes{3.4, 1.0, 0.5};
  std::vector<std::string> cols;
  std::vector<std::function<Cell(std::size_t)>> gens;
  for (double k : shapes) {
    const auto m = reference_model(k);
    cols.push_back("t_xi_" + shape_label(k));
    gens.emplace_back([m, xi](std::size_t i) -> Cell {
      return duration::quantile_horizon(m, grid_time(i), xi);
    });
  }
  if (with_fit) {
    for (double k : shapes) {
      const double cv = duration::weibull_stats(reference_model(k)).cv;
      cols.push_back("fit_" + shape_label(k));
      gens.emplace_back([cv](std::size_t i) -> Cell {
        return 60.0 * duration::approx_horizon_minutes(cv, grid_time(i) / 60.0);
      });
    }
  }
  return time_table(cols, gens);
}

// Uncapped controller rates are proportional to S, so one S = 1000 run per
// model is rescaled over the S grid.
Table size_table(const std::vector<std::string>& cols, const std::vector<double>& unit_rates) {
  Table table;
  table.header.push_back("s_bits");
  table.header.insert(table.header.end(), cols.begin(), cols.end());
  for (int i = 0; i <= 100; ++i) {
    const double s = 100.0 * i;
    Row row{s};
    for (double r : unit_rates) row.push_back(r * s / static_cast<double>(kBits));
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table size_by_shape(const control::ControllerConfig& config, double t, const std::string& prefix) {
  std::vector<std::string> cols;
  std::vector<double> unit;
  const auto index = static_cast<std::size_t>(std::llround(t / kGrid));
  for (double k : kReferenceShapes) {
    cols.push_back(prefix + shape_label(k));
    unit.push_back(rate_on_grid(config, reference_model(k))[index]);
  }
  return size_table(cols, unit);
}

Table size_by_moment(const control::ControllerConfig& config, double shape,
                     const std::string& prefix) {
  const std::vector<double> moments{0.0, 60.0, 120.0, 180.0, 300.0};
  const auto rates = rate_on_grid(config, reference_model(shape));
  std::vector<std::string> cols;
  std::vector<double> unit;
  for (double t : moments) {
    cols.push_back(prefix + "t" + csv::number(t));
    unit.push_back(rates[static_cast<std::size_t>(std::llround(t / kGrid))]);
  }
  return size_table(cols, unit);
}

Table comparison_table(double shape) {
  const std::vector<double> xis{0.8, 0.9, 0.95};
  const auto model = reference_model(shape);
  std::vector<control::ComparisonReport> reports;
  for (double xi : xis) reports.push_back(control::compare_controllers(model, kBits, xi, kHorizon));

  Table table;
  table.header = {"t_s", "ir_residual_mean"};
  for (double xi : xis) table.header.push_back("ir_quantile_xi" + csv::number(xi));
  for (double xi : xis) table.header.push_back("crossing_xi" + csv::number(xi));
  const std::size_t n = reports.front().times.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = reports.front().times[i];
    Row row{t, reports.front().first[i]};
    for (const auto& r : reports) row.push_back(r.second[i]);
    for (const auto& r : reports) {
      const bool marked = r.crossing && std::llround(*r.crossing / kGrid) == std::llround(t / kGrid);
      row.push_back(marked ? 1.0 : 0.0);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

const std::map<std::string, std::function<Table()>>& registry() {
  static const std::map<std::string, std::function<Table()>> figures{
      {"2", [] { return loss_table(false); }},
      {"4", [] { return loss_table(true); }},
      {"9", [] { return conditional_mean_table(); }},
      {"10", [] { return rate_table(residual_config(), "ir_"); }},
      {"12", [] { return size_by_shape(residual_config(), 60.0, "ir_"); }},
      {"13", [] { return size_by_shape(residual_config(), 180.0, "ir_"); }},
      {"14", [] { return size_by_moment(residual_config(), 0.5, "ir_k0.5_"); }},
      {"15", [] { return reduction_table(); }},
      {"16", [] { return rate_table(quantile_config(0.8), "ir_xi0.8_"); }},
      {"17", [] { return rate_table(quantile_config(0.9), "ir_xi0.9_"); }},
      {"18", [] { return rate_table(quantile_config(0.95), "ir_xi0.95_"); }},
      {"19", [] { return horizon_table(0.8, true); }},
      {"20", [] { return horizon_table(0.9, false); }},
      {"21", [] { return horizon_table(0.95, false); }},
      {"22", [] { return size_by_shape(quantile_config(0.9), 60.0, "ir_xi0.9_"); }},
      {"23", [] { return size_by_shape(quantile_config(0.9), 180.0, "ir_xi0.9_"); }},
      {"24", [] { return size_by_moment(quantile_config(0.9), 3.4, "ir_xi0.9_k3.4_"); }},
      {"25", [] { return comparison_table(3.4); }},
      {"26", [] { return comparison_table(1.0); }},
      {"27", [] { return comparison_table(0.5); }},
  };
  return figures;
}

}  // namespace

std::vector<std::string> supported_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
    return std::stoi(a) < std::stoi(b);
  });
  return ids;
}

void write_figure(const std::string& id, std::ostream& out) {
  const auto& figures = registry();
  const auto it = figures.find(id);
  if (it == figures.end()) throw DomainError("unknown figure id `" + id + "`");
  it->second().write(out);
}

}  // namespace lack::figures
