#include "acceptance.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include "lack/budget.hpp"
#include "lack/codec.hpp"
#include "lack/control.hpp"
#include "lack/duration.hpp"
#include "lack/experiment.hpp"
#include "lack/quality.hpp"
#include "lack/sim.hpp"
#include "lack/warden.hpp"

namespace lack::acceptance {
namespace {

namespace fs = std::filesystem;

constexpr double kMean = 117.31;
const std::vector<double> kShapes{3.4, 2.0, 1.2, 1.0, 0.5};

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double closed_survival(double k, double lambda, double t) { return std::exp(-std::pow(t / lambda, k)); }

double closed_mean(double k, double lambda) { return lambda * std::tgamma(1.0 + 1.0 / k); }

double closed_cv(double k) {
  const double g1 = std::tgamma(1.0 + 1.0 / k);
  const double g2 = std::tgamma(1.0 + 2.0 / k);
  return std::sqrt(g2 / (g1 * g1) - 1.0);
}

// 1. Reference duration models.
Outcome table_one() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> lambdas{130.57, 132.37, 124.71, 117.31, 58.65};
  const std::vector<double> cvs{0.32, 0.52, 0.84, 1.0, 2.23};
  double worst_lambda = 0.0;
  double worst_cv = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < kShapes.size(); ++i) {
    const auto m = duration::calibrate_scale(kShapes[i], kMean);
    const double rel = std::abs(m.scale() - lambdas[i]) / lambdas[i];
    const double cv = duration::weibull_stats(m).cv;
    const double dcv = std::abs(cv - cvs[i]);
    // Independent check of the library's moments.
    ok = ok && std::abs(cv - closed_cv(kShapes[i])) < 1e-12 &&
         std::abs(closed_mean(kShapes[i], m.scale()) - kMean) < 1e-9;
    worst_lambda = std::max(worst_lambda, rel);
    worst_cv = std::max(worst_cv, dcv);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && worst_lambda < 0.005 && worst_cv <= 0.01 && secs < 1.0;
  return {ok, fmt("max scale error %.3f%%, max cv error %.4f, %.3f s", 100 * worst_lambda,
                  worst_cv, secs)};
}

// 2. Loss-budget arithmetic.
Outcome worked_examples() {
  const double p_l = budget::admissible_lack_loss(0.05, 0.02);
  const double oracle = (0.05 - 0.02) / (1.0 - 0.02);
  const double rate = budget::loss_to_rate(CodecProfile::g711(), 0.005);
  const bool ok = std::abs(p_l - 0.030612) < 5e-7 && std::abs(p_l - oracle) <= 1e-15 && rate == 320.0;
  return {ok, fmt("admissible p_L = %.9f, G.711 rate at 0.005 = %.17g b/s", p_l, rate)};
}

// 3. Exponential calls: E(D|D>t) = t + E(D).
Outcome memoryless() {
  const duration::WeibullModel m(1.0, kMean);
  double worst = 0.0;
  for (int t = 0; t <= 600; t += 30) {
    const double v = duration::conditional_mean_duration(m, t);
    worst = std::max(worst, std::abs(v - (t + kMean)) / kMean);
  }
  return {worst < 1e-6, fmt("max relative error %.3g", worst)};
}

// 4. max(t, E(D)) <= E(D|D>t) <= E(D) / P(D>t).
Outcome bound_suite() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kSlack = 1e-9;
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (double k : kShapes) {
    const auto m = duration::calibrate_scale(k, kMean);
    for (int i = 0; i <= 60; ++i) {
      const double t = 10.0 * i;
      const double v = duration::conditional_mean_duration(m, t);
      const double lower = std::max(t, kMean);
      const double upper = kMean / closed_survival(k, m.scale(), t);
      ++checked;
      if (v < lower * (1.0 - kSlack) || v > upper * (1.0 + kSlack)) ++violations;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {violations == 0 && secs < 10.0,
          fmt("%zu points, %zu violations, %.3f s", checked, violations, secs)};
}

// 5. Quantile horizon inverts the conditional survival.
Outcome quantile_round_trip() {
  double worst = 0.0;
  for (double k : kShapes) {
    const auto m = duration::calibrate_scale(k, kMean);
    for (double xi : {0.8, 0.9, 0.95}) {
      for (int i = 0; i <= 60; ++i) {
        const double t = 10.0 * i;
        const double T = duration::quantile_horizon(m, t, xi);
        worst = std::max(worst, std::abs(duration::conditional_survival(m, t, T) - xi));
      }
    }
  }
  return {worst <= 1e-9, fmt("max |P - xi| = %.3g", worst)};
}

// Largest relative and absolute deviation of a controller curve from a
// reference on t in [0, t_max], compared on the 0.1 s grid.
struct CurveError {
  double max_rel = 0.0;
  double max_abs = 0.0;
};

CurveError curve_error(const control::ControllerConfig& cfg, const duration::WeibullModel& m,
                       double dt, double t_max, const std::function<double(double)>& exact) {
  const auto curve = control::simulate_curve(cfg, m, 1000, t_max, dt);
  const auto stride = static_cast<std::size_t>(std::llround(0.1 / dt));
  CurveError e;
  for (std::size_t i = 0; i < curve.times.size(); i += stride) {
    const double ref = exact(curve.times[i]);
    const double diff = std::abs(curve.rates[i] - ref);
    e.max_abs = std::max(e.max_abs, diff);
    e.max_rel = std::max(e.max_rel, diff / ref);
  }
  return e;
}

// 6. Discrete controllers against the analytic ODE solutions.
Outcome controller_ode() {
  const duration::WeibullModel m(1.0, kMean);
  const double s = 1000.0;
  control::ControllerConfig residual;
  const auto exact_residual = [&](double t) { return s / kMean * std::exp(-t / kMean); };
  const CurveError r1 = curve_error(residual, m, 0.1, 3.0 * kMean, exact_residual);
  const CurveError r2 = curve_error(residual, m, 0.05, 3.0 * kMean, exact_residual);

  const double xi = 0.8;
  const double c = -kMean * std::log(xi);
  control::ControllerConfig quantile;
  quantile.mode = control::Mode::Quantile;
  quantile.xi = xi;
  const auto exact_quantile = [&](double t) { return s / c * std::exp(-t / c); };
  const CurveError q1 = curve_error(quantile, m, 0.1, 3.0 * c, exact_quantile);
  const CurveError q2 = curve_error(quantile, m, 0.05, 3.0 * c, exact_quantile);

  const double ratio_r = r1.max_abs / r2.max_abs;
  const double ratio_q = q1.max_abs / q2.max_abs;
  const bool ok = r1.max_rel < 0.01 && q1.max_rel < 0.01 && ratio_r >= 2.0 && ratio_q >= 2.0;
  return {ok, fmt("residual-mean max rel %.4f%% (dt halving x%.2f); quantile xi=0.8 over "
                  "t <= 3c: max rel %.4f%% (x%.2f)",
                  100 * r1.max_rel, ratio_r, 100 * q1.max_rel, ratio_q)};
}

// 7. Controller ordering and crossing time.
Outcome crossing() {
  const duration::WeibullModel m(1.0, kMean);
  const double xi = 0.9;
  const double c = -kMean * std::log(xi);
  const double expected = std::log(kMean / c) / (1.0 / c - 1.0 / kMean);
  const auto report = control::compare_controllers(m, 1000, xi, 120.0);
  const bool start_order = report.second.front() > report.first.front();
  const bool crossed = report.crossing.has_value();
  const double found = crossed ? *report.crossing : -1.0;

  const auto heavy = duration::calibrate_scale(0.5, kMean);
  const auto heavy_report = control::compare_controllers(heavy, 1000, 0.8, 10.0);
  const double ratio = heavy_report.second.front() / heavy_report.first.front();

  const bool ok = start_order && crossed && std::abs(found - expected) <= 0.5 && ratio > 10.0;
  return {ok, fmt("crossing %.3f s vs analytic %.3f s; k=0.5 xi=0.8 IR ratio at t=0 %.2f", found,
                  expected, ratio)};
}

// 8. Published polynomial fits at cv = 1, t = 1 min.
Outcome approximation_anchors() {
  const duration::WeibullModel m(1.0, kMean);
  const double exact_cmd = (60.0 + kMean) / 60.0;
  const double fit_cmd = duration::approx_conditional_mean_minutes(1.0, 1.0);
  const double exact_h = duration::quantile_horizon(m, 60.0, 0.8) / 60.0;
  const double fit_h = duration::approx_horizon_minutes(1.0, 1.0);
  const double e1 = std::abs(fit_cmd - exact_cmd) / exact_cmd;
  const double e2 = std::abs(fit_h - exact_h) / exact_h;
  const bool ok = e1 < 0.02 && e2 < 0.02 && std::abs(exact_cmd - 2.955) < 5e-4 &&
                  std::abs(exact_h - 1.436) < 5e-4;
  return {ok, fmt("conditional mean fit %.4f vs %.4f min (%.2f%%), horizon fit %.4f vs %.4f min "
                  "(%.2f%%)",
                  fit_cmd, exact_cmd, 100 * e1, fit_h, exact_h, 100 * e2)};
}

// 9. MOS-gain and MOS-drop formulas agree; budget round trip.
Outcome quality_consistency() {
  const quality::MosParams params;
  const auto codec = CodecProfile::g711();
  const double p_n = 0.01;
  const double ir0 = 320.0;
  const double gain = quality::mos_gain(params, p_n, ir0, ir0, codec);
  const double drop = quality::delta_mos(params, p_n, ir0 / codec.capacity_bps());
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double target = 1.2 + i * (4.0 - 1.2) / 19.0;
    const auto b = quality::loss_budget_for_mos(params, target, p_n);
    worst = std::max(worst, std::abs(quality::mos_from_loss(params, p_n + b.lack_loss) - target));
  }
  const bool ok = std::abs(gain - drop) <= 1e-9 && worst <= 1e-9;
  return {ok, fmt("|gain - drop| = %.3g, max round-trip error %.3g", std::abs(gain - drop), worst)};
}

sim::Scenario constant_rate_scenario(double p_n, double p_l) {
  sim::Scenario s;
  s.name = "constant";
  s.network.loss_schedule = {{0.0, p_n}};
  s.controller.mode = control::Mode::Constant;
  s.controller.constant_rate_bps = p_l * s.codec.capacity_bps();
  s.cap.codec_tolerance = false;
  s.steganogram_bits = 1'000'000'000'000ULL;  // never runs out
  return s;
}

// 10. Realized losses match their targets.
Outcome simulation_statistics() {
  const auto start = std::chrono::steady_clock::now();
  const double p_n = 0.01;
  const double p_l = 0.005;
  sim::Scenario s = constant_rate_scenario(p_n, p_l);
  std::uint64_t sent = 0;
  std::uint64_t steg = 0;
  std::uint64_t lost = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    s.seed = experiment::derive_seed(10, 0, i);
    const auto t = sim::run_call(s);
    sent += t.sent;
    steg += t.steg_packets;
    lost += t.network_lost + t.late;
  }
  const auto n = static_cast<double>(sent);
  const double realized_l = static_cast<double>(steg) / n;
  const double sigma_l = std::sqrt(p_l * (1.0 - p_l) / n);
  const double p_t = 1.0 - (1.0 - p_n) * (1.0 - p_l);
  const double realized_t = static_cast<double>(lost) / n;
  const double sigma_t = std::sqrt(p_t * (1.0 - p_t) / n);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double z_l = (realized_l - p_l) / sigma_l;
  const double z_t = (realized_t - p_t) / sigma_t;
  const bool ok = std::abs(z_l) <= 3.0 && std::abs(z_t) <= 3.0 && secs < 60.0;
  return {ok, fmt("%llu packets; p_L %.5f (z=%.2f), total %.5f vs %.5f (z=%.2f), %.1f s",
                  static_cast<unsigned long long>(sent), realized_l, z_l, realized_t, p_t, z_t,
                  secs)};
}

// 11. Warden sanity checks.
Outcome warden_sanity() {
  // Active filter at the receiver's own buffer: every LACK packet is beyond
  // it, every played packet within it.
  sim::Scenario s;
  s.name = "active";
  s.network.loss_schedule = {{0.0, 0.01}};
  s.fixed_duration_s = 120.0;
  s.steganogram_bits = 5000;
  s.seed = 11;
  const auto trace = sim::run_call(s);
  const auto active = warden::active_filter(trace, s.jitter_buffer.size_ms);
  const bool active_ok = trace.delivered_bits > 0 && active.filtered.delivered_bits == 0 &&
                         active.report.legit_destroyed == 0;

  // Passive scan at one threshold, fixed from non-LACK calls.
  constexpr std::uint64_t kCalls = 500;
  std::vector<double> clean;
  std::vector<double> lack_calls;
  for (std::uint64_t i = 0; i < kCalls; ++i) {
    sim::Scenario a = constant_rate_scenario(0.01, 0.0);
    a.seed = experiment::derive_seed(11, 0, i);
    clean.push_back(warden::observed_loss(sim::run_call(a)));
    sim::Scenario b = constant_rate_scenario(0.01, 0.02);
    b.seed = experiment::derive_seed(11, 1, i);
    lack_calls.push_back(warden::observed_loss(sim::run_call(b)));
  }
  const double threshold = warden::population_threshold(clean);
  const double rate_clean = warden::passive_loss_scan(clean, threshold).flag_rate;
  const double rate_lack = warden::passive_loss_scan(lack_calls, threshold).flag_rate;

  // Duration test size over 500 cohorts drawn from the reference model.
  const auto model = duration::calibrate_scale(1.0, kMean);
  std::mt19937_64 rng(2011);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int flagged = 0;
  constexpr int kCohorts = 500;
  for (int c = 0; c < kCohorts; ++c) {
    std::vector<double> d(100);
    for (auto& x : d) {
      double u = 0.0;
      while (u == 0.0) u = unit(rng);
      x = duration::sample_duration(model, u);
    }
    flagged += warden::duration_distribution_test(d, model, 0.05).flagged ? 1 : 0;
  }
  const double fpr = static_cast<double>(flagged) / kCohorts;

  const bool ok = active_ok && rate_lack > rate_clean && std::abs(fpr - 0.05) <= 0.02;
  return {ok, fmt("active: %llu -> %llu bits, %llu legit erased; passive flag rate %.3f vs %.3f "
                  "(threshold %.4f); KS false-positive rate %.3f",
                  static_cast<unsigned long long>(trace.delivered_bits),
                  static_cast<unsigned long long>(active.filtered.delivered_bits),
                  static_cast<unsigned long long>(active.report.legit_destroyed), rate_lack,
                  rate_clean, threshold, fpr)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 12. Reruns are byte-identical.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("lack-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path scenario = root / "sweep.ini";
  {
    std::ofstream out(scenario);
    out << "name = determinism\nseed = 7\nsteganogram_bits = 2000\n"
           "[network]\nloss = 0.02\n"
           "[duration]\nmean = 117.31\n"
           "[sweep]\nduration.shape = 1, 0.5\ncontroller.mode = residual_mean, quantile\n";
  }
  std::vector<std::string> runs;
  for (const char* name : {"a", "b"}) {
    experiment::ExperimentConfig cfg;
    cfg.scenarios = {scenario};
    cfg.output_dir = root / name;
    cfg.master_seed = 12;
    cfg.replications = 30;
    cfg.write_traces = true;
    experiment::run_experiment(cfg);
  }
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) ++differing;
  }
  fs::remove_all(root);
  return {files > 3 && differing == 0, fmt("%zu files compared, %zu differ", files, differing)};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"reference duration models", table_one},
      {"loss budget and G.711 rate examples", worked_examples},
      {"exponential conditional mean", memoryless},
      {"conditional mean bounds", bound_suite},
      {"quantile horizon round trip", quantile_round_trip},
      {"controller ODE oracles", controller_ode},
      {"controller ordering and crossing", crossing},
      {"polynomial fit anchors", approximation_anchors},
      {"quality model consistency", quality_consistency},
      {"simulated loss statistics", simulation_statistics},
      {"warden sanity", warden_sanity},
      {"experiment determinism", determinism},
  };
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int id = static_cast<int>(i + 1);
    results.push_back({id, criteria[i].first, o.passed, o.detail, secs});
    out << (o.passed ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[i].first
        << " -- " << o.detail << '\n';
    out.flush();
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

}  // namespace lack::acceptance
