#include "lack/quality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "lack/error.hpp"

namespace lack::quality {
namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void MosParams::validate() const {
  if (!(alpha > 0.0)) throw DomainError("MOS alpha must be > 0");
  if (!(beta < 0.0)) throw DomainError("MOS beta must be < 0");
}

MosHistogram::MosHistogram(std::vector<Bin> bins) : bins_(std::move(bins)) {
  if (bins_.empty()) throw DomainError("MOS histogram is empty");
  double total = 0.0;
  for (const auto& b : bins_) {
    if (!(b.mos >= 1.0 && b.mos <= 5.0)) throw DomainError("MOS bin outside [1, 5]");
    if (!(b.probability >= 0.0)) throw DomainError("negative MOS bin probability");
    total += b.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("MOS bin probabilities do not sum to 1");
  std::sort(bins_.begin(), bins_.end(), [](const Bin& a, const Bin& b) { return a.mos < b.mos; });
}

MosHistogram MosHistogram::from_csv(std::istream& in) {
  std::vector<Bin> bins;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("MOS histogram row needs two columns");
    const std::string a = trim(line.substr(0, comma));
    const std::string b = trim(line.substr(comma + 1));
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      const double mos = std::stod(a, &used_a);
      const double p = std::stod(b, &used_b);
      if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(line);
      bins.push_back({mos, p});
    } catch (const std::exception&) {
      if (!first) throw DomainError("malformed MOS histogram row: " + line);
    }
    first = false;
  }
  return MosHistogram(std::move(bins));
}

MosHistogram MosHistogram::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open MOS histogram " + path.string());
  return from_csv(in);
}

double MosHistogram::tail_probability(double mos) const {
  double tail = 0.0;
  for (const auto& b : bins_) {
    if (b.mos > mos) tail += b.probability;
  }
  return tail;
}

double mos_from_loss(const MosParams& params, double loss) {
  require_probability(loss, "loss probability");
  return params.alpha * std::exp(params.beta * loss) + params.gamma;
}

double delta_mos(const MosParams& params, double network_loss, double lack_loss) {
  require_probability(network_loss, "network loss");
  require_probability(lack_loss, "LACK loss");
  return -params.alpha * std::exp(params.beta * network_loss) *
         std::expm1(params.beta * lack_loss);
}

LossBudget loss_budget_for_mos(const MosParams& params, double mos_target, double network_loss) {
  params.validate();
  require_probability(network_loss, "network loss");
  if (!(mos_target > params.gamma)) {
    throw DomainError("MOS target must exceed the MOS floor gamma");
  }
  const double raw = std::log((mos_target - params.gamma) / params.alpha) / params.beta -
                     network_loss;
  if (raw <= 0.0) return {0.0, true};
  return {std::min(raw, 1.0), false};
}

StaticCap irq_static(const MosHistogram& histogram, double eta, const MosParams& params,
                     double network_loss, const CodecProfile& codec) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  StaticCap cap;
  // Highest bin whose strict tail still exceeds eta.
  for (auto it = histogram.bins().rbegin(); it != histogram.bins().rend(); ++it) {
    if (histogram.tail_probability(it->mos) > eta) {
      cap.mos_target = it->mos;
      break;
    }
  }
  if (!cap.mos_target || *cap.mos_target <= params.gamma) {
    cap.budget = {0.0, true};
    return cap;
  }
  cap.budget = loss_budget_for_mos(params, *cap.mos_target, network_loss);
  cap.irq_bps = cap.budget.lack_loss * codec.capacity_bps();
  return cap;
}

double irq_dynamic(const MosParams& params, double mos_estimate, double mos_floor,
                   double network_loss, const CodecProfile& codec) {
  if (mos_estimate < mos_floor || mos_estimate <= params.gamma) return 0.0;
  return loss_budget_for_mos(params, mos_estimate, network_loss).lack_loss * codec.capacity_bps();
}

double mos_gain(const MosParams& params, double network_loss, double ir_initial,
                double reduction, const CodecProfile& codec) {
  if (!(reduction >= 0.0)) throw DomainError("rate reduction must be >= 0");
  if (reduction > ir_initial) throw DomainError("rate reduction exceeds the initial rate");
  const double capacity = codec.capacity_bps();
  return params.alpha * std::exp(params.beta * (network_loss + ir_initial / capacity)) *
         std::expm1(-params.beta * reduction / capacity);
}

}  // namespace lack::quality
