#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "lack/codec.hpp"

namespace lack::quality {

// MOS(p) = alpha * exp(beta * p) + gamma. Defaults are the values measured
// for Skype telephony.
struct MosParams {
  double alpha = 3.0829;
  double beta = -4.6446;
  double gamma = 1.07;

  // Throws DomainError unless alpha > 0 and beta < 0.
  void validate() const;
  double zero_loss_mos() const noexcept { return alpha + gamma; }
};

// Binned per-call MOS distribution for a network.
class MosHistogram {
 public:
  struct Bin {
    double mos;
    double probability;
  };

  // Bins are sorted by MOS. Throws DomainError if empty, if a MOS value lies
  // outside [1, 5], if a probability is negative, or if they do not sum to
  // 1 within 1e-9.
  explicit MosHistogram(std::vector<Bin> bins);

  // Two-column CSV `mos_bin,probability`; a non-numeric first line is
  // treated as a header.
  static MosHistogram from_csv(std::istream& in);
  static MosHistogram from_csv(const std::filesystem::path& path);

  const std::vector<Bin>& bins() const noexcept { return bins_; }

  // P(MOS > mos).
  double tail_probability(double mos) const;

 private:
  std::vector<Bin> bins_;
};

double mos_from_loss(const MosParams& params, double loss);

// MOS drop caused by adding LACK loss on top of network loss.
double delta_mos(const MosParams& params, double network_loss, double lack_loss);

struct LossBudget {
  double lack_loss = 0.0;  // admissible p_L, clamped to [0, 1]
  bool exhausted = false;  // the unclamped budget was <= 0
};

// Largest LACK loss keeping MOS at `mos_target` given network loss.
// Throws DomainError if mos_target <= gamma.
LossBudget loss_budget_for_mos(const MosParams& params, double mos_target, double network_loss);

struct StaticCap {
  std::optional<double> mos_target;  // empty when no bin satisfies the eta requirement
  LossBudget budget;
  double irq_bps = 0.0;
};

// Quality cap from historical data: picks the strictest histogram MOS* with
// P(MOS > MOS*) > eta and converts its loss budget to a rate. Not limited by
// codec tolerance. When no bin reaches eta the cap is zero.
StaticCap irq_static(const MosHistogram& histogram, double eta, const MosParams& params,
                     double network_loss, const CodecProfile& codec);

// Quality cap from a running MOS estimate; zero whenever the estimate is
// below the floor.
double irq_dynamic(const MosParams& params, double mos_estimate, double mos_floor,
                   double network_loss, const CodecProfile& codec);

// MOS improvement from lowering the insertion rate from `ir_initial` to
// `ir_initial - reduction`.
double mos_gain(const MosParams& params, double network_loss, double ir_initial,
                double reduction, const CodecProfile& codec);

}  // namespace lack::quality
