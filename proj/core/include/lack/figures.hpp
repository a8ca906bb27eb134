#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lack::figures {

// Weibull shapes of the five reference duration models; every model is
// calibrated to the same 117.31 s mean.
inline constexpr double kReferenceMean = 117.31;
inline const std::vector<double> kReferenceShapes{3.4, 2.0, 1.2, 1.0, 0.5};

// Identifiers accepted by write_figure, in ascending order.
std::vector<std::string> supported_ids();

// Writes the CSV dataset behind a figure. Time axes use a 1 s grid over
// [0, 600] s. Datasets (columns after the axis, one per model or parameter):
//
//   2      p_n in [0, 0.1] step 0.001; total loss for p_L in {0, .01, ..., .05}
//   4      p_n in [0, 0.1] step 0.001; MOS for the same p_L values
//   9      t; E(D|D>t) per shape, the polynomial fit per shape, and the
//          empirical density (blank past its 455 s support)
//   10     t; residual-mean controller rate per shape, S = 1000 bits, uncapped
//   12,13  S in [0, 10000] step 100; residual-mean rate at t = 60 s / 180 s per shape
//   14     S grid; residual-mean rate of the k = 0.5 model at t in {0, 60, 120, 180, 300}
//   15     t; rate reduction X(t) = S / E(D) - IR(t) per shape
//   16-18  t; quantile controller rate per shape for xi = 0.8 / 0.9 / 0.95
//   19-21  t; horizon T_xi(t) for k in {3.4, 1, 0.5} at xi = 0.8 / 0.9 / 0.95;
//          19 adds the polynomial fit
//   22,23  S grid; quantile (xi = 0.9) rate at t = 60 s / 180 s per shape
//   24     S grid; quantile (xi = 0.9) rate of the k = 3.4 model at the same moments as 14
//   25-27  t; both controllers for k = 3.4 / 1 / 0.5 with xi in {0.8, 0.9, 0.95},
//          plus a 0/1 marker on the grid row nearest each crossing
//
// Throws DomainError for an unknown id.
void write_figure(const std::string& id, std::ostream& out);

}  // namespace lack::figures
