#include "lack/quality.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lack/codec.hpp"
#include "lack/error.hpp"

using namespace lack;
using namespace lack::quality;

namespace {

const MosParams kSkype;
const CodecProfile kG711 = CodecProfile::g711();

double mos_oracle(double p) { return 3.0829 * std::exp(-4.6446 * p) + 1.07; }

MosHistogram reference_histogram() {
  return MosHistogram({{3.0, 0.05}, {3.5, 0.10}, {4.0, 0.50}, {4.5, 0.35}});
}

}  // namespace

TEST(MosFromLoss, Anchors) {
  EXPECT_NEAR(mos_from_loss(kSkype, 0.0), 4.1529, 1e-12);
  EXPECT_NEAR(mos_from_loss(kSkype, 0.05), 3.514, 1e-3);
  EXPECT_NEAR(mos_from_loss(kSkype, 0.03), 3.752, 1e-3);
  EXPECT_THROW(mos_from_loss(kSkype, 1.2), DomainError);
}

TEST(MosFromLoss, StrictlyDecreasingWithinRange) {
  double prev = mos_from_loss(kSkype, 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double p = i / 1000.0;
    const double m = mos_from_loss(kSkype, p);
    EXPECT_LT(m, prev);
    EXPECT_GT(m, kSkype.gamma);
    EXPECT_NEAR(m, mos_oracle(p), 1e-12);
    prev = m;
  }
}

TEST(DeltaMos, Anchors) {
  EXPECT_NEAR(delta_mos(kSkype, 0.02, 0.01), mos_oracle(0.02) - mos_oracle(0.03), 1e-12);
  EXPECT_NEAR(delta_mos(kSkype, 0.02, 0.01), 0.1275, 1e-4);
  EXPECT_NEAR(delta_mos(kSkype, 0.0, 0.05), 0.639, 1e-3);
  EXPECT_EQ(delta_mos(kSkype, 0.3, 0.0), 0.0);
}

TEST(DeltaMos, EqualsDifferenceOfMos) {
  for (double pn = 0.0; pn <= 0.2; pn += 0.01) {
    for (double pl = 0.0; pl <= 0.1; pl += 0.005) {
      const double d = delta_mos(kSkype, pn, pl);
      EXPECT_GE(d, 0.0);
      EXPECT_NEAR(d, mos_from_loss(kSkype, pn) - mos_from_loss(kSkype, pn + pl), 1e-12);
    }
  }
}

TEST(LossBudgetForMos, Anchors) {
  const auto perfect = loss_budget_for_mos(kSkype, kSkype.zero_loss_mos(), 0.0);
  EXPECT_NEAR(perfect.lack_loss, 0.0, 1e-15);
  EXPECT_NEAR(loss_budget_for_mos(kSkype, 3.5, 0.01).lack_loss, 0.0412, 1e-4);
  EXPECT_THROW(loss_budget_for_mos(kSkype, 1.0, 0.0), DomainError);
  EXPECT_THROW(loss_budget_for_mos(kSkype, kSkype.gamma, 0.0), DomainError);
}

TEST(LossBudgetForMos, NegativeBudgetClampsWithFlag) {
  const auto b = loss_budget_for_mos(kSkype, 4.1, 0.05);
  EXPECT_EQ(b.lack_loss, 0.0);
  EXPECT_TRUE(b.exhausted);
  EXPECT_FALSE(loss_budget_for_mos(kSkype, 3.5, 0.01).exhausted);
}

TEST(LossBudgetForMos, RoundTrip) {
  for (double pn : {0.0, 0.01, 0.05}) {
    for (int i = 0; i < 20; ++i) {
      const double target = 1.2 + i * 0.14;
      const auto b = loss_budget_for_mos(kSkype, target, pn);
      if (b.exhausted || b.lack_loss >= 1.0) continue;
      EXPECT_NEAR(mos_from_loss(kSkype, pn + b.lack_loss), target, 1e-9);
    }
  }
}

TEST(MosHistogram, Validation) {
  EXPECT_THROW(MosHistogram({}), DomainError);
  EXPECT_THROW(MosHistogram({{0.5, 1.0}}), DomainError);
  EXPECT_THROW(MosHistogram({{3.0, 0.5}, {4.0, 0.4}}), DomainError);
  EXPECT_THROW(MosHistogram({{3.0, -0.1}, {4.0, 1.1}}), DomainError);
}

TEST(MosHistogram, TailIsStrict) {
  const auto h = reference_histogram();
  EXPECT_NEAR(h.tail_probability(3.5), 0.85, 1e-12);
  EXPECT_NEAR(h.tail_probability(3.49), 0.95, 1e-12);
  EXPECT_EQ(h.tail_probability(4.5), 0.0);
}

TEST(MosHistogram, CsvWithHeaderAndComments) {
  std::istringstream in("mos_bin,probability\n# comment\n4.0, 0.5\n3.5,0.1\n3.0,0.05\n4.5,0.35\n");
  const auto h = MosHistogram::from_csv(in);
  ASSERT_EQ(h.bins().size(), 4u);
  EXPECT_EQ(h.bins().front().mos, 3.0);
  std::istringstream bad("mos,p\n3.0,abc\n");
  EXPECT_THROW(MosHistogram::from_csv(bad), DomainError);
}

TEST(IrqStatic, PicksStrictestQualifyingBin) {
  const auto cap = irq_static(reference_histogram(), 0.8, kSkype, 0.01, kG711);
  ASSERT_TRUE(cap.mos_target.has_value());
  EXPECT_EQ(*cap.mos_target, 3.5);
  EXPECT_NEAR(cap.irq_bps, 2639.0, 1.0);
  EXPECT_NEAR(cap.irq_bps, loss_budget_for_mos(kSkype, 3.5, 0.01).lack_loss * 64000.0, 1e-9);
}

TEST(IrqStatic, UnreachableEtaGivesZero) {
  const MosHistogram below_max({{3.0, 0.4}, {3.8, 0.6}});
  const auto cap = irq_static(below_max, 0.999, kSkype, 0.0, kG711);
  EXPECT_EQ(cap.irq_bps, 0.0);
  EXPECT_TRUE(cap.budget.exhausted);
  EXPECT_THROW(irq_static(below_max, 1.0, kSkype, 0.0, kG711), DomainError);
  EXPECT_THROW(irq_static(below_max, 0.0, kSkype, 0.0, kG711), DomainError);
}

TEST(IrqStatic, PublishedRateExample) {
  EXPECT_DOUBLE_EQ(0.005 * kG711.capacity_bps(), 320.0);
}

TEST(IrqDynamic, Anchors) {
  EXPECT_NEAR(irq_dynamic(kSkype, 4.0, 3.5, 0.01, kG711), 60.9, 0.1);
  EXPECT_EQ(irq_dynamic(kSkype, 3.4, 3.5, 0.01, kG711), 0.0);
  EXPECT_NEAR(irq_dynamic(kSkype, kSkype.zero_loss_mos(), 3.5, 0.0, kG711), 0.0, 1e-9);
}

TEST(MosGain, Anchors) {
  EXPECT_EQ(mos_gain(kSkype, 0.01, 320.0, 0.0, kG711), 0.0);
  EXPECT_NEAR(mos_gain(kSkype, 0.01, 320.0, 160.0, kG711), 0.0336, 1e-4);
  EXPECT_NEAR(mos_gain(kSkype, 0.01, 320.0, 320.0, kG711), 0.0676, 1e-4);
  EXPECT_THROW(mos_gain(kSkype, 0.01, 320.0, 400.0, kG711), DomainError);
}

TEST(MosGain, FullReductionEqualsDeltaMos) {
  for (double pn : {0.0, 0.01, 0.04}) {
    for (double ir0 : {32.0, 320.0, 1280.0}) {
      EXPECT_NEAR(mos_gain(kSkype, pn, ir0, ir0, kG711), delta_mos(kSkype, pn, ir0 / 64000.0), 1e-9);
    }
  }
}

TEST(MosGain, MonotoneInReduction) {
  double prev = -1.0;
  for (double x = 0.0; x <= 320.0; x += 10.0) {
    const double g = mos_gain(kSkype, 0.01, 320.0, x, kG711);
    EXPECT_GT(g, prev);
    prev = g;
  }
}
