#include <gtest/gtest.h>

#include <cmath>

#include "vcp/channel.hpp"
#include "vcp/error.hpp"

using namespace vcp;

namespace {

NetConfig quiet_net(int k = 4) {
  NetConfig n;
  n.rb_count = k;
  n.channel.fading = false;
  return n;
}

double dbm_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

}  // namespace

TEST(Los, SameRoadIsLos) {
  WorldConfig c;
  const Vec2 ctr = c.center();
  EXPECT_EQ(classify_los({ctr.x - 40, ctr.y - 2.5}, {ctr.x - 10, ctr.y - 2.5}, c), LosClass::Los);
}

TEST(Los, ThroughBuildingIsNlos) {
  WorldConfig c;
  const Vec2 ctr = c.center();
  EXPECT_EQ(classify_los({ctr.x - 30, ctr.y - 2.5}, {ctr.x + 2.5, ctr.y - 30}, c), LosClass::Nlos);
}

TEST(Los, PerpendicularArmsWithClearDiagonalIsWlos) {
  WorldConfig c;
  const Vec2 ctr = c.center();
  // West arm and south arm, both close to the box: the segment clears the SW building.
  const Vec2 west{ctr.x - 9.0, ctr.y - 2.5};
  const Vec2 south{ctr.x + 2.5, ctr.y - 9.0};
  for (const auto& b : buildings(c)) ASSERT_FALSE(segment_intersects(b, west, south));
  EXPECT_EQ(classify_los(west, south, c), LosClass::Wlos);
}

TEST(PathLoss, ClosedFormLosAtTenMetres) {
  ChannelParams p;
  p.fading = false;
  Rng rng(1);
  const double h = link_gain(LosClass::Los, 10.0, 0.0, p, rng);
  EXPECT_NEAR(10.0 * std::log10(h), -(38.77 + 16.7), 1e-9);
  EXPECT_NEAR(pathloss_db(LosClass::Wlos, 10.0, 0.0, p), 38.77 + 16.7 + 5.0, 1e-12);
  EXPECT_NEAR(pathloss_db(LosClass::Nlos, 10.0, 12.0, p), 38.77 + 16.7 + 15.0 + 0.4 * 12.0, 1e-12);
  EXPECT_NEAR(pathloss_db(LosClass::Los, 0.0, 0.0, p), 38.77, 1e-12);  // clamped to 1 m
}

TEST(PathLoss, NlosWeakerThanLos) {
  ChannelParams p;
  p.fading = false;
  Rng rng(1);
  for (double d : {1.0, 5.0, 30.0, 120.0})
    EXPECT_LT(link_gain(LosClass::Nlos, d, 0.0, p, rng), link_gain(LosClass::Los, d, 0.0, p, rng));
}

TEST(Fading, IndependentAcrossRbsAndUnitMean) {
  WorldConfig c;
  ChannelParams p;
  Rng rng(4);
  const std::vector<Vec2> pos{{40, 77.5}, {60, 77.5}};
  const std::vector<bool> here{true, true};
  double sum = 0.0;
  const int reps = 20000;
  const double base = std::pow(10.0, -pathloss_db(LosClass::Los, 20.0, 0.0, p) / 10.0);
  for (int r = 0; r < reps; ++r) {
    const auto g = compute_gains(pos, here, 2, c, p, rng);
    if (r == 0) EXPECT_NE(g.at(0, 1, 0), g.at(0, 1, 1));
    sum += g.at(0, 1, 0) / base;
  }
  EXPECT_NEAR(sum / reps, 1.0, 0.05);
}

TEST(Rates, UnassociatedLinkIsZero) {
  const NetConfig net = quiet_net();
  Association e(2);
  RbAllocation eta(2, net.rb_count);
  GainTensor g(2, net.rb_count, 1e-6);
  const auto r = compute_rates(e, eta, g, net);
  EXPECT_EQ(r[0][1], 0.0);
  EXPECT_EQ(r[1][0], 0.0);
}

TEST(Rates, SinglePairMatchesShannonOracle) {
  const NetConfig net = quiet_net();
  Association e(2);
  e.pair(0, 1);
  RbAllocation eta(2, net.rb_count);
  eta.at(0, 1, 0) = 1;
  eta.at(1, 0, 2) = 1;
  GainTensor g(2, net.rb_count, 3e-8);
  const auto r = compute_rates(e, eta, g, net);
  const double snr = dbm_to_w(10.0) * 3e-8 / (dbm_to_w(-174.0) * 180e3);
  const double expect = 0.002 / 800.0 * 180e3 * std::log2(1.0 + snr);
  EXPECT_NEAR(r[0][1], expect, 1e-9 * expect);
  EXPECT_NEAR(r[1][0], expect, 1e-9 * expect);
}

TEST(Rates, UnitSanityOneBlockPerSlot) {
  const NetConfig net = quiet_net(2);
  Association e(2);
  e.pair(0, 1);
  RbAllocation eta(2, 2);
  eta.at(0, 1, 0) = 1;
  eta.at(1, 0, 1) = 1;
  const double snr = std::pow(2.0, 2.22) - 1.0;
  const double h = snr * dbm_to_w(-174.0) * 180e3 / dbm_to_w(10.0);
  GainTensor g(2, 2, h);
  const auto r = compute_rates(e, eta, g, net);
  EXPECT_NEAR(r[0][1], 0.002 * 180000 * 2.22 / 800, 1e-9);
  EXPECT_NEAR(r[0][1], 1.0, 0.01);
}

TEST(Rates, CoChannelPairsInterfere) {
  const NetConfig net = quiet_net(2);
  Association e(4);
  e.pair(0, 1);
  e.pair(2, 3);
  RbAllocation eta(4, 2);
  eta.at(0, 1, 0) = eta.at(1, 0, 1) = 1;
  eta.at(2, 3, 0) = eta.at(3, 2, 1) = 1;
  GainTensor g(4, 2, 1e-9);
  const auto r = compute_rates(e, eta, g, net);
  const double i = interference_w(eta, g, 0, 1, 0, net);
  EXPECT_NEAR(i, dbm_to_w(10.0) * 1e-9, 1e-20);
  const double snr = dbm_to_w(10.0) * 1e-9 / (dbm_to_w(-174.0) * 180e3);
  const double alone = 0.002 / 800.0 * 180e3 * std::log2(1.0 + snr);
  EXPECT_LT(r[0][1], alone);
}

TEST(Rates, MonotoneInGainAndInterference) {
  const NetConfig net = quiet_net(2);
  Association e(4);
  e.pair(0, 1);
  e.pair(2, 3);
  RbAllocation eta(4, 2);
  eta.at(0, 1, 0) = eta.at(1, 0, 1) = 1;
  eta.at(2, 3, 0) = eta.at(3, 2, 1) = 1;
  double prev = -1.0;
  for (double h : {1e-12, 1e-10, 1e-8, 1e-6}) {
    GainTensor g(4, 2, 1e-10);
    g.at(0, 1, 0) = h;
    const double r = compute_rates(e, eta, g, net)[0][1];
    EXPECT_GE(r, prev);
    prev = r;
  }
  prev = 1e300;
  for (double hi : {1e-12, 1e-10, 1e-8}) {
    GainTensor g(4, 2, 1e-9);
    g.at(2, 1, 0) = hi;
    const double r = compute_rates(e, eta, g, net)[0][1];
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(Allocation, ViolationsNameTheConstraint) {
  auto message = [](const Association& e, const RbAllocation& eta) -> std::string {
    try {
      validate_allocation(e, eta);
    } catch (const ConstraintViolation& ex) {
      return ex.what();
    }
    return "";
  };
  Association e(3);
  e.at(0, 1) = 1;
  RbAllocation eta(3, 3);
  EXPECT_NE(message(e, eta).find("symmetric"), std::string::npos);
  e.pair(0, 1);
  eta.at(0, 1, 0) = eta.at(0, 1, 1) = 1;
  EXPECT_NE(message(e, eta).find("single_rb"), std::string::npos);
  RbAllocation same(3, 3);
  same.at(0, 1, 0) = same.at(1, 0, 0) = 1;
  EXPECT_NE(message(e, same).find("orthogonal"), std::string::npos);
  RbAllocation ok(3, 3);
  ok.at(0, 1, 0) = ok.at(1, 0, 2) = 1;
  EXPECT_EQ(message(e, ok), "");
}

TEST(RateCredit, CarriesFractionalResidue) {
  RateCredit c(2);
  std::vector<int> got;
  for (int s = 0; s < 5; ++s) got.push_back(c.budget(0, 1, 0.75));
  EXPECT_EQ(got, (std::vector<int>{0, 1, 1, 1, 0}));
  c.reset();
  EXPECT_EQ(c.budget(0, 1, 2.5), 2);
  EXPECT_EQ(c.budget(0, 1, 0.5), 1);
  EXPECT_EQ(c.budget(1, 0, 0.0), 0);
}
