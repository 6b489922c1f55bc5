#include <gtest/gtest.h>

#include <cmath>

#include "vcp/sensing.hpp"

using namespace vcp;

namespace {

VehicleState at(Vec2 p, double speed = 10.0, double heading = 0.0, double reliability = 1.0) {
  VehicleState v;
  v.id = 1;
  v.position = p;
  v.speed = speed;
  v.heading = heading;
  v.reliability = reliability;
  return v;
}

GroundTruth static_truth(const World& w) { return w.static_map(); }

}  // namespace

TEST(Occupancy, Goldens) {
  EXPECT_DOUBLE_EQ(occupancy_probability(CellState::Occupied, 0.9), 0.9);
  EXPECT_DOUBLE_EQ(occupancy_probability(CellState::Unknown, 0.7), 0.5);
  EXPECT_DOUBLE_EQ(occupancy_probability(CellState::Unoccupied, 1.0), 0.0);
}

TEST(CellValue, Goldens) {
  EXPECT_DOUBLE_EQ(cell_value(0.5, 3.0, 0.9), 0.0);
  EXPECT_DOUBLE_EQ(cell_value(1.0, 0.0, 0.9), 1.0);
  EXPECT_NEAR(cell_value(1.0, 2.0, 0.9), 0.81, 1e-12);
  EXPECT_NEAR(cell_value(0.0, 1.0, 0.9), 0.9, 1e-12);
}

TEST(CellValue, NonIncreasingInAge) {
  for (double p : {0.0, 0.1, 0.8, 1.0}) {
    double prev = 2.0;
    for (int k = 0; k < 50; ++k) {
      const double q = cell_value(p, 0.1 * k, 0.9);
      EXPECT_LE(q, prev);
      prev = q;
    }
  }
}

TEST(ModifiedInterest, Goldens) {
  EXPECT_DOUBLE_EQ(modified_interest(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(modified_interest(0.0, 0.0), 0.0);
  EXPECT_NEAR(modified_interest(0.5, 0.19), 0.405, 1e-12);
}

TEST(Sense, ErrorFreeSensorReportsTruthOnVisibleCells) {
  WorldConfig c;
  World w(c);
  const auto truth = static_truth(w);
  const auto v = at(c.center());
  Rng rng(1);
  const auto s = sense(w, v, truth, 0.0, rng);
  int visible = 0;
  for (int ly = 0; ly < s.side; ++ly)
    for (int lx = 0; lx < s.side; ++lx) {
      const CellState st = s.states.at(lx, ly);
      if (st == CellState::Unknown) continue;
      ++visible;
      EXPECT_EQ(st, truth.at(s.origin_ix + lx, s.origin_iy + ly));
    }
  EXPECT_GT(visible, 100);
}

TEST(Sense, OutOfRangeIsUnknown) {
  WorldConfig c;
  World w(c);
  const auto v = at(c.center());
  Rng rng(1);
  const auto s = sense(w, v, static_truth(w), 0.0, rng);
  for (int ly = 0; ly < s.side; ++ly)
    for (int lx = 0; lx < s.side; ++lx) {
      const Vec2 p = w.cell_center(s.origin_ix + lx, s.origin_iy + ly);
      if (norm(p - v.position) > v.sensing_radius_m) EXPECT_EQ(s.states.at(lx, ly), CellState::Unknown);
    }
}

TEST(Sense, CellBehindOccupiedCellIsUnknown) {
  WorldConfig c;
  World w(c);
  // Looking diagonally into the NE building from the junction centre: the facade
  // is visible, the cells behind it are not.
  const Vec2 ctr = c.center();
  const auto v = at(ctr);
  Rng rng(1);
  const auto s = sense(w, v, static_truth(w), 0.0, rng);
  const auto b = buildings(c)[3];
  const CellIndex facade = w.cell_of({b.x0 + 0.1, b.y0 + 0.1});
  const CellIndex inner = w.cell_of({b.x0 + 5.0, b.y0 + 5.0});
  EXPECT_EQ(s.at_world(facade.ix, facade.iy), CellState::Occupied);
  EXPECT_EQ(s.at_world(inner.ix, inner.iy), CellState::Unknown);
}

TEST(Sense, NoisySensorFlipsAtTheStatedRate) {
  WorldConfig c;
  World w(c);
  const auto truth = static_truth(w);
  const auto v = at(c.center(), 10, 0, 0.8);
  Rng rng(3);
  long long same = 0, total = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const auto s = sense(w, v, truth, 0.0, rng);
    for (int ly = 0; ly < s.side; ++ly)
      for (int lx = 0; lx < s.side; ++lx) {
        const CellState st = s.states.at(lx, ly);
        if (st == CellState::Unknown) continue;
        ++total;
        same += st == truth.at(s.origin_ix + lx, s.origin_iy + ly);
      }
  }
  const double rate = static_cast<double>(same) / static_cast<double>(total);
  const double sd = std::sqrt(0.8 * 0.2 / static_cast<double>(total));
  EXPECT_NEAR(rate, 0.8, 5 * sd);
}

TEST(PerceptionMap, IntegrateThenAdoptOnlyBetterValue) {
  WorldConfig c;
  World w(c);
  PerceptionMap m(w.cells());
  EXPECT_EQ(m.value(3, 3, 0.0, 0.9), 0.0);
  EXPECT_TRUE(m.adopt(3, 3, 1.0, 0.0, 1.0, 0.9));
  EXPECT_NEAR(m.value(3, 3, 1.0, 0.9), 0.9, 1e-12);
  EXPECT_FALSE(m.adopt(3, 3, 1.0, -1.0, 1.0, 0.9));  // older, worth less
  EXPECT_TRUE(m.adopt(3, 3, 0.0, 0.5, 1.0, 0.9));
  EXPECT_NEAR(m.probability(3, 3), 0.0, 1e-7);
  m.reset();
  EXPECT_EQ(m.value(3, 3, 1.0, 0.9), 0.0);
}

TEST(InterestField, BlockSumsMatchBruteForceAndStayInRange) {
  WorldConfig c;
  World w(c);
  PerceptionMap m(w.cells());
  const auto v = at(c.center() - Vec2{20, 2.5}, 12, 0.0);
  Rng rng(2);
  m.integrate(sense(w, v, w.static_map(), 0.0, rng), 1.0);
  SensingParams p;
  const auto f = InterestField::compute(w, v, m, 0.5, p);
  double total = 0.0;
  for (int iy = 0; iy < w.cells(); ++iy)
    for (int ix = 0; ix < w.cells(); ++ix) {
      const double i = f.at(ix, iy);
      EXPECT_GE(i, 0.0);
      EXPECT_LE(i, 1.0);
      const double wgt = roi_weight(v, w.cell_center(ix, iy), p.t_int_s);
      if (wgt == 0.0) EXPECT_EQ(i, 0.0);
      EXPECT_NEAR(i, modified_interest(wgt, m.value(ix, iy, 0.5, p.mu)), 1e-12);
      total += i;
    }
  EXPECT_NEAR(f.total(), total, 1e-9);
  const CellIndex o = w.cell_of(v.position);
  for (int side : {1, 2, 4, 8, 16}) {
    double brute = 0.0;
    for (int iy = o.iy; iy < o.iy + side; ++iy)
      for (int ix = o.ix; ix < o.ix + side; ++ix) brute += f.at(ix, iy);
    EXPECT_NEAR(f.block_sum(o.ix, o.iy, side), brute, 1e-9);
  }
  const auto g = f.scaled(3.0);
  EXPECT_NEAR(g.total(), 3.0 * f.total(), 1e-9);
}
