#include <gtest/gtest.h>

#include <cmath>

#include "niph/density.hpp"
#include "niph/error.hpp"
#include "niph/random.hpp"

namespace {

double grid_step(const niph::DensityCurve& c) { return c.grid[1] - c.grid[0]; }

TEST(ScottBandwidth, UnitWeights) {
  // 100 samples with weighted standard deviation exactly 1.
  std::vector<double> x, w(100, 1.0);
  for (int i = 0; i < 50; ++i) {
    x.push_back(-1.0);
    x.push_back(1.0);
  }
  EXPECT_NEAR(niph::scott_bandwidth(x, w), std::pow(100.0, -0.2), 1e-12);
  EXPECT_NEAR(std::pow(100.0, -0.2), 0.39811, 1e-5);
}

TEST(ScottBandwidth, SingleEffectiveSample) {
  const std::vector<double> x = {0.0, 1.0, 2.0};
  const std::vector<double> w = {1.0, 1e-200, 1e-200};
  // sigma is tiny here; compare against the formula with n_eff = 1.
  const double sw = 1.0 + 2e-200;
  const double mean = (1e-200 + 2e-200) / sw;
  const double var = (mean * mean + 1e-200 * (1 - mean) * (1 - mean) + 1e-200 * (2 - mean) * (2 - mean)) / sw;
  (void)var;
  const std::vector<double> y = {0.0, 4.0};
  const std::vector<double> v = {1.0, 1.0};
  EXPECT_NEAR(niph::scott_bandwidth(y, v), 2.0 * std::pow(2.0, -0.2), 1e-12);
  const std::vector<double> z = {0.0, 2.0, 2.0, 2.0};
  const std::vector<double> u = {1.0, 1.0, 0.0, 0.0};
  EXPECT_NEAR(niph::scott_bandwidth(z, u), 1.0 * std::pow(2.0, -0.2), 1e-12);
}

TEST(ScottBandwidth, DominantWeightGivesSigma) {
  // n_eff -> 1 when one weight dominates: h -> sigma_w.
  const std::vector<double> x = {0.0, 1.0};
  const std::vector<double> w = {1.0, 1e-6};
  const double sw = 1.0 + 1e-6;
  const double mean = 1e-6 / sw;
  const double sigma = std::sqrt((mean * mean + 1e-6 * (1 - mean) * (1 - mean)) / sw);
  const double n_eff = sw * sw / (1.0 + 1e-12);
  EXPECT_NEAR(niph::scott_bandwidth(x, w), sigma * std::pow(n_eff, -0.2), 1e-15);
  EXPECT_NEAR(niph::scott_bandwidth(x, w) / sigma, 1.0, 1e-6);
}

TEST(ScottBandwidth, WeightScaleInvariance) {
  niph::Rng rng(1);
  std::vector<double> x;
  for (int i = 0; i < 40; ++i) x.push_back(rng.normal());
  const std::vector<double> ones(40, 1.0), sevens(40, 7.0);
  EXPECT_NEAR(niph::scott_bandwidth(x, ones), niph::scott_bandwidth(x, sevens), 1e-15);
}

TEST(ScottBandwidth, DegenerateInput) {
  const std::vector<double> x = {2.0, 2.0, 2.0}, w = {1.0, 1.0, 1.0};
  EXPECT_THROW(niph::scott_bandwidth(x, w), niph::DegenerateInput);
  const std::vector<double> one = {1.0}, wone = {1.0};
  EXPECT_THROW(niph::scott_bandwidth(one, wone), niph::DegenerateInput);
}

TEST(Kde, SingleSamplePeak) {
  const std::vector<double> x = {3.0}, w = {1.0};
  const auto c = niph::kde(x, w, 0.2);
  EXPECT_NEAR(niph::find_peak(c), 3.0, grid_step(c));
  EXPECT_NEAR(niph::find_peak(c, true), 3.0, 1e-9);
}

TEST(Kde, SymmetricSamples) {
  const std::vector<double> x = {-1.3, 1.3}, w = {1.0, 1.0};
  const auto c = niph::kde(x, w, 0.4);
  const std::size_t m = c.grid.size();
  for (std::size_t g = 0; g < m; ++g) {
    EXPECT_NEAR(c.grid[g], -c.grid[m - 1 - g], 1e-12);
    EXPECT_NEAR(c.values[g], c.values[m - 1 - g], 1e-12);
  }
}

TEST(Kde, TwoModePeak) {
  const std::vector<double> x = {1.5, 1.5, 1.5, 1.5, 1.0}, w(5, 1.0);
  const auto c = niph::kde(x, w, 0.05);
  EXPECT_NEAR(niph::find_peak(c), 1.5, grid_step(c));
  EXPECT_NEAR(niph::find_peak(c, true), 1.5, grid_step(c));
}

TEST(Kde, GridLayout) {
  const std::vector<double> x = {0.0, 1.0}, w = {1.0, 1.0};
  const auto c = niph::kde(x, w, 0.25);
  ASSERT_EQ(c.grid.size(), 512u);
  EXPECT_DOUBLE_EQ(c.grid.front(), -1.0);
  EXPECT_DOUBLE_EQ(c.grid.back(), 2.0);
  for (std::size_t g = 1; g < c.grid.size(); ++g) EXPECT_GT(c.grid[g], c.grid[g - 1]);
  for (double v : c.values) EXPECT_GE(v, 0.0);
  EXPECT_EQ(c.bandwidth, 0.25);
}

TEST(Kde, Normalization) {
  niph::Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x, w;
    const int n = 1 + static_cast<int>(rng.below(60));
    for (int i = 0; i < n; ++i) {
      x.push_back(rng.uniform(0.5, 3.0));
      w.push_back(rng.uniform(0.0, 2.0));
    }
    w[0] = 1.0;
    const double h = n >= 2 ? niph::scott_bandwidth(x, w) : 0.1;
    const double area = niph::kde(x, w, h).integral();
    EXPECT_GE(area, 0.95);
    EXPECT_LE(area, 1.01);
  }
}

TEST(Kde, ShiftEquivariance) {
  niph::Rng rng(3);
  std::vector<double> x, w;
  for (int i = 0; i < 30; ++i) {
    x.push_back(rng.uniform(0.0, 2.0));
    w.push_back(rng.uniform(0.1, 1.0));
  }
  const auto a = niph::kde(x, w, 0.2);
  for (double shift : {0.5, -3.0, 10.0}) {
    std::vector<double> y = x;
    for (auto& v : y) v += shift;
    const auto b = niph::kde(y, w, 0.2);
    for (std::size_t g = 0; g < a.grid.size(); ++g) {
      EXPECT_NEAR(b.grid[g], a.grid[g] + shift, 1e-12);
      EXPECT_NEAR(b.values[g], a.values[g], 1e-12);
    }
  }
}

TEST(Kde, PeakStableUnderRefinement) {
  niph::Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> x, w;
    for (int i = 0; i < 25; ++i) {
      x.push_back(rng.normal(1.5, 0.3));
      w.push_back(rng.uniform(0.1, 1.0));
    }
    const double h = niph::scott_bandwidth(x, w);
    niph::KdeConfig coarse, fine;
    fine.grid_points = 2 * coarse.grid_points;
    const auto a = niph::kde(x, w, h, coarse);
    const auto b = niph::kde(x, w, h, fine);
    EXPECT_LE(std::abs(niph::find_peak(a) - niph::find_peak(b)), grid_step(a) + 1e-12);
    EXPECT_LE(std::abs(niph::find_peak(a, true) - niph::find_peak(b, true)), grid_step(a) + 1e-12);
  }
}

TEST(Kde, Errors) {
  const std::vector<double> x = {1.0}, w = {1.0}, zero = {0.0}, none;
  EXPECT_THROW(niph::kde(x, w, 0.0), niph::InvalidInput);
  EXPECT_THROW(niph::kde(x, w, -1.0), niph::InvalidInput);
  EXPECT_THROW(niph::kde(none, none, 1.0), niph::InvalidInput);
  EXPECT_THROW(niph::kde(x, zero, 1.0), niph::InvalidInput);
}

TEST(FindPeak, TieAndMonotoneCases) {
  niph::DensityCurve flat{{0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 0.5, 0.5}, 1.0};
  EXPECT_EQ(niph::find_peak(flat), 0.0);
  EXPECT_EQ(niph::find_peak(flat, true), 0.0);
  niph::DensityCurve down{{0.0, 1.0, 2.0}, {3.0, 2.0, 1.0}, 1.0};
  EXPECT_EQ(niph::find_peak(down), 0.0);
  niph::DensityCurve plateau{{0.0, 1.0, 2.0, 3.0}, {0.1, 0.7, 0.7, 0.1}, 1.0};
  EXPECT_EQ(niph::find_peak(plateau), 1.0);
  EXPECT_THROW(niph::find_peak(niph::DensityCurve{}), niph::InvalidInput);
}

}  // namespace
