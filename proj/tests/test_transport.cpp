#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "niph/error.hpp"
#include "niph/random.hpp"
#include "niph/transport.hpp"
#include "oracles/ot_oracle.hpp"

namespace {

using niph::WeightedDeaths;

WeightedDeaths dist(std::vector<double> deaths, std::vector<double> weights) {
  WeightedDeaths d;
  d.deaths = std::move(deaths);
  d.weights = std::move(weights);
  d.pair_refs.resize(d.deaths.size());
  return d;
}

WeightedDeaths random_dist(niph::Rng& rng, std::size_t max_atoms) {
  const std::size_t n = 1 + rng.below(max_atoms);
  WeightedDeaths d;
  for (std::size_t k = 0; k < n; ++k) {
    d.deaths.push_back(rng.uniform(0.1, 5.0));
    d.weights.push_back(rng.uniform(0.05, 2.0));
    d.pair_refs.push_back(k);
  }
  return d;
}

double mass_at(const niph::TransportPlan& p, std::size_t i, std::size_t j) {
  double m = 0.0;
  for (const auto& e : p.entries) {
    if (e.i == i && e.j == j) m += e.mass;
  }
  return m;
}

TEST(Ot1d, IdentityPlan) {
  const auto mu = dist({3.0, 1.0, 2.0}, {1.0, 2.0, 1.0});
  const auto plan = niph::ot_1d(mu, mu);
  for (const auto& e : plan.entries) EXPECT_EQ(e.i, e.j);
  EXPECT_EQ(niph::transport_cost(plan, mu, mu), 0.0);
}

TEST(Ot1d, OneToOne) {
  const auto mu = dist({1.0, 2.0}, {0.5, 0.5});
  const auto nu = dist({1.5, 3.0}, {0.5, 0.5});
  const auto plan = niph::ot_1d(mu, nu);
  EXPECT_NEAR(mass_at(plan, 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(mass_at(plan, 1, 1), 0.5, 1e-15);
  EXPECT_EQ(plan.entries.size(), 2u);
}

TEST(Ot1d, SplitMass) {
  const auto plan = niph::ot_1d(dist({1.0}, {1.0}), dist({2.0, 3.0}, {0.5, 0.5}));
  EXPECT_NEAR(mass_at(plan, 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(mass_at(plan, 0, 1), 0.5, 1e-15);
}

TEST(Ot1d, MatchesMinCostFlowOracle) {
  niph::Rng rng(123);
  for (int t = 0; t < 500; ++t) {
    const auto mu = random_dist(rng, 6);
    const auto nu = random_dist(rng, 6);
    const auto plan = niph::ot_1d(mu, nu);
    const double expect = oracle::min_cost_transport(mu.deaths, mu.weights, nu.deaths, nu.weights);
    EXPECT_NEAR(niph::transport_cost(plan, mu, nu), expect, 1e-9) << "instance " << t;
  }
}

TEST(Ot1d, MarginalsAndNonCrossing) {
  niph::Rng rng(7);
  for (int t = 0; t < 300; ++t) {
    const auto mu = random_dist(rng, 20);
    const auto nu = random_dist(rng, 20);
    const auto plan = niph::ot_1d(mu, nu);
    const auto rows = plan.row_sums();
    const auto cols = plan.col_sums();
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_NEAR(rows[i], plan.source_mass[i], 1e-9);
    for (std::size_t j = 0; j < cols.size(); ++j) EXPECT_NEAR(cols[j], plan.target_mass[j], 1e-9);
    for (const auto& e : plan.entries) EXPECT_GE(e.mass, 0.0);
    for (const auto& a : plan.entries) {
      for (const auto& b : plan.entries) {
        if (mu.deaths[a.i] < mu.deaths[b.i]) EXPECT_LE(nu.deaths[a.j], nu.deaths[b.j]);
      }
    }
  }
}

TEST(Ot1d, RejectsInvalidDistributions) {
  EXPECT_THROW(niph::ot_1d(dist({}, {}), dist({1.0}, {1.0})), niph::InvalidInput);
  EXPECT_THROW(niph::ot_1d(dist({1.0}, {0.0}), dist({1.0}, {1.0})), niph::InvalidInput);
  EXPECT_THROW(niph::ot_1d(dist({0.0}, {1.0}), dist({1.0}, {1.0})), niph::InvalidInput);
  EXPECT_THROW(niph::ot_1d(dist({1.0, 2.0}, {1.0}), dist({1.0}, {1.0})), niph::InvalidInput);
}

TEST(MultShifts, IdentityPlanGivesOnes) {
  const auto mu = dist({1.0, 2.0, 5.0}, {1.0, 1.0, 1.0});
  const auto s = niph::mult_shifts(niph::ot_1d(mu, mu), mu, mu);
  for (double v : s.shifts) EXPECT_EQ(v, 1.0);
}

TEST(MultShifts, RatioForm) {
  const auto mu = dist({1.0, 2.0}, {0.5, 0.5});
  const auto nu = dist({1.5, 3.0}, {0.5, 0.5});
  const auto s = niph::mult_shifts(niph::ot_1d(mu, nu), mu, nu);
  ASSERT_EQ(s.shifts.size(), 2u);
  EXPECT_NEAR(s.shifts[0], 1.5, 1e-15);
  EXPECT_NEAR(s.shifts[1], 1.5, 1e-15);
  EXPECT_EQ(s.weights, (std::vector<double>{0.5, 0.5}));
}

TEST(MultShifts, SplitRowIsGeometricMean) {
  const auto mu = dist({1.0}, {1.0});
  const auto nu = dist({2.0, 8.0}, {0.5, 0.5});
  const auto s = niph::mult_shifts(niph::ot_1d(mu, nu), mu, nu);
  ASSERT_EQ(s.shifts.size(), 1u);
  EXPECT_NEAR(s.shifts[0], 4.0, 1e-12);
}

TEST(MultShifts, ZeroMassRowsAreDropped) {
  const auto mu = dist({1.0, 2.0}, {1.0, 0.0});
  const auto nu = dist({3.0}, {1.0});
  const auto s = niph::mult_shifts(niph::ot_1d(mu, nu), mu, nu);
  EXPECT_EQ(s.shifts.size(), 1u);
  EXPECT_EQ(s.dropped, (std::vector<std::size_t>{1}));
  EXPECT_EQ(s.source, (std::vector<std::size_t>{0}));
}

TEST(MultShifts, ScaleFree) {
  niph::Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto mu = random_dist(rng, 15);
    const auto nu = random_dist(rng, 15);
    const auto base = niph::mult_shifts(niph::ot_1d(mu, nu), mu, nu);
    const double c = rng.uniform(0.01, 100.0);
    auto mu2 = mu, nu2 = nu;
    for (auto& d : mu2.deaths) d *= c;
    for (auto& d : nu2.deaths) d *= c;
    const auto scaled = niph::mult_shifts(niph::ot_1d(mu2, nu2), mu2, nu2);
    ASSERT_EQ(base.shifts.size(), scaled.shifts.size());
    for (std::size_t k = 0; k < base.shifts.size(); ++k) EXPECT_NEAR(base.shifts[k], scaled.shifts[k], 1e-12);
  }
}

TEST(MultShifts, RejectsMismatchedPlan) {
  const auto mu = dist({1.0, 2.0}, {1.0, 1.0});
  const auto nu = dist({1.0}, {1.0});
  const auto plan = niph::ot_1d(mu, nu);
  EXPECT_THROW(niph::mult_shifts(plan, nu, mu), niph::InvalidInput);
}

TEST(Sinkhorn, ApproachesExactCost) {
  niph::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto mu = random_dist(rng, 6);
    const auto nu = random_dist(rng, 6);
    niph::SinkhornConfig cfg;
    cfg.lambda = 0.01;
    const auto plan = niph::ot_sinkhorn(mu, nu, cfg);
    const auto rows = plan.row_sums();
    const auto cols = plan.col_sums();
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_NEAR(rows[i], plan.source_mass[i], 1e-8);
    for (std::size_t j = 0; j < cols.size(); ++j) EXPECT_NEAR(cols[j], plan.target_mass[j], 1e-8);
    const double exact = niph::transport_cost(niph::ot_1d(mu, nu), mu, nu);
    const double approx = niph::transport_cost(plan, mu, nu);
    EXPECT_GE(approx, exact - 1e-6);
    EXPECT_NEAR(approx, exact, 0.05 * std::max(1.0, exact));
  }
  EXPECT_THROW(niph::ot_sinkhorn(dist({1.0}, {1.0}), dist({1.0}, {1.0}), {0.0}), niph::InvalidInput);
}

TEST(ShiftDiagram, AllOnes) {
  const auto d = niph::shift_diagram({1.0, 1.0, 1.0}, {1.0, 2.0, 1.0}, std::nullopt);
  EXPECT_EQ(d.peak, 1.0);
  EXPECT_TRUE(d.degenerate);
  for (double v : d.density.values) EXPECT_GE(v, 0.0);
}

TEST(ShiftDiagram, HeavierModeWins) {
  const auto d = niph::shift_diagram({1.5, 1.5, 1.5, 1.5, 1.0}, {1, 1, 1, 1, 1}, std::nullopt);
  EXPECT_NEAR(d.peak, 1.5, d.density.grid[1] - d.density.grid[0]);
  EXPECT_FALSE(d.degenerate);
}

TEST(ShiftDiagram, PeakInsideShiftRange) {
  niph::Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s, w;
    const int n = 2 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
      s.push_back(rng.uniform(0.5, 3.0));
      w.push_back(rng.uniform(0.0, 1.0));
    }
    w[0] = 1.0;
    const auto d = niph::shift_diagram(s, w, niph::Probe::from_angle(0.2, 2.0));
    EXPECT_GE(d.peak, *std::min_element(s.begin(), s.end()));
    EXPECT_LE(d.peak, *std::max_element(s.begin(), s.end()));
    ASSERT_TRUE(d.probe.has_value());
    for (double v : d.density.values) EXPECT_GE(v, 0.0);
  }
}

TEST(ShiftDiagram, Errors) {
  EXPECT_THROW(niph::shift_diagram({}, {}, std::nullopt), niph::InvalidInput);
  EXPECT_THROW(niph::shift_diagram({1.0}, {0.0}, std::nullopt), niph::InvalidInput);
  EXPECT_THROW(niph::shift_diagram({-1.0}, {1.0}, std::nullopt), niph::InvalidInput);
}

}  // namespace
