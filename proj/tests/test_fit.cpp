#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "niph/error.hpp"
#include "niph/fit.hpp"
#include "niph/random.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<niph::PeakObservation> synthesize(double phi, double V, double s, int dim = 1, double S = 2.0,
                                              double offset = 0.0, int k = 8) {
  std::vector<niph::PeakObservation> obs;
  for (int j = 0; j < k; ++j) {
    const double psi = offset + j * kPi / k;
    obs.push_back({psi, S, niph::expected_peak(dim, psi, S, phi, V, s), dim});
  }
  return obs;
}

TEST(AngularError, Examples) {
  EXPECT_NEAR(niph::angular_error(0.0, kPi), 0.0, 1e-12);
  EXPECT_NEAR(niph::angular_error(0.1, 0.2), 5.7296, 1e-4);
  EXPECT_NEAR(niph::angular_error(0.05, kPi - 0.05), 5.7296, 1e-4);
  EXPECT_NEAR(niph::angular_error(0.0, kPi / 2), 90.0, 1e-12);
  EXPECT_NEAR(niph::angular_error(-3.0, 3.0), niph::angular_error(3.0, -3.0), 1e-12);
}

TEST(FitResidual, ZeroAtGroundTruth) {
  const auto obs = synthesize(0.5, 0.05, 1.7);
  EXPECT_EQ(niph::fit_residual(obs, 0.5, 0.05, 1.7), 0.0);
  EXPECT_GT(niph::fit_residual(obs, 0.6, 0.05, 1.7), 0.0);
}

TEST(FitParameters, RecoversSharpModel) {
  const auto obs = synthesize(0.5, 0.0, 2.0);
  const auto r = niph::fit_parameters(obs);
  EXPECT_LT(std::abs(r.phi - 0.5), 1e-3);
  EXPECT_LT(std::abs(r.s - 2.0), 1e-2);
  EXPECT_LT(r.var, 1e-4);
  EXPECT_GE(r.residual, 0.0);
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_GT(r.evaluations, 0);
}

TEST(FitParameters, RecoversFoldedModel) {
  const auto obs = synthesize(2.0, 0.05, 1.5);
  const auto r = niph::fit_parameters(obs);
  EXPECT_LT(niph::angular_error(r.phi, 2.0), 0.06);
  EXPECT_NEAR(r.s, 1.5, 1e-2);
  EXPECT_NEAR(r.var, 0.05, 1e-3);
  EXPECT_NEAR(r.sqrt_var(), std::sqrt(r.var), 0.0);
}

TEST(FitParameters, ZeroDimensionalModel) {
  const auto obs = synthesize(1.0, 0.0, 1.6, 0, 2.0);
  const auto r = niph::fit_parameters(obs);
  EXPECT_LT(niph::angular_error(r.phi, 1.0), 0.06);
  EXPECT_NEAR(r.s, 1.6, 1e-2);
}

TEST(FitParameters, PhiIsCanonical) {
  // Ground truth given as phi + pi must come back in [0, pi).
  const auto obs = synthesize(0.3 + kPi, 0.0, 1.8);
  const auto r = niph::fit_parameters(obs);
  EXPECT_GE(r.phi, 0.0);
  EXPECT_LT(r.phi, kPi);
  EXPECT_LT(std::abs(r.phi - 0.3), 1e-3);
}

TEST(FitParameters, RotationEquivariance) {
  niph::Rng rng(5);
  const auto base = niph::fit_parameters(synthesize(0.4, 0.0, 1.7));
  for (int t = 0; t < 3; ++t) {
    const double theta = rng.uniform(0.0, kPi);
    auto obs = synthesize(0.4, 0.0, 1.7);
    for (auto& o : obs) o.psi += theta;
    const auto r = niph::fit_parameters(obs);
    EXPECT_LT(niph::angular_error(r.phi, base.phi + theta), 0.06);
    EXPECT_NEAR(r.s, base.s, 1e-2);
    EXPECT_NEAR(r.var, base.var, 1e-3);
  }
}

TEST(FitParameters, SeedDeterministicAndThreadIndependent) {
  const auto obs = synthesize(1.2, 0.02, 1.4);
  niph::FitConfig a;
  a.seed = 3;
  a.evaluations = 1500;
  auto b = a;
  b.threads = 4;
  const auto ra = niph::fit_parameters(obs, {}, a);
  const auto rb = niph::fit_parameters(obs, {}, b);
  EXPECT_EQ(ra.phi, rb.phi);
  EXPECT_EQ(ra.var, rb.var);
  EXPECT_EQ(ra.s, rb.s);
  EXPECT_EQ(ra.evaluations, rb.evaluations);
}

TEST(FitParameters, FlatScalingResolvesToLargestFactor) {
  // With S = 2 the second branch never wins once s >= 2, so every s >= 2 fits.
  const auto obs = synthesize(0.7, 0.0, 3.0);
  const auto r = niph::fit_parameters(obs);
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_EQ(r.s, 2.0);
  niph::FitConfig raw;
  raw.resolve_flat_s = false;
  const auto k = niph::fit_parameters(obs, {}, raw);
  EXPECT_LT(k.residual, 1e-12);
  EXPECT_GE(k.s, 2.0 - 1e-3);
}

TEST(FitParameters, IdentifiableScalingIsKept) {
  // s well below S: the orthogonal observations see the long axis.
  const auto obs = synthesize(0.9, 0.0, 1.4);
  const auto r = niph::fit_parameters(obs);
  EXPECT_NEAR(r.s, 1.4, 1e-6);
}

TEST(FitParameters, StaysInBounds) {
  niph::FitBounds bounds;
  bounds.var_max = 0.1;
  bounds.s_max = 1.5;
  const auto r = niph::fit_parameters(synthesize(0.2, 0.5, 3.0), bounds);
  EXPECT_LE(r.var, 0.1);
  EXPECT_LE(r.s, 1.5);
  EXPECT_GE(r.s, 1.0);
}

TEST(FitParameters, Errors) {
  auto obs = synthesize(0.5, 0.0, 2.0);
  EXPECT_THROW(niph::fit_parameters({obs[0], obs[1]}), niph::InvalidInput);
  auto same = obs;
  for (auto& o : same) o.psi = 0.3;
  EXPECT_THROW(niph::fit_parameters(same), niph::InvalidInput);
  auto mixed = obs;
  mixed[0].dim = 0;
  EXPECT_THROW(niph::fit_parameters(mixed), niph::InvalidInput);
  auto bad = obs;
  bad[0].peak = 0.0;
  EXPECT_THROW(niph::fit_parameters(bad), niph::InvalidInput);
  niph::FitBounds empty;
  empty.s_max = 0.5;
  EXPECT_THROW(niph::fit_parameters(obs, empty), niph::InvalidInput);
  niph::FitBounds negative;
  negative.var_max = -1.0;
  EXPECT_THROW(niph::fit_parameters(obs, negative), niph::InvalidInput);
}

}  // namespace
