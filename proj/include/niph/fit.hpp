#pragma once

#include <cstdint>
#include <vector>

#include "niph/model.hpp"

namespace niph {

/// A measured shift-diagram peak for a 2D probe (angle psi, factor S).
struct PeakObservation {
  double psi = 0.0;
  double factor = 1.0;
  double peak = 1.0;
  int dim = 1;
};

/// Search box for (phi, V, s); phi always ranges over [0, pi).
struct FitBounds {
  double var_max = 1.0;
  double s_min = 1.0;
  double s_max = 10.0;

  void validate() const;
};

struct FitConfig {
  int evaluations = 5000;
  int restarts = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  PeakModelConfig model;
  /// The residual is often flat in s: every s at or above the largest probe
  /// factor gives the same modeled peaks, and sparse directions can miss the
  /// long axis below it. When set, the reported s is the largest probe
  /// factor if it fits as well as the optimum, otherwise the smallest s that
  /// does.
  bool resolve_flat_s = true;
};

struct FitResult {
  double phi = 0.0;
  double var = 0.0;
  double s = 1.0;
  double residual = 0.0;
  int evaluations = 0;

  double sqrt_var() const;
};

/// Sum of squared differences between model and observed peaks.
double fit_residual(const std::vector<PeakObservation>& obs, double phi, double var, double s,
                    const PeakModelConfig& model = {});

/// Minimizes fit_residual over the bounds box: annealing restarts followed
/// by a simplex polish of each, keeping the best (lowest restart index on ties).
FitResult fit_parameters(const std::vector<PeakObservation>& obs, const FitBounds& bounds = {},
                         const FitConfig& cfg = {});

/// Distance between two axial angles (radians, mod pi) in degrees, in [0, 90].
double angular_error(double a, double b);

}  // namespace niph
