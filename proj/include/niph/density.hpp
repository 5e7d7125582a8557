#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace niph {

/// Gaussian KDE sampled on a uniform grid.
struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> values;
  double bandwidth = 0.0;

  bool empty() const { return grid.empty(); }
  /// Trapezoid rule over the grid.
  double integral() const;
};

struct KdeConfig {
  std::size_t grid_points = 512;
  /// Grid spans [min - pad*h, max + pad*h].
  double pad_bandwidths = 4.0;
  /// Refine the grid argmax with a 3-point parabola.
  bool refine_peak = true;
};

/// Weighted Scott's rule: sigma_w * n_eff^(-1/5) with n_eff = (sum w)^2 / sum w^2.
/// Throws DegenerateInput when the weighted standard deviation is zero.
double scott_bandwidth(std::span<const double> samples, std::span<const double> weights);

/// f(x) = sum_i w_i N(x; x_i, h^2) with weights normalized to sum 1.
DensityCurve kde(std::span<const double> samples, std::span<const double> weights, double bandwidth,
                 const KdeConfig& cfg = {});

/// Location of the curve maximum; ties go to the smallest x. With
/// `refine` the interior argmax is moved to the vertex of the parabola
/// through it and its two neighbors.
double find_peak(const DensityCurve& curve, bool refine = false);

}  // namespace niph
