#pragma once

#include "niph/geometry.hpp"

namespace niph {

struct PcaOrientation {
  /// Angle of the leading covariance eigenvector in [0, pi).
  double angle = 0.0;
  /// lambda_1 / lambda_2; +inf for collinear data.
  double ratio = 1.0;
};

/// Global orientation of a 2D cloud from its sample covariance.
PcaOrientation pca_orientation(const PointCloud& cloud);

}  // namespace niph
