#include "niph/pca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "niph/error.hpp"
#include "niph/persistence.hpp"

namespace niph {

PcaOrientation pca_orientation(const PointCloud& cloud) {
  if (cloud.dim() != 2) throw InvalidInput("pca: cloud must be 2-dimensional");
  if (cloud.size() < 2) throw DegenerateInput("pca: at least 2 points required");
  const std::size_t n = cloud.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += cloud.x(i);
    my += cloud.y(i);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = cloud.x(i) - mx;
    const double dy = cloud.y(i) - my;
    cov(0, 0) += dx * dx;
    cov(0, 1) += dx * dy;
    cov(1, 1) += dy * dy;
  }
  cov(1, 0) = cov(0, 1);
  cov /= static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
  const double l1 = solver.eigenvalues()(1);
  const double l2 = std::max(solver.eigenvalues()(0), 0.0);
  if (!(l1 > 0.0)) throw DegenerateInput("pca: covariance is zero");
  const Eigen::Vector2d v = solver.eigenvectors().col(1);
  PcaOrientation out;
  out.angle = canonical_angle(std::atan2(v(1), v(0)));
  out.ratio = l2 > 1e-15 * l1 ? l1 / l2 : kInfinity;
  return out;
}

}  // namespace niph
