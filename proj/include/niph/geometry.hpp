#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace niph {

/// Finite set of points in R^n stored row-major. Every point has the same
/// dimension and all coordinates are finite; both are checked on insertion.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::size_t dim);
  /// Takes ownership of a flat row-major coordinate buffer.
  PointCloud(std::size_t dim, std::vector<double> coords);

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double x(std::size_t i) const { return coords_[i * dim_]; }
  double y(std::size_t i) const { return coords_[i * dim_ + 1]; }

  void push_back(std::span<const double> p);
  void push_back(double x, double y);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  const std::vector<double>& coords() const { return coords_; }

  /// Free-form description of where the cloud came from (generator spec,
  /// file name); carried into reports.
  std::string provenance;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Direction u (unit vector) and stretch factor alpha of a metric deformation.
class Probe {
 public:
  Probe(std::vector<double> direction, double factor);

  /// 2D probe along (cos psi, sin psi). psi is canonicalized to [0, pi)
  /// because u and -u induce the same metric.
  static Probe from_angle(double psi, double factor);

  std::span<const double> direction() const { return direction_; }
  double factor() const { return factor_; }
  std::size_t dim() const { return direction_.size(); }
  /// Angle of the direction in [0, pi); 2D probes only.
  double angle() const;

 private:
  std::vector<double> direction_;
  double factor_;
};

/// Dense symmetric dissimilarity with zero diagonal.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  /// Validates symmetry, zero diagonal, finiteness and nonnegativity.
  DissimilarityMatrix(std::size_t n, std::vector<double> entries);

  /// Skips validation; for producers that construct the invariants directly.
  static DissimilarityMatrix unchecked(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Canonical representative of an angle modulo pi, in [0, pi).
double canonical_angle(double theta);

/// Rows of an orthonormal matrix whose first row is u, built from the
/// Householder reflection that maps e1 to u. Row-major n*n.
std::vector<double> householder_basis(std::span<const double> u);

/// The linear map S = U^T diag(alpha, 1, ..., 1) U as a row-major n*n matrix.
std::vector<double> scaling_matrix(const Probe& p);

PointCloud scale_points(const PointCloud& cloud, const Probe& p);

double anisotropic_distance(std::span<const double> x, std::span<const double> y, const Probe& p);
double euclidean_distance(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kDefaultMaxMatrixPoints = 20000;

/// Pairwise d_{u,alpha} distances, Euclidean when no probe is given.
DissimilarityMatrix distance_matrix(const PointCloud& cloud, const std::optional<Probe>& p = std::nullopt,
                                    std::size_t max_points = kDefaultMaxMatrixPoints);

PointCloud rotate_cloud(const PointCloud& cloud, double theta);

/// Density-rescaled dissimilarity 2 d(x,y) / (mu(x) + mu(y)), where
/// mu(x) = f(x) |X| / sum_y f(y) and f(x) = sum_{y != x} exp(-d(x,y)^2 / delta).
DissimilarityMatrix outlier_dissimilarity(const DissimilarityMatrix& base, double delta);
DissimilarityMatrix outlier_dissimilarity(const PointCloud& cloud, double delta,
                                          std::size_t max_points = kDefaultMaxMatrixPoints);

}  // namespace niph
