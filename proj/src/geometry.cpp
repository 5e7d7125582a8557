#include "niph/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "niph/error.hpp"

namespace niph {

namespace {

void check_finite(std::span<const double> p) {
  for (double v : p) {
    if (!std::isfinite(v)) throw InvalidInput("point cloud: non-finite coordinate");
  }
}

}  // namespace

PointCloud::PointCloud(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidInput("point cloud: dimension must be positive");
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim == 0) throw InvalidInput("point cloud: dimension must be positive");
  if (coords_.size() % dim != 0) {
    throw InvalidInput("point cloud: coordinate count is not a multiple of the dimension");
  }
  check_finite(coords_);
}

void PointCloud::push_back(std::span<const double> p) {
  if (dim_ == 0) dim_ = p.size();
  if (p.size() != dim_ || dim_ == 0) {
    std::ostringstream msg;
    msg << "point cloud: point of dimension " << p.size() << " added to cloud of dimension " << dim_;
    throw InvalidInput(msg.str());
  }
  check_finite(p);
  coords_.insert(coords_.end(), p.begin(), p.end());
}

void PointCloud::push_back(double x, double y) {
  const double p[2] = {x, y};
  push_back(std::span<const double>(p, 2));
}

Probe::Probe(std::vector<double> direction, double factor) : direction_(std::move(direction)), factor_(factor) {
  if (direction_.empty()) throw InvalidInput("probe: empty direction");
  double norm2 = 0.0;
  for (double v : direction_) {
    if (!std::isfinite(v)) throw InvalidInput("probe: non-finite direction");
    norm2 += v * v;
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probe: direction must be a unit vector (norm " << std::sqrt(norm2) << ")";
    throw InvalidInput(msg.str());
  }
  if (!(factor_ > 0.0) || !std::isfinite(factor_)) {
    throw InvalidInput("probe: scaling factor must be finite and strictly positive");
  }
}

Probe Probe::from_angle(double psi, double factor) {
  if (!std::isfinite(psi)) throw InvalidInput("probe: non-finite angle");
  const double a = canonical_angle(psi);
  return Probe({std::cos(a), std::sin(a)}, factor);
}

double Probe::angle() const {
  if (dim() != 2) throw InvalidInput("probe: angle is only defined in 2D");
  return canonical_angle(std::atan2(direction_[1], direction_[0]));
}

DissimilarityMatrix::DissimilarityMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n) throw InvalidInput("dissimilarity: expected n*n entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_[i * n + i] != 0.0) throw InvalidInput("dissimilarity: nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = entries_[i * n + j];
      if (!std::isfinite(a) || a < 0.0) throw InvalidInput("dissimilarity: entries must be finite and >= 0");
      if (a != entries_[j * n + i]) throw InvalidInput("dissimilarity: matrix is not symmetric");
    }
  }
}

DissimilarityMatrix DissimilarityMatrix::unchecked(std::size_t n, std::vector<double> entries) {
  DissimilarityMatrix m;
  m.n_ = n;
  m.entries_ = std::move(entries);
  return m;
}

double canonical_angle(double theta) {
  double a = std::fmod(theta, std::numbers::pi);
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi) a = 0.0;
  return a;
}

std::vector<double> householder_basis(std::span<const double> u) {
  const std::size_t n = u.size();
  // H = I - 2 v v^T / (v^T v) with v = e1 - u maps e1 to u; H is symmetric so
  // its first row is u as well.
  std::vector<double> v(u.begin(), u.end());
  for (auto& c : v) c = -c;
  v[0] += 1.0;
  double vv = 0.0;
  for (double c : v) vv += c * c;
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  if (vv < 1e-30) return h;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] -= 2.0 * v[i] * v[j] / vv;
  }
  return h;
}

std::vector<double> scaling_matrix(const Probe& p) {
  const std::size_t n = p.dim();
  const auto u = householder_basis(p.direction());
  // S = U^T D U, U orthonormal with rows as basis vectors.
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = (k == 0) ? p.factor() : 1.0;
        acc += u[k * n + i] * d * u[k * n + j];
      }
      s[i * n + j] = acc;
    }
  }
  return s;
}

PointCloud scale_points(const PointCloud& cloud, const Probe& p) {
  if (cloud.empty()) throw InvalidInput("scale_points: empty point cloud");
  const std::size_t n = cloud.dim();
  if (p.dim() != n) throw InvalidInput("scale_points: probe dimension does not match the cloud");
  if (p.factor() == 1.0) return cloud;
  const auto s = scaling_matrix(p);
  std::vector<double> out(cloud.coords().size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto x = cloud[i];
    for (std::size_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < n; ++c) acc += s[r * n + c] * x[c];
      out[i * n + r] = acc;
    }
  }
  PointCloud result(n, std::move(out));
  result.provenance = cloud.provenance;
  return result;
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double anisotropic_distance(std::span<const double> x, std::span<const double> y, const Probe& p) {
  if (x.size() != p.dim() || y.size() != p.dim()) {
    throw InvalidInput("anisotropic_distance: dimension mismatch between points and probe");
  }
  // |S z|^2 = |z|^2 + (alpha^2 - 1) (u.z)^2 for z = x - y.
  const auto u = p.direction();
  double norm2 = 0.0;
  double along = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    norm2 += d * d;
    along += u[k] * d;
  }
  const double a = p.factor();
  return std::sqrt(std::max(0.0, norm2 + (a * a - 1.0) * along * along));
}

DissimilarityMatrix distance_matrix(const PointCloud& cloud, const std::optional<Probe>& p, std::size_t max_points) {
  const std::size_t n = cloud.size();
  if (n < 2) throw InvalidInput("distance_matrix: at least 2 points required");
  if (n > max_points) {
    std::ostringstream msg;
    msg << "distance_matrix: " << n << " points exceed the dense matrix cap of " << max_points
        << " (use the coordinate-based 0-dimensional routine for large clouds)";
    throw ResourceError(msg.str());
  }
  if (p && p->dim() != cloud.dim()) throw InvalidInput("distance_matrix: probe dimension does not match the cloud");
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = p ? anisotropic_distance(cloud[i], cloud[j], *p) : euclidean_distance(cloud[i], cloud[j]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DissimilarityMatrix::unchecked(n, std::move(d));
}

PointCloud rotate_cloud(const PointCloud& cloud, double theta) {
  if (cloud.dim() != 2) throw InvalidInput("rotate_cloud: only 2D clouds can be rotated");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<double> out(cloud.coords().size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double x = cloud.x(i);
    const double y = cloud.y(i);
    out[2 * i] = c * x - s * y;
    out[2 * i + 1] = s * x + c * y;
  }
  PointCloud result(2, std::move(out));
  result.provenance = cloud.provenance;
  return result;
}

DissimilarityMatrix outlier_dissimilarity(const DissimilarityMatrix& base, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("outlier_dissimilarity: delta must be > 0");
  const std::size_t n = base.size();
  if (n < 2) throw InvalidInput("outlier_dissimilarity: at least 2 points required");

  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = base(i, j);
      f[i] += std::exp(-d * d / delta);
    }
  }
  double total = 0.0;
  for (double v : f) total += v;

  std::vector<double> mu(n, 1.0);
  // All kernel values underflow when delta is tiny compared to every gap; the
  // limit of mu is then 1 everywhere.
  if (total > 0.0 && std::isfinite(total)) {
    for (std::size_t i = 0; i < n; ++i) mu[i] = f[i] * static_cast<double>(n) / total;
  }

  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double denom = mu[i] + mu[j];
      // Two isolated points (both mu = 0) keep an unbounded separation; cap at
      // the largest representable value rather than dividing by zero.
      const double v = denom > 0.0 ? 2.0 * base(i, j) / denom : std::numeric_limits<double>::max();
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
  return DissimilarityMatrix::unchecked(n, std::move(out));
}

DissimilarityMatrix outlier_dissimilarity(const PointCloud& cloud, double delta, std::size_t max_points) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("outlier_dissimilarity: delta must be > 0");
  return outlier_dissimilarity(distance_matrix(cloud, std::nullopt, max_points), delta);
}

}  // namespace niph
