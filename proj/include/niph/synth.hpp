#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "niph/geometry.hpp"

namespace niph {

enum class GridNoise { uniform, gaussian };

/// Orthogonal n1 x n2 grid with spacings d1 <= d2, rotated by phi.
struct GridSpec {
  int n1 = 2;
  int n2 = 2;
  double d1 = 1.0;
  double d2 = 2.0;
  double phi = 0.0;
  /// Uniform: each coordinate shifted by U[-bound, bound].
  /// Gaussian: each coordinate shifted by N(0, bound^2), unbounded.
  double noise_bound = 0.0;
  GridNoise noise = GridNoise::uniform;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Points at (i d1, j d2) plus per-coordinate noise, then rotated by phi.
PointCloud gen_grid(const GridSpec& spec);

enum class ShapeKind { ellipse, rectangle, circle };

std::string_view to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view name);

/// Field of randomly placed, similarly oriented closed curves.
///
/// Each shape has a short size b drawn uniformly from [size_min, size_max]
/// and a long size s*b. For ellipses and circles these are semi-axes (a
/// circle of size 1 has radius 1); rectangles have side lengths s*b and b.
/// Orientation of the long axis is phi + N(0, var). Centers are uniform in a
/// region of side `region` x `region * region_aspect` rotated by
/// `region_angle` about the origin-centered region's center.
struct ShapeFieldSpec {
  int count = 200;
  double phi = 0.0;
  double var = 0.0;
  double s = 2.0;
  double size_min = 0.2;
  double size_max = 2.0;
  int points_per_shape = 100;
  double region = 3000.0;
  double region_aspect = 1.0;
  double region_angle = 0.0;
  ShapeKind shape = ShapeKind::ellipse;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One shape's placement as drawn by gen_shape_field.
struct ShapeInstance {
  double cx = 0.0;
  double cy = 0.0;
  double orientation = 0.0;
  double short_size = 1.0;
};

/// Boundary samples of a single shape, appended to `out`.
void sample_shape(ShapeKind kind, const ShapeInstance& shape, double s, int points, std::uint64_t seed,
                  PointCloud& out);

/// Draws the placement of shape `index` of a field; deterministic in (spec.seed, index).
ShapeInstance draw_shape(const ShapeFieldSpec& spec, int index);

PointCloud gen_shape_field(const ShapeFieldSpec& spec);

}  // namespace niph
