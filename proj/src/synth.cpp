#include "niph/synth.hpp"

#include <cmath>
#include <numbers>

#include "niph/error.hpp"
#include "niph/random.hpp"

namespace niph {

void GridSpec::validate() const {
  if (n1 < 2 || n2 < 2) throw InvalidInput("grid: n1 and n2 must be > 1");
  if (!(d1 > 0.0) || !(d1 <= d2) || !std::isfinite(d2)) throw InvalidInput("grid: spacings must satisfy 0 < d1 <= d2");
  if (!(noise_bound >= 0.0) || !std::isfinite(noise_bound)) throw InvalidInput("grid: noise bound must be >= 0");
  if (!std::isfinite(phi)) throw InvalidInput("grid: non-finite rotation");
}

PointCloud gen_grid(const GridSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  PointCloud base(2);
  base.reserve(static_cast<std::size_t>(spec.n1) * spec.n2);
  for (int i = 0; i < spec.n1; ++i) {
    for (int j = 0; j < spec.n2; ++j) {
      double x = i * spec.d1;
      double y = j * spec.d2;
      if (spec.noise_bound > 0.0) {
        if (spec.noise == GridNoise::uniform) {
          x += rng.uniform(-spec.noise_bound, spec.noise_bound);
          y += rng.uniform(-spec.noise_bound, spec.noise_bound);
        } else {
          x += rng.normal(0.0, spec.noise_bound);
          y += rng.normal(0.0, spec.noise_bound);
        }
      }
      base.push_back(x, y);
    }
  }
  PointCloud out = spec.phi == 0.0 ? base : rotate_cloud(base, spec.phi);
  out.provenance = "grid";
  return out;
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::ellipse: return "ellipse";
    case ShapeKind::rectangle: return "rectangle";
    case ShapeKind::circle: return "circle";
  }
  return "ellipse";
}

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "ellipse") return ShapeKind::ellipse;
  if (name == "rectangle") return ShapeKind::rectangle;
  if (name == "circle") return ShapeKind::circle;
  throw InvalidInput("unknown shape '" + std::string(name) + "' (expected ellipse, rectangle or circle)");
}

void ShapeFieldSpec::validate() const {
  if (count < 1) throw InvalidInput("shape field: count must be >= 1");
  if (!(s >= 1.0) || !std::isfinite(s)) throw InvalidInput("shape field: scaling factor s must be >= 1");
  if (!(var >= 0.0) || !std::isfinite(var)) throw InvalidInput("shape field: orientational variance must be >= 0");
  if (!(size_min > 0.0) || !(size_max >= size_min) || !std::isfinite(size_max)) {
    throw InvalidInput("shape field: size range must satisfy 0 < low <= high");
  }
  if (points_per_shape < 3) throw InvalidInput("shape field: at least 3 points per shape");
  if (!(region > 0.0) || !(region_aspect > 0.0)) throw InvalidInput("shape field: region must be positive");
  if (shape == ShapeKind::circle && s != 1.0) throw InvalidInput("shape field: circles require s = 1");
}

ShapeInstance draw_shape(const ShapeFieldSpec& spec, int index) {
  Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index)));
  const double lx = rng.uniform(0.0, spec.region);
  const double ly = rng.uniform(0.0, spec.region * spec.region_aspect);
  ShapeInstance shape;
  // Rotate the region about its center.
  const double mx = 0.5 * spec.region;
  const double my = 0.5 * spec.region * spec.region_aspect;
  const double c = std::cos(spec.region_angle);
  const double s = std::sin(spec.region_angle);
  shape.cx = mx + c * (lx - mx) - s * (ly - my);
  shape.cy = my + s * (lx - mx) + c * (ly - my);
  shape.orientation = spec.phi + (spec.var > 0.0 ? rng.normal(0.0, std::sqrt(spec.var)) : 0.0);
  shape.short_size = rng.uniform(spec.size_min, spec.size_max);
  return shape;
}

void sample_shape(ShapeKind kind, const ShapeInstance& shape, double s, int points, std::uint64_t seed,
                  PointCloud& out) {
  Rng rng(seed);
  const double c = std::cos(shape.orientation);
  const double sn = std::sin(shape.orientation);
  const double b = shape.short_size;
  const double a = s * b;
  for (int k = 0; k < points; ++k) {
    double lx = 0.0;
    double ly = 0.0;
    if (kind == ShapeKind::rectangle) {
      // Uniform by arc length over the perimeter of the a x b rectangle.
      const double t = rng.uniform(0.0, 2.0 * (a + b));
      if (t < a) {
        lx = t - 0.5 * a;
        ly = -0.5 * b;
      } else if (t < a + b) {
        lx = 0.5 * a;
        ly = (t - a) - 0.5 * b;
      } else if (t < 2.0 * a + b) {
        lx = 0.5 * a - (t - a - b);
        ly = 0.5 * b;
      } else {
        lx = -0.5 * a;
        ly = 0.5 * b - (t - 2.0 * a - b);
      }
    } else {
      // Uniform in the angle parameter, not in arc length.
      const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      lx = a * std::cos(t);
      ly = b * std::sin(t);
    }
    out.push_back(shape.cx + c * lx - sn * ly, shape.cy + sn * lx + c * ly);
  }
}

PointCloud gen_shape_field(const ShapeFieldSpec& spec) {
  spec.validate();
  PointCloud cloud(2);
  cloud.reserve(static_cast<std::size_t>(spec.count) * spec.points_per_shape);
  for (int i = 0; i < spec.count; ++i) {
    const auto shape = draw_shape(spec, i);
    sample_shape(spec.shape, shape, spec.s, spec.points_per_shape,
                 mix_seed(spec.seed ^ 0x5a17ULL, static_cast<std::uint64_t>(i)), cloud);
  }
  cloud.provenance = std::string(to_string(spec.shape)) + " field";
  return cloud;
}

}  // namespace niph
