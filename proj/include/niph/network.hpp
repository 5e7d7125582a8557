#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "niph/geometry.hpp"

namespace niph {

/// Polylines in planar coordinates with one road-type tag each.
struct LineNetwork {
  struct Segment {
    std::vector<double> x;
    std::vector<double> y;
    std::string tag;

    double length() const;
  };

  std::vector<Segment> segments;
  /// Set when lon/lat input was projected to meters.
  bool projected = false;
  double origin_lon = 0.0;
  double origin_lat = 0.0;
};

/// Reads a GeoJSON FeatureCollection of LineString / MultiLineString
/// features; the tag is properties.highway (empty when absent). Other
/// geometry types are skipped. When every coordinate lies within
/// [-180, 180] the input is taken as lon/lat and projected
/// equirectangularly around its centroid (meters).
LineNetwork read_geojson_network(std::istream& in, const std::string& source = "<stream>");
LineNetwork read_geojson_network(const std::filesystem::path& path);

/// `count` points placed uniformly by length on the segments whose tag is in
/// `filter` (all segments when empty).
PointCloud sample_network(const LineNetwork& net, const std::vector<std::string>& filter, std::size_t count,
                          std::uint64_t seed);

}  // namespace niph
