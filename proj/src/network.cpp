#include "niph/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>

#include "niph/error.hpp"
#include "niph/random.hpp"

namespace niph {

namespace {

constexpr double kEarthRadius = 6371008.8;

using json = nlohmann::json;

void add_line(const json& coords, const std::string& tag, const std::string& source, LineNetwork& net) {
  if (!coords.is_array()) throw InvalidInput(source + ": LineString coordinates must be an array");
  LineNetwork::Segment seg;
  seg.tag = tag;
  for (const auto& c : coords) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw InvalidInput(source + ": coordinate must be an array of at least 2 numbers");
    }
    const double x = c[0].get<double>();
    const double y = c[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidInput(source + ": non-finite coordinate");
    seg.x.push_back(x);
    seg.y.push_back(y);
  }
  // Polylines with fewer than 2 vertices carry no length.
  if (seg.x.size() >= 2) net.segments.push_back(std::move(seg));
}

}  // namespace

double LineNetwork::Segment::length() const {
  double acc = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) acc += std::hypot(x[k] - x[k - 1], y[k] - y[k - 1]);
  return acc;
}

LineNetwork read_geojson_network(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(source + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw InvalidInput(source + ": expected a GeoJSON FeatureCollection");
  }
  LineNetwork net;
  for (const auto& feature : doc["features"]) {
    if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object()) continue;
    const auto& geom = feature["geometry"];
    std::string tag;
    if (feature.contains("properties") && feature["properties"].is_object()) {
      const auto& props = feature["properties"];
      if (props.contains("highway") && props["highway"].is_string()) tag = props["highway"].get<std::string>();
    }
    const std::string type = geom.value("type", "");
    if (!geom.contains("coordinates")) continue;
    if (type == "LineString") {
      add_line(geom["coordinates"], tag, source, net);
    } else if (type == "MultiLineString") {
      if (!geom["coordinates"].is_array()) throw InvalidInput(source + ": MultiLineString coordinates must be an array");
      for (const auto& line : geom["coordinates"]) add_line(line, tag, source, net);
    }
  }
  if (net.segments.empty()) throw InvalidInput(source + ": no LineString features with at least 2 vertices");

  bool geographic = true;
  double sx = 0.0;
  double sy = 0.0;
  std::size_t count = 0;
  for (const auto& seg : net.segments) {
    for (std::size_t k = 0; k < seg.x.size(); ++k) {
      geographic = geographic && std::abs(seg.x[k]) <= 180.0 && std::abs(seg.y[k]) <= 90.0;
      sx += seg.x[k];
      sy += seg.y[k];
      ++count;
    }
  }
  if (geographic) {
    net.projected = true;
    net.origin_lon = sx / static_cast<double>(count);
    net.origin_lat = sy / static_cast<double>(count);
    const double deg = std::numbers::pi / 180.0;
    const double kx = kEarthRadius * deg * std::cos(net.origin_lat * deg);
    const double ky = kEarthRadius * deg;
    for (auto& seg : net.segments) {
      for (std::size_t k = 0; k < seg.x.size(); ++k) {
        seg.x[k] = (seg.x[k] - net.origin_lon) * kx;
        seg.y[k] = (seg.y[k] - net.origin_lat) * ky;
      }
    }
  }
  return net;
}

LineNetwork read_geojson_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_geojson_network(in, path.string());
}

PointCloud sample_network(const LineNetwork& net, const std::vector<std::string>& filter, std::size_t count,
                          std::uint64_t seed) {
  // Flatten the selected polylines into straight pieces with cumulative lengths.
  struct Piece {
    double x0, y0, x1, y1;
  };
  std::vector<Piece> pieces;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& seg : net.segments) {
    if (!filter.empty() && std::find(filter.begin(), filter.end(), seg.tag) == filter.end()) continue;
    for (std::size_t k = 1; k < seg.x.size(); ++k) {
      const double len = std::hypot(seg.x[k] - seg.x[k - 1], seg.y[k] - seg.y[k - 1]);
      if (!(len > 0.0)) continue;
      pieces.push_back({seg.x[k - 1], seg.y[k - 1], seg.x[k], seg.y[k]});
      total += len;
      cumulative.push_back(total);
    }
  }
  if (pieces.empty()) throw InvalidInput("sample_network: road filter matches no segment with positive length");
  Rng rng(seed);
  PointCloud cloud(2);
  cloud.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double pick = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto& p = pieces[static_cast<std::size_t>(it - cumulative.begin())];
    const double t = rng.uniform();
    cloud.push_back(p.x0 + t * (p.x1 - p.x0), p.y0 + t * (p.y1 - p.y0));
  }
  return cloud;
}

}  // namespace niph
