#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "niph/error.hpp"
#include "niph/network.hpp"

namespace {

niph::LineNetwork parse(const std::string& text) {
  std::istringstream in(text);
  return niph::read_geojson_network(in, "inline");
}

const char* kTwoRoads = R"({"type": "FeatureCollection", "features": [
  {"type": "Feature", "properties": {"highway": "residential"},
   "geometry": {"type": "LineString", "coordinates": [[1000, 1000], [1001, 1000]]}},
  {"type": "Feature", "properties": {"highway": "primary"},
   "geometry": {"type": "MultiLineString", "coordinates": [[[1000, 2000], [1000, 2001]], [[1000, 3000], [1002, 3000]]]}},
  {"type": "Feature", "properties": {"name": "untagged"},
   "geometry": {"type": "LineString", "coordinates": [[5000, 5000], [5000, 5010]]}},
  {"type": "Feature", "properties": {"highway": "bus_stop"},
   "geometry": {"type": "Point", "coordinates": [1000, 1000]}}
]})";

TEST(GeoJson, ReadsLineStringsAndMultiLineStrings) {
  const auto net = parse(kTwoRoads);
  ASSERT_EQ(net.segments.size(), 4u);
  EXPECT_FALSE(net.projected);
  EXPECT_EQ(net.segments[0].tag, "residential");
  EXPECT_EQ(net.segments[1].tag, "primary");
  EXPECT_EQ(net.segments[2].tag, "primary");
  EXPECT_EQ(net.segments[3].tag, "");
  EXPECT_DOUBLE_EQ(net.segments[0].length(), 1.0);
  EXPECT_DOUBLE_EQ(net.segments[2].length(), 2.0);
  EXPECT_DOUBLE_EQ(net.segments[3].length(), 10.0);
}

TEST(GeoJson, ProjectsLonLat) {
  const auto net = parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {}, "geometry": {"type": "LineString", "coordinates": [[-0.5, 0], [0.5, 0]]}},
    {"type": "Feature", "properties": {}, "geometry": {"type": "LineString", "coordinates": [[0, -0.5], [0, 0.5]]}}]})");
  EXPECT_TRUE(net.projected);
  EXPECT_NEAR(net.origin_lon, 0.0, 1e-12);
  EXPECT_NEAR(net.origin_lat, 0.0, 1e-12);
  const double degree = 6371008.8 * std::numbers::pi / 180.0;
  EXPECT_NEAR(net.segments[0].length(), degree, 1e-6);
  EXPECT_NEAR(net.segments[1].length(), degree, 1e-6);
}

TEST(GeoJson, LongitudeShrinksWithLatitude) {
  const auto net = parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {}, "geometry": {"type": "LineString", "coordinates": [[10, 60], [11, 60]]}}]})");
  const double degree = 6371008.8 * std::numbers::pi / 180.0;
  EXPECT_NEAR(net.segments[0].length(), 0.5 * degree, 1e-6 * degree);
}

TEST(GeoJson, Errors) {
  EXPECT_THROW(parse("{not json"), niph::InvalidInput);
  EXPECT_THROW(parse(R"({"type": "Feature"})"), niph::InvalidInput);
  EXPECT_THROW(parse(R"({"type": "FeatureCollection", "features": []})"), niph::InvalidInput);
  EXPECT_THROW(parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {}, "geometry": {"type": "LineString", "coordinates": [[0, "a"], [1, 1]]}}]})"),
               niph::InvalidInput);
  EXPECT_THROW(niph::read_geojson_network(std::filesystem::path("/nonexistent/roads.geojson")), niph::InvalidInput);
}

TEST(SampleNetwork, LengthProportionalSplit) {
  // Two pieces of length 1 and 3: expect 25% / 75% of the points.
  const auto net = parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"highway": "a"}, "geometry": {"type": "LineString", "coordinates": [[1000, 1000], [1001, 1000]]}},
    {"type": "Feature", "properties": {"highway": "a"}, "geometry": {"type": "LineString", "coordinates": [[1000, 2000], [1000, 2003]]}}]})");
  const std::size_t n = 100000;
  const auto cloud = niph::sample_network(net, {}, n, 17);
  ASSERT_EQ(cloud.size(), n);
  std::size_t first = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.y(i) == 1000.0) {
      ++first;
      EXPECT_GE(cloud.x(i), 1000.0);
      EXPECT_LE(cloud.x(i), 1001.0);
    } else {
      EXPECT_EQ(cloud.x(i), 1000.0);
      EXPECT_GE(cloud.y(i), 2000.0);
      EXPECT_LE(cloud.y(i), 2003.0);
    }
  }
  EXPECT_NEAR(static_cast<double>(first) / n, 0.25, 0.01);
}

TEST(SampleNetwork, SingleSegmentIsUniform) {
  const auto net = parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {}, "geometry": {"type": "LineString", "coordinates": [[1000, 1000], [1010, 1000], [1010, 1010]]}}]})");
  const auto cloud = niph::sample_network(net, {}, 40000, 3);
  std::size_t horizontal = 0;
  double mean = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.y(i) == 1000.0) {
      ++horizontal;
      mean += cloud.x(i);
    }
  }
  EXPECT_NEAR(static_cast<double>(horizontal) / cloud.size(), 0.5, 0.01);
  EXPECT_NEAR(mean / horizontal, 1005.0, 0.1);
}

TEST(SampleNetwork, FilterAndDeterminism) {
  const auto net = parse(kTwoRoads);
  const auto cloud = niph::sample_network(net, {"primary"}, 500, 9);
  for (std::size_t i = 0; i < cloud.size(); ++i) EXPECT_TRUE(cloud.y(i) >= 2000.0 && cloud.y(i) <= 3000.0);
  EXPECT_EQ(cloud.coords(), niph::sample_network(net, {"primary"}, 500, 9).coords());
  EXPECT_THROW(niph::sample_network(net, {"motorway"}, 10, 0), niph::InvalidInput);
}

TEST(SampleNetwork, BundledFixtures) {
  const std::filesystem::path dir = NIPH_TEST_DATA_DIR;
  const auto grid = niph::read_geojson_network(dir / "grid_city.geojson");
  EXPECT_TRUE(grid.projected);
  const auto radial = niph::read_geojson_network(dir / "radial_city.geojson");
  EXPECT_FALSE(radial.projected);
  EXPECT_EQ(niph::sample_network(grid, {"residential"}, 1000, 1).size(), 1000u);
  EXPECT_EQ(niph::sample_network(radial, {"residential"}, 1000, 1).size(), 1000u);
}

}  // namespace
