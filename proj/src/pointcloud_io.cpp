#include "niph/pointcloud_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "niph/error.hpp"

namespace niph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

PointCloud read_point_cloud_csv(std::istream& in, const std::string& source) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (seen_data || line_no != 1) {
        throw InvalidInput(source + ":" + std::to_string(line_no) + ": header line only allowed first");
      }
      continue;
    }
    seen_data = true;
    row.clear();
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto field = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw InvalidInput(source + ":" + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    try {
      cloud.push_back(row);
    } catch (const InvalidInput& e) {
      throw InvalidInput(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (cloud.empty()) throw InvalidInput(source + ": no points");
  cloud.provenance = source;
  return cloud;
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_point_cloud_csv(in, path.string());
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud, const std::string& header) {
  if (!header.empty()) out << "# " << header << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ',';
      out << format_number(p[k]);
    }
    out << '\n';
  }
}

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_point_cloud_csv(out, cloud, header);
}

}  // namespace niph
