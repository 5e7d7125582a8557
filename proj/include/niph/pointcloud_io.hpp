#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "niph/geometry.hpp"

namespace niph {

/// Reads one point per line, comma-separated. A single leading header line
/// starting with '#' is skipped; blank lines are ignored.
PointCloud read_point_cloud_csv(std::istream& in, const std::string& source = "<stream>");
PointCloud read_point_cloud_csv(const std::filesystem::path& path);

/// Writes coordinates with 9 significant digits. An empty header omits the
/// header line; otherwise it is written as "# <header>".
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud, const std::string& header = "");
void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud,
                           const std::string& header = "");

/// Shortest decimal with 9 significant digits, as used in every text output.
std::string format_number(double v);

/// Rounds v to 9 significant digits (identity for non-finite values).
double round9(double v);

}  // namespace niph
