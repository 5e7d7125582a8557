#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "niph/geometry.hpp"

namespace niph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One bar of a persistence diagram. `death_edge` holds the point indices of
/// the longest edge of the simplex whose entry kills the class.
struct PersistencePair {
  double birth = 0.0;
  double death = kInfinity;
  int dim = 0;
  std::optional<std::array<std::size_t, 2>> death_edge;
  /// The class was still alive at the radius cap; death is reported as +inf.
  bool truncated = false;

  bool finite() const { return death != kInfinity; }
};

struct PersistenceDiagram {
  int dim = 0;
  std::vector<PersistencePair> pairs;
  /// Radius cap used for the filtration (+inf when uncapped).
  double r_max = kInfinity;
  /// Set when the cap was too small for a single edge to enter.
  bool no_edges_warning = false;

  std::size_t finite_count() const;
  std::size_t truncated_count() const;
};

enum class Weighting { unit, persistence_diff, persistence_ratio };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

/// Finite death times with their weights; pair_refs index the source diagram.
struct WeightedDeaths {
  std::vector<double> deaths;
  std::vector<double> weights;
  std::vector<std::size_t> pair_refs;

  std::size_t size() const { return deaths.size(); }
  double total_weight() const;
  /// Throws InvalidInput unless lengths agree, deaths are finite and > 0,
  /// weights are >= 0 and the total weight is positive.
  void validate() const;
};

/// Limits on the work a single persistence computation may do.
struct PersistenceBudget {
  std::size_t max_edges = 20'000'000;
  std::size_t max_matrix_points = kDefaultMaxMatrixPoints;
};

/// 0-dimensional Vietoris-Rips persistence: one finite bar per minimum
/// spanning tree edge plus one infinite bar.
///
/// The matrix overload runs Kruskal with union-find on the sorted edges. The
/// cloud overload runs a dense O(n^2) Prim on coordinates and never
/// materializes a distance matrix, so it has no point cap.
PersistenceDiagram vr_persistence_0(const DissimilarityMatrix& d);
PersistenceDiagram vr_persistence_0(const PointCloud& cloud);
PersistenceDiagram vr_persistence_0(const PointCloud& cloud, const Probe& probe);

/// 1-dimensional Vietoris-Rips persistence over Z/2 for the filtration capped
/// at r_max. Simplices are ordered by (diameter, dimension, lexicographic
/// vertex order); the coboundary matrix is reduced with clearing of minimum
/// spanning tree edges. Classes alive at r_max are returned with
/// truncated = true. Zero-length bars are omitted.
PersistenceDiagram vr_persistence_1(const DissimilarityMatrix& d, double r_max,
                                    const PersistenceBudget& budget = {});
PersistenceDiagram vr_persistence_1(const PointCloud& cloud, double r_max, const PersistenceBudget& budget = {});
PersistenceDiagram vr_persistence_1(const PointCloud& cloud, const Probe& probe, double r_max,
                                    const PersistenceBudget& budget = {});

/// Dispatches on dimension (0 or 1). r_max is ignored for dimension 0.
PersistenceDiagram vr_persistence(const PointCloud& cloud, int dim, double r_max,
                                  const PersistenceBudget& budget = {});

WeightedDeaths death_distribution(const PersistenceDiagram& diagram, Weighting weighting);

/// Weight of a single finite pair under the given weighting.
double pair_weight(const PersistencePair& pair, Weighting weighting);

/// Angles in [0, pi) with weights.
struct AngularSample {
  std::vector<double> angles;
  std::vector<double> weights;
};

/// Orientation of the death edge of every finite pair, measured in the
/// coordinates of `cloud` (2D).
AngularSample death_edge_orientations(const PersistenceDiagram& diagram, const PointCloud& cloud,
                                      Weighting weighting = Weighting::unit);

struct CircularSummary {
  /// Weighted axial mean in [0, pi), computed from doubled angles.
  double mean = 0.0;
  /// 1 - R of the doubled angles; 0 for a single direction, near 1 for uniform.
  double variance = 0.0;
};

CircularSummary axial_summary(const AngularSample& sample);

/// Weighted histogram over [0, pi) with `bins` equal bins.
std::vector<double> axial_histogram(const AngularSample& sample, int bins);

}  // namespace niph
