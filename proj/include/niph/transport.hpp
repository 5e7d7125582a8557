#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "niph/density.hpp"
#include "niph/geometry.hpp"
#include "niph/persistence.hpp"

namespace niph {

/// Sparse coupling between two discrete distributions with normalized
/// marginals. Entry indices refer to the atoms in their original order.
struct TransportPlan {
  struct Entry {
    std::size_t i;
    std::size_t j;
    double mass;
  };

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;
  std::vector<double> source_mass;
  std::vector<double> target_mass;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

/// Exact optimal plan between two weighted point sets on the line: the
/// monotone (quantile) coupling of the sorted supports. Optimal for every
/// convex cost of the difference, in particular (a - b)^2.
TransportPlan ot_1d(const WeightedDeaths& mu, const WeightedDeaths& nu);

struct SinkhornConfig {
  /// Entropic regularization strength, relative to the mean cost.
  double lambda = 0.05;
  double tolerance = 1e-9;
  int max_iterations = 10'000;
};

/// Entropically regularized plan for cost (a - b)^2, computed with
/// log-domain Sinkhorn iterations. Entries below 1e-300 are dropped.
TransportPlan ot_sinkhorn(const WeightedDeaths& mu, const WeightedDeaths& nu, const SinkhornConfig& cfg = {});

/// sum T_ij (a_i - b_j)^2
double transport_cost(const TransportPlan& plan, const WeightedDeaths& mu, const WeightedDeaths& nu);

struct ShiftSet {
  /// ms_i for every source atom with positive mass, in source order.
  std::vector<double> shifts;
  /// Death-distribution weight of the corresponding source atom.
  std::vector<double> weights;
  /// Source atom index of each shift.
  std::vector<std::size_t> source;
  /// Source atoms dropped because their row carried no mass.
  std::vector<std::size_t> dropped;
};

/// ms_i = exp(sum_j That_ij ln(D'_j / D_i)) with That the row-normalized plan.
ShiftSet mult_shifts(const TransportPlan& plan, const WeightedDeaths& source, const WeightedDeaths& target);

struct MultShiftDiagram {
  std::vector<double> shifts;
  std::vector<double> weights;
  DensityCurve density;
  double peak = 1.0;
  std::optional<Probe> probe;
  /// All shifts coincide; `peak` is that value and the density is a narrow
  /// display kernel.
  bool degenerate = false;
};

/// Weighted KDE of the shifts and its peak, clamped to [min shift, max shift].
MultShiftDiagram shift_diagram(std::vector<double> shifts, std::vector<double> weights,
                               std::optional<Probe> probe, const KdeConfig& cfg = {});

}  // namespace niph
