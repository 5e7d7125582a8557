#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace niph {

/// Axis-aligned search box. Periodic coordinates wrap instead of clamping.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> periodic;

  std::size_t dim() const { return lower.size(); }
  bool is_periodic(std::size_t k) const;
  void validate() const;
  /// Clamps or wraps x into the box in place.
  void project(std::vector<double>& x) const;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimumPoint {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

struct AnnealConfig {
  int evaluations = 5000;
  /// Initial visiting scale as a fraction of each box side.
  double initial_temperature = 0.5;
  /// Temperature after the last evaluation.
  double final_temperature = 1e-4;
  std::uint64_t seed = 0;
};

/// Simulated annealing from a uniform random start: Cauchy visiting steps
/// scaled by the current temperature, Metropolis acceptance, and a
/// geometric temperature schedule over the evaluation budget.
OptimumPoint anneal(const Objective& f, const Box& box, const AnnealConfig& cfg);

struct SimplexConfig {
  /// Stop when every vertex lies within this distance of the best one
  /// (in box-normalized units) and the value spread is below `value_tolerance`.
  double step_tolerance = 1e-6;
  double value_tolerance = 1e-14;
  int max_evaluations = 5000;
  /// Initial simplex edge in box-normalized units.
  double initial_step = 0.05;
};

/// Nelder-Mead descent inside the box. Candidate vertices are projected
/// onto the box.
OptimumPoint nelder_mead(const Objective& f, const Box& box, std::vector<double> start,
                         const SimplexConfig& cfg = {});

}  // namespace niph
