#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "niph/density.hpp"
#include "niph/error.hpp"
#include "niph/fit.hpp"
#include "niph/geometry.hpp"
#include "niph/persistence.hpp"
#include "niph/transport.hpp"

namespace niph {

/// Probe directions x factors. Probes are enumerated direction-major.
struct ProbePlan {
  std::vector<double> directions;
  std::vector<double> factors;
  int dim = 1;
  Weighting weighting = Weighting::unit;

  /// k angles offset + j pi / k.
  static ProbePlan evenly_spaced(int k, std::vector<double> factors, int dim, Weighting weighting,
                                 double offset = 0.0);
  /// 15 directions, 9 factors evenly spaced in [1.2, 2.5].
  static ProbePlan road_default(int dim = 0, Weighting weighting = Weighting::unit);
  /// 8 directions, factor 2.
  static ProbePlan synthetic_default(int dim = 1, Weighting weighting = Weighting::persistence_diff);

  ProbePlan rotated(double theta) const;
  /// k >= 2, distinct directions mod pi, factors > 1, dim in {0, 1}.
  void validate() const;
  std::vector<Probe> probes() const;
};

struct NiphConfig {
  /// Radius cap of the dimension-1 filtration (in the scaled metric).
  double r_max = kInfinity;
  KdeConfig kde;
  bool fit_enabled = true;
  FitConfig fit;
  FitBounds bounds;
  unsigned threads = 1;
  PersistenceBudget budget;
  /// Bins of the per-probe death-edge orientation histogram; 0 disables.
  int orientation_bins = 0;
  /// Wall-clock seconds in the report. Off by default so that reports are
  /// reproducible byte for byte.
  bool record_timing = false;
};

/// Everything computed for one probe against a fixed base distribution.
struct ProbeOutcome {
  PersistenceDiagram diagram;
  WeightedDeaths deaths;
  ShiftSet shifts;
  MultShiftDiagram shift_diagram;
};

/// Persistence on the probe-scaled metric, exact OT from `base` to it,
/// multiplicative shifts and their density peak.
ProbeOutcome run_probe(const PointCloud& cloud, const WeightedDeaths& base, const Probe& probe, int dim,
                       Weighting weighting, double r_max, const KdeConfig& kde = {},
                       const PersistenceBudget& budget = {});

struct ProbeSummary {
  double psi = 0.0;
  double factor = 1.0;
  double peak = 1.0;
  /// Total death-distribution weight carried by the shifts.
  double weight_mass = 0.0;
  std::size_t shift_count = 0;
  std::size_t dropped = 0;
  bool degenerate = false;
  MultShiftDiagram diagram;
  std::vector<double> orientation_histogram;
};

/// Spread of the peaks over all probes; larger means stronger orientation.
struct OrientationStrength {
  double max_peak = 1.0;
  double min_peak = 1.0;
  double range = 0.0;
};

struct NiphReport {
  std::string fingerprint;
  std::string provenance;
  std::size_t points = 0;
  int dim = 1;
  Weighting weighting = Weighting::unit;
  double r_max = kInfinity;
  std::size_t base_finite_pairs = 0;
  std::size_t base_truncated_pairs = 0;
  ProbePlan plan;
  std::vector<ProbeSummary> probes;
  OrientationStrength strength;
  std::optional<FitResult> fit;
  std::string fit_note;
  std::vector<double> base_orientation_histogram;
  std::optional<double> seconds;
  /// True when some probes did not complete (see PipelineError).
  bool partial = false;
};

/// A probe failed; carries the report of all probes completed before the
/// first failure (in plan order) and the original exception.
class PipelineError : public Error {
 public:
  PipelineError(const std::string& what, NiphReport partial, std::exception_ptr cause)
      : Error(what), partial_(std::move(partial)), cause_(std::move(cause)) {}
  const NiphReport& partial() const { return partial_; }
  std::exception_ptr cause() const { return cause_; }

 private:
  NiphReport partial_;
  std::exception_ptr cause_;
};

/// FNV-1a 64 over the dimension and coordinate bytes, as 16 hex digits.
std::string fingerprint(const PointCloud& cloud);

OrientationStrength orientation_strength(const std::vector<ProbeSummary>& probes);

/// Peak observations of a report, ready for fit_parameters.
std::vector<PeakObservation> peak_observations(const NiphReport& report);

/// The full pipeline: base persistence once, every probe of the plan, then
/// the (phi, V, s) fit over all peaks jointly.
NiphReport run_niph(const PointCloud& cloud, const ProbePlan& plan, const NiphConfig& cfg = {});

}  // namespace niph
