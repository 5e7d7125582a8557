#include "niph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numbers>

#include "niph/parallel.hpp"

namespace niph {

ProbePlan ProbePlan::evenly_spaced(int k, std::vector<double> factors, int dim, Weighting weighting, double offset) {
  if (k < 2) throw InvalidInput("probe plan: at least 2 directions required");
  ProbePlan plan;
  for (int j = 0; j < k; ++j) plan.directions.push_back(canonical_angle(offset + j * std::numbers::pi / k));
  plan.factors = std::move(factors);
  plan.dim = dim;
  plan.weighting = weighting;
  plan.validate();
  return plan;
}

ProbePlan ProbePlan::road_default(int dim, Weighting weighting) {
  std::vector<double> factors;
  for (int j = 0; j < 9; ++j) factors.push_back(1.2 + (2.5 - 1.2) * j / 8.0);
  return evenly_spaced(15, std::move(factors), dim, weighting);
}

ProbePlan ProbePlan::synthetic_default(int dim, Weighting weighting) {
  return evenly_spaced(8, {2.0}, dim, weighting);
}

ProbePlan ProbePlan::rotated(double theta) const {
  ProbePlan out = *this;
  for (auto& d : out.directions) d = canonical_angle(d + theta);
  return out;
}

void ProbePlan::validate() const {
  if (directions.size() < 2) throw InvalidInput("probe plan: at least 2 directions required");
  if (factors.empty()) throw InvalidInput("probe plan: at least one factor required");
  if (dim != 0 && dim != 1) throw InvalidInput("probe plan: dim must be 0 or 1");
  for (double f : factors) {
    if (!(f > 1.0) || !std::isfinite(f)) throw InvalidInput("probe plan: factors must be > 1");
  }
  std::vector<double> canon;
  for (double d : directions) {
    if (!std::isfinite(d)) throw InvalidInput("probe plan: non-finite direction");
    canon.push_back(canonical_angle(d));
  }
  std::sort(canon.begin(), canon.end());
  for (std::size_t k = 0; k < canon.size(); ++k) {
    const double next = k + 1 < canon.size() ? canon[k + 1] : canon.front() + std::numbers::pi;
    if (next - canon[k] < 1e-9) throw InvalidInput("probe plan: directions must be distinct mod pi");
  }
}

std::vector<Probe> ProbePlan::probes() const {
  std::vector<Probe> out;
  for (double d : directions) {
    for (double f : factors) out.push_back(Probe::from_angle(d, f));
  }
  return out;
}

ProbeOutcome run_probe(const PointCloud& cloud, const WeightedDeaths& base, const Probe& probe, int dim,
                       Weighting weighting, double r_max, const KdeConfig& kde, const PersistenceBudget& budget) {
  ProbeOutcome out;
  out.diagram = dim == 0 ? vr_persistence_0(cloud, probe) : vr_persistence_1(cloud, probe, r_max, budget);
  out.deaths = death_distribution(out.diagram, weighting);
  const auto plan = ot_1d(base, out.deaths);
  out.shifts = mult_shifts(plan, base, out.deaths);
  out.shift_diagram = shift_diagram(out.shifts.shifts, out.shifts.weights, probe, kde);
  return out;
}

std::string fingerprint(const PointCloud& cloud) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= bytes[k];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dim = cloud.dim();
  feed(&dim, sizeof dim);
  for (double v : cloud.coords()) {
    // Normalize -0.0 so equal clouds hash equally.
    const double c = v == 0.0 ? 0.0 : v;
    feed(&c, sizeof c);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

OrientationStrength orientation_strength(const std::vector<ProbeSummary>& probes) {
  OrientationStrength out;
  if (probes.empty()) return out;
  out.max_peak = -kInfinity;
  out.min_peak = kInfinity;
  for (const auto& p : probes) {
    out.max_peak = std::max(out.max_peak, p.peak);
    out.min_peak = std::min(out.min_peak, p.peak);
  }
  out.range = out.max_peak - out.min_peak;
  return out;
}

std::vector<PeakObservation> peak_observations(const NiphReport& report) {
  std::vector<PeakObservation> obs;
  for (const auto& p : report.probes) obs.push_back({p.psi, p.factor, p.peak, report.dim});
  return obs;
}

NiphReport run_niph(const PointCloud& cloud, const ProbePlan& plan, const NiphConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  plan.validate();
  if (cloud.dim() != 2) throw InvalidInput("niph: probe plans are 2-dimensional; cloud has dim " + std::to_string(cloud.dim()));
  if (cloud.size() < 2) throw DegenerateInput("niph: at least 2 points required");
  if (plan.dim == 1 && !(cfg.r_max > 0.0)) throw InvalidInput("niph: r_max must be > 0 for dimension 1");

  NiphReport report;
  report.fingerprint = fingerprint(cloud);
  report.provenance = cloud.provenance;
  report.points = cloud.size();
  report.dim = plan.dim;
  report.weighting = plan.weighting;
  report.r_max = plan.dim == 1 ? cfg.r_max : kInfinity;
  report.plan = plan;

  const auto base = vr_persistence(cloud, plan.dim, cfg.r_max, cfg.budget);
  report.base_finite_pairs = base.finite_count();
  report.base_truncated_pairs = base.truncated_count();
  const auto base_deaths = death_distribution(base, plan.weighting);
  if (cfg.orientation_bins > 0) {
    report.base_orientation_histogram =
        axial_histogram(death_edge_orientations(base, cloud, plan.weighting), cfg.orientation_bins);
  }

  const auto probes = plan.probes();
  std::vector<std::optional<ProbeSummary>> results(probes.size());
  std::vector<std::exception_ptr> failures(probes.size());
  parallel_for(probes.size(), cfg.threads, [&](std::size_t k) {
    try {
      const auto outcome =
          run_probe(cloud, base_deaths, probes[k], plan.dim, plan.weighting, cfg.r_max, cfg.kde, cfg.budget);
      ProbeSummary summary;
      summary.psi = probes[k].angle();
      summary.factor = probes[k].factor();
      summary.peak = outcome.shift_diagram.peak;
      for (double w : outcome.shifts.weights) summary.weight_mass += w;
      summary.shift_count = outcome.shifts.shifts.size();
      summary.dropped = outcome.shifts.dropped.size();
      summary.degenerate = outcome.shift_diagram.degenerate;
      summary.diagram = outcome.shift_diagram;
      if (cfg.orientation_bins > 0) {
        summary.orientation_histogram =
            axial_histogram(death_edge_orientations(outcome.diagram, cloud, plan.weighting), cfg.orientation_bins);
      }
      results[k] = std::move(summary);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  });

  for (std::size_t k = 0; k < probes.size(); ++k) {
    if (!failures[k]) continue;
    report.partial = true;
    for (std::size_t j = 0; j < k; ++j) report.probes.push_back(std::move(*results[j]));
    report.strength = orientation_strength(report.probes);
    std::string reason = "unknown error";
    try {
      std::rethrow_exception(failures[k]);
    } catch (const std::exception& e) {
      reason = e.what();
    } catch (...) {
    }
    char where[96];
    std::snprintf(where, sizeof where, "probe %zu (angle %.6g rad, factor %.6g) failed: ", k, probes[k].angle(),
                  probes[k].factor());
    throw PipelineError(where + reason, std::move(report), failures[k]);
  }

  for (auto& r : results) report.probes.push_back(std::move(*r));
  report.strength = orientation_strength(report.probes);

  if (cfg.fit_enabled) {
    const auto obs = peak_observations(report);
    if (obs.size() >= 3) {
      report.fit = fit_parameters(obs, cfg.bounds, cfg.fit);
    } else {
      report.fit_note = "fit skipped: at least 3 probes are required";
    }
  }
  if (cfg.record_timing) {
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return report;
}

}  // namespace niph
