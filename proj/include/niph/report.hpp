#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "niph/fit.hpp"
#include "niph/persistence.hpp"
#include "niph/pipeline.hpp"
#include "niph/transport.hpp"

namespace niph {

using Json = nlohmann::ordered_json;

// All numbers pass through round9 so that output is stable at 9 significant
// digits. Infinite values are written as the string "inf".

Json to_json(const PersistenceDiagram& diagram);
/// Sparse triplets {i, j, mass}.
Json to_json(const TransportPlan& plan);
/// {phi_rad, phi_deg, var, sqrt_var, s, residual, evaluations, config_echo}
Json to_json(const FitResult& fit, const FitBounds& bounds, const FitConfig& cfg);
Json to_json(const ProbePlan& plan);
Json to_json(const NiphReport& report, const NiphConfig& cfg);

/// One row per shift: probe_angle, probe_scale, shift, weight.
void write_shifts_csv(std::ostream& out, const std::vector<ProbeSummary>& probes);
/// One row per grid point: probe_angle, probe_scale, x, density.
void write_curves_csv(std::ostream& out, const std::vector<ProbeSummary>& probes);
/// One row per probe: probe_angle, probe_scale, peak, dim. Readable by `fit`.
void write_peaks_csv(std::ostream& out, const std::vector<ProbeSummary>& probes, int dim);
/// birth, death, dim, edge_i, edge_j, truncated
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);

/// Reads the format written by write_peaks_csv (header required).
std::vector<PeakObservation> read_peaks_csv(std::istream& in, const std::string& source = "<stream>");

}  // namespace niph
