#include "niph/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "niph/error.hpp"
#include "niph/pointcloud_io.hpp"

namespace niph {

namespace {

Json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return round9(v);
}

Json nums(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace

Json to_json(const PersistenceDiagram& diagram) {
  Json pairs = Json::array();
  for (const auto& p : diagram.pairs) {
    Json j;
    j["birth"] = num(p.birth);
    j["death"] = num(p.death);
    j["dim"] = p.dim;
    if (p.death_edge) {
      j["death_edge"] = {(*p.death_edge)[0], (*p.death_edge)[1]};
    } else {
      j["death_edge"] = nullptr;
    }
    j["truncated"] = p.truncated;
    pairs.push_back(std::move(j));
  }
  Json out;
  out["dim"] = diagram.dim;
  out["r_max"] = num(diagram.r_max);
  out["no_edges_warning"] = diagram.no_edges_warning;
  out["finite_pairs"] = diagram.finite_count();
  out["truncated_pairs"] = diagram.truncated_count();
  out["pairs"] = std::move(pairs);
  return out;
}

Json to_json(const TransportPlan& plan) {
  Json entries = Json::array();
  for (const auto& e : plan.entries) entries.push_back({{"i", e.i}, {"j", e.j}, {"mass", num(e.mass)}});
  Json out;
  out["rows"] = plan.rows;
  out["cols"] = plan.cols;
  out["source_mass"] = nums(plan.source_mass);
  out["target_mass"] = nums(plan.target_mass);
  out["entries"] = std::move(entries);
  return out;
}

Json to_json(const FitResult& fit, const FitBounds& bounds, const FitConfig& cfg) {
  Json echo;
  echo["var_max"] = num(bounds.var_max);
  echo["s_min"] = num(bounds.s_min);
  echo["s_max"] = num(bounds.s_max);
  echo["evaluations_per_restart"] = cfg.evaluations;
  echo["restarts"] = cfg.restarts;
  echo["seed"] = cfg.seed;
  echo["quadrature_nodes"] = cfg.model.quadrature_nodes;
  echo["quadrature"] = cfg.model.quadrature == Quadrature::gauss_hermite ? "gauss_hermite" : "piecewise";
  echo["fold"] = cfg.model.fold == FoldMode::argmax ? "argmax" : "weighted_integral";
  echo["resolve_flat_s"] = cfg.resolve_flat_s;
  Json out;
  out["phi_rad"] = num(fit.phi);
  out["phi_deg"] = num(fit.phi * 180.0 / std::numbers::pi);
  out["var"] = num(fit.var);
  out["sqrt_var"] = num(fit.sqrt_var());
  out["s"] = num(fit.s);
  out["residual"] = num(fit.residual);
  out["evaluations"] = fit.evaluations;
  out["config_echo"] = std::move(echo);
  return out;
}

Json to_json(const ProbePlan& plan) {
  Json out;
  out["directions"] = nums(plan.directions);
  out["factors"] = nums(plan.factors);
  out["dim"] = plan.dim;
  out["weighting"] = std::string(to_string(plan.weighting));
  return out;
}

Json to_json(const NiphReport& report, const NiphConfig& cfg) {
  Json probes = Json::array();
  for (const auto& p : report.probes) {
    Json j;
    j["probe_angle"] = num(p.psi);
    j["probe_scale"] = num(p.factor);
    j["peak"] = num(p.peak);
    j["weight_mass"] = num(p.weight_mass);
    j["shifts"] = p.shift_count;
    j["dropped"] = p.dropped;
    j["degenerate"] = p.degenerate;
    j["bandwidth"] = num(p.diagram.density.bandwidth);
    if (!p.orientation_histogram.empty()) j["orientation_histogram"] = nums(p.orientation_histogram);
    probes.push_back(std::move(j));
  }
  Json out;
  out["fingerprint"] = report.fingerprint;
  out["provenance"] = report.provenance;
  out["points"] = report.points;
  out["dim"] = report.dim;
  out["weighting"] = std::string(to_string(report.weighting));
  out["r_max"] = num(report.r_max);
  out["base_finite_pairs"] = report.base_finite_pairs;
  out["base_truncated_pairs"] = report.base_truncated_pairs;
  out["plan"] = to_json(report.plan);
  Json kde;
  kde["grid_points"] = cfg.kde.grid_points;
  kde["pad_bandwidths"] = num(cfg.kde.pad_bandwidths);
  kde["refine_peak"] = cfg.kde.refine_peak;
  out["kde"] = std::move(kde);
  out["partial"] = report.partial;
  out["probes"] = std::move(probes);
  out["strength"] = {{"max_peak", num(report.strength.max_peak)},
                     {"min_peak", num(report.strength.min_peak)},
                     {"range", num(report.strength.range)}};
  if (report.fit) {
    out["fit"] = to_json(*report.fit, cfg.bounds, cfg.fit);
  } else {
    out["fit"] = nullptr;
  }
  if (!report.fit_note.empty()) out["fit_note"] = report.fit_note;
  if (!report.base_orientation_histogram.empty()) {
    out["base_orientation_histogram"] = nums(report.base_orientation_histogram);
  }
  if (report.seconds) out["seconds"] = num(*report.seconds);
  return out;
}

void write_shifts_csv(std::ostream& out, const std::vector<ProbeSummary>& probes) {
  out << "probe_angle,probe_scale,shift,weight\n";
  for (const auto& p : probes) {
    for (std::size_t k = 0; k < p.diagram.shifts.size(); ++k) {
      out << format_number(p.psi) << ',' << format_number(p.factor) << ',' << format_number(p.diagram.shifts[k])
          << ',' << format_number(p.diagram.weights[k]) << '\n';
    }
  }
}

void write_curves_csv(std::ostream& out, const std::vector<ProbeSummary>& probes) {
  out << "probe_angle,probe_scale,x,density\n";
  for (const auto& p : probes) {
    const auto& c = p.diagram.density;
    for (std::size_t k = 0; k < c.grid.size(); ++k) {
      out << format_number(p.psi) << ',' << format_number(p.factor) << ',' << format_number(c.grid[k]) << ','
          << format_number(c.values[k]) << '\n';
    }
  }
}

void write_peaks_csv(std::ostream& out, const std::vector<ProbeSummary>& probes, int dim) {
  out << "probe_angle,probe_scale,peak,dim\n";
  for (const auto& p : probes) {
    out << format_number(p.psi) << ',' << format_number(p.factor) << ',' << format_number(p.peak) << ',' << dim
        << '\n';
  }
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "birth,death,dim,edge_i,edge_j,truncated\n";
  for (const auto& p : diagram.pairs) {
    out << format_number(p.birth) << ',' << format_number(p.death) << ',' << p.dim << ',';
    if (p.death_edge) {
      out << (*p.death_edge)[0] << ',' << (*p.death_edge)[1];
    } else {
      out << ',';
    }
    out << ',' << (p.truncated ? 1 : 0) << '\n';
  }
}

std::vector<PeakObservation> read_peaks_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  int col_angle = -1, col_scale = -1, col_peak = -1, col_dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto header = split_csv(line[0] == '#' ? line.substr(1) : line);
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == "probe_angle") col_angle = static_cast<int>(k);
      if (header[k] == "probe_scale") col_scale = static_cast<int>(k);
      if (header[k] == "peak") col_peak = static_cast<int>(k);
      if (header[k] == "dim") col_dim = static_cast<int>(k);
    }
    break;
  }
  if (col_angle < 0 || col_scale < 0 || col_peak < 0) {
    throw InvalidInput(source + ": peaks CSV needs a header with probe_angle, probe_scale and peak columns");
  }
  std::vector<PeakObservation> obs;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    auto cell = [&](int col) {
      if (col >= static_cast<int>(cells.size())) {
        throw InvalidInput(source + ":" + std::to_string(lineno) + ": missing column");
      }
      const auto& text = cells[static_cast<std::size_t>(col)];
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw InvalidInput(source + ":" + std::to_string(lineno) + ": not a finite number: '" + text + "'");
      }
      return v;
    };
    PeakObservation o;
    o.psi = cell(col_angle);
    o.factor = cell(col_scale);
    o.peak = cell(col_peak);
    o.dim = col_dim >= 0 ? static_cast<int>(cell(col_dim)) : 1;
    obs.push_back(o);
  }
  return obs;
}

}  // namespace niph
