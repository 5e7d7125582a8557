// niph command-line interface.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 resource budget.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "niph/error.hpp"
#include "niph/fit.hpp"
#include "niph/network.hpp"
#include "niph/pca.hpp"
#include "niph/persistence.hpp"
#include "niph/pipeline.hpp"
#include "niph/pointcloud_io.hpp"
#include "niph/report.hpp"
#include "niph/svg.hpp"
#include "niph/synth.hpp"

namespace {

using niph::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitResource = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw niph::InvalidInput("cannot write " + path);
  out << text;
}

template <typename Writer>
void write_with(const std::string& path, Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  write_text(path, buf.str());
}

niph::PointCloud read_cloud(const std::string& path) {
  if (path == "-") return niph::read_point_cloud_csv(std::cin, "<stdin>");
  auto cloud = niph::read_point_cloud_csv(std::filesystem::path(path));
  if (cloud.provenance.empty()) cloud.provenance = path;
  return cloud;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct GenerateOptions {
  std::string shape = "ellipse";
  int n1 = 5, n2 = 4;
  double d1 = 1.0, d2 = 2.0, noise = 0.0;
  std::string noise_kind = "uniform";
  int count = 200, points = 100;
  double region = 3000.0, region_aspect = 1.0, region_angle = 0.0;
  double phi = 0.0, var = 0.0, s = 2.0, size_min = 0.2, size_max = 2.0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_generate(const GenerateOptions& o) {
  niph::PointCloud cloud;
  Json sidecar;
  if (o.shape == "grid") {
    niph::GridSpec spec;
    spec.n1 = o.n1;
    spec.n2 = o.n2;
    spec.d1 = o.d1;
    spec.d2 = o.d2;
    spec.phi = o.phi;
    spec.noise_bound = o.noise;
    spec.noise = o.noise_kind == "gaussian" ? niph::GridNoise::gaussian : niph::GridNoise::uniform;
    if (o.noise_kind != "gaussian" && o.noise_kind != "uniform") throw UsageError("--noise-kind must be uniform or gaussian");
    spec.seed = o.seed;
    cloud = niph::gen_grid(spec);
    sidecar = {{"generator", "grid"}, {"n1", spec.n1}, {"n2", spec.n2}, {"d1", spec.d1}, {"d2", spec.d2},
               {"phi", spec.phi}, {"noise_bound", spec.noise_bound}, {"noise_kind", o.noise_kind}, {"seed", spec.seed}};
  } else {
    niph::ShapeFieldSpec spec;
    try {
      spec.shape = niph::parse_shape_kind(o.shape);
    } catch (const niph::InvalidInput& e) {
      throw UsageError(e.what());
    }
    spec.count = o.count;
    spec.points_per_shape = o.points;
    spec.region = o.region;
    spec.region_aspect = o.region_aspect;
    spec.region_angle = o.region_angle;
    spec.phi = o.phi;
    spec.var = o.var;
    spec.s = o.shape == "circle" ? 1.0 : o.s;
    spec.size_min = o.size_min;
    spec.size_max = o.size_max;
    spec.seed = o.seed;
    cloud = niph::gen_shape_field(spec);
    sidecar = {{"generator", "shape_field"}, {"shape", o.shape}, {"count", spec.count},
               {"points_per_shape", spec.points_per_shape}, {"region", spec.region},
               {"region_aspect", spec.region_aspect}, {"region_angle", spec.region_angle}, {"phi", spec.phi},
               {"var", spec.var}, {"s", spec.s}, {"size_min", spec.size_min}, {"size_max", spec.size_max},
               {"seed", spec.seed}};
  }
  sidecar["points"] = cloud.size();
  write_with(o.output, [&](std::ostream& out) { niph::write_point_cloud_csv(out, cloud, sidecar.dump()); });
  if (!o.output.empty() && o.output != "-") write_text(o.output + ".json", sidecar.dump(2) + "\n");
  return kExitOk;
}

struct NetworkOptions {
  std::string input;
  std::vector<std::string> filter;
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  std::string output;
};

int run_sample_network(const NetworkOptions& o) {
  const auto net = niph::read_geojson_network(std::filesystem::path(o.input));
  const auto cloud = niph::sample_network(net, o.filter, o.count, o.seed);
  Json meta = {{"source", o.input}, {"count", o.count}, {"seed", o.seed}, {"filter", o.filter},
               {"projected", net.projected}};
  if (net.projected) {
    meta["origin_lon"] = net.origin_lon;
    meta["origin_lat"] = net.origin_lat;
  }
  write_with(o.output, [&](std::ostream& out) { niph::write_point_cloud_csv(out, cloud, meta.dump()); });
  return kExitOk;
}

struct PhOptions {
  std::string input;
  int dim = 0;
  double r_max = niph::kInfinity;
  std::optional<double> probe_angle;
  double probe_scale = 1.0;
  std::string format = "json";
  std::string output;
  std::size_t max_edges = niph::PersistenceBudget{}.max_edges;
};

int run_ph(const PhOptions& o) {
  const auto cloud = read_cloud(o.input);
  if (o.dim == 1 && !std::isfinite(o.r_max)) throw UsageError("--rmax is required for --dim 1");
  niph::PersistenceBudget budget;
  budget.max_edges = o.max_edges;
  niph::PersistenceDiagram diagram;
  if (o.probe_angle || o.probe_scale != 1.0) {
    const auto probe = niph::Probe::from_angle(o.probe_angle.value_or(0.0), o.probe_scale);
    diagram = o.dim == 0 ? niph::vr_persistence_0(cloud, probe) : niph::vr_persistence_1(cloud, probe, o.r_max, budget);
  } else {
    diagram = niph::vr_persistence(cloud, o.dim, o.r_max, budget);
  }
  if (o.format == "csv") {
    write_with(o.output, [&](std::ostream& out) { niph::write_diagram_csv(out, diagram); });
  } else {
    write_text(o.output, niph::to_json(diagram).dump(2) + "\n");
  }
  return kExitOk;
}

struct FitOptions {
  int evaluations = 5000;
  int restarts = 8;
  std::uint64_t seed = 0;
  double var_max = 1.0;
  double s_max = 10.0;
  std::string fold = "integral";
  std::size_t nodes = 33;
  std::string quadrature = "piecewise";
  bool raw_s = false;
};

void apply_fit_options(const FitOptions& o, unsigned threads, niph::FitConfig& cfg, niph::FitBounds& bounds) {
  cfg.evaluations = o.evaluations;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.threads = threads;
  cfg.model.quadrature_nodes = o.nodes;
  cfg.model.quadrature = o.quadrature == "hermite" ? niph::Quadrature::gauss_hermite : niph::Quadrature::piecewise;
  cfg.model.fold = o.fold == "argmax" ? niph::FoldMode::argmax : niph::FoldMode::weighted_integral;
  cfg.resolve_flat_s = !o.raw_s;
  bounds.var_max = o.var_max;
  bounds.s_max = o.s_max;
}

struct NiphOptions {
  std::string input;
  int dim = 1;
  std::optional<int> directions;
  std::vector<double> scales;
  std::string weighting;
  double r_max = niph::kInfinity;
  int bins = 0;
  bool no_fit = false;
  bool timing = false;
  std::size_t max_edges = niph::PersistenceBudget{}.max_edges;
  std::string output;
  std::string shifts_csv;
  std::string curves_csv;
  std::string peaks_csv;
  FitOptions fit;
};

int run_niph_cmd(const NiphOptions& o, unsigned threads) {
  const auto cloud = read_cloud(o.input);
  if (o.dim == 1 && !std::isfinite(o.r_max)) throw UsageError("--rmax is required for --dim 1");
  const auto weighting = o.weighting.empty()
                             ? (o.dim == 0 ? niph::Weighting::unit : niph::Weighting::persistence_diff)
                             : niph::parse_weighting(o.weighting);
  niph::ProbePlan plan;
  if (!o.directions && o.scales.empty()) {
    plan = o.dim == 0 ? niph::ProbePlan::road_default(0, weighting) : niph::ProbePlan::synthetic_default(1, weighting);
  } else {
    const int k = o.directions.value_or(o.dim == 0 ? 15 : 8);
    auto scales = o.scales;
    if (scales.empty()) scales = {2.0};
    try {
      plan = niph::ProbePlan::evenly_spaced(k, scales, o.dim, weighting);
    } catch (const niph::InvalidInput& e) {
      throw UsageError(e.what());
    }
  }
  niph::NiphConfig cfg;
  cfg.r_max = o.r_max;
  cfg.threads = threads;
  cfg.fit_enabled = !o.no_fit;
  cfg.orientation_bins = o.bins;
  cfg.record_timing = o.timing;
  cfg.budget.max_edges = o.max_edges;
  apply_fit_options(o.fit, threads, cfg.fit, cfg.bounds);

  auto emit = [&](const niph::NiphReport& report) {
    write_text(o.output, niph::to_json(report, cfg).dump(2) + "\n");
    if (!o.shifts_csv.empty()) write_with(o.shifts_csv, [&](std::ostream& out) { niph::write_shifts_csv(out, report.probes); });
    if (!o.curves_csv.empty()) write_with(o.curves_csv, [&](std::ostream& out) { niph::write_curves_csv(out, report.probes); });
    if (!o.peaks_csv.empty()) {
      write_with(o.peaks_csv, [&](std::ostream& out) { niph::write_peaks_csv(out, report.probes, report.dim); });
    }
  };
  try {
    emit(niph::run_niph(cloud, plan, cfg));
  } catch (const niph::PipelineError& e) {
    emit(e.partial());
    std::cerr << "niph: " << e.what() << "\n";
    std::rethrow_exception(e.cause());
  }
  return kExitOk;
}

int run_fit(const std::string& input, const FitOptions& o, unsigned threads, const std::string& output) {
  std::vector<niph::PeakObservation> obs;
  if (input == "-") {
    obs = niph::read_peaks_csv(std::cin, "<stdin>");
  } else {
    std::ifstream in(input);
    if (!in) throw niph::InvalidInput("cannot open " + input);
    obs = niph::read_peaks_csv(in, input);
  }
  niph::FitConfig cfg;
  niph::FitBounds bounds;
  apply_fit_options(o, threads, cfg, bounds);
  const auto fit = niph::fit_parameters(obs, bounds, cfg);
  write_text(output, niph::to_json(fit, bounds, cfg).dump(2) + "\n");
  return kExitOk;
}

int run_pca(const std::string& input, const std::string& output) {
  const auto cloud = read_cloud(input);
  const auto pca = niph::pca_orientation(cloud);
  Json out;
  out["angle_rad"] = niph::round9(pca.angle);
  out["angle_deg"] = niph::round9(pca.angle * 180.0 / std::numbers::pi);
  if (std::isfinite(pca.ratio)) {
    out["ratio"] = niph::round9(pca.ratio);
  } else {
    out["ratio"] = "inf";
  }
  out["points"] = cloud.size();
  write_text(output, out.dump(2) + "\n");
  return kExitOk;
}

int run_plot(const std::string& input, const std::string& output, const std::string& title) {
  std::vector<niph::PlotSeries> series;
  if (input == "-") {
    series = niph::read_plot_series(std::cin, "<stdin>");
  } else {
    std::ifstream in(input);
    if (!in) throw niph::InvalidInput("cannot open " + input);
    series = niph::read_plot_series(in, input);
  }
  niph::PlotStyle style;
  style.title = title;
  write_text(output, niph::render_line_plot(series, style));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-isotropic persistent homology: orientation analysis of point clouds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a key=value config file");
  unsigned threads = default_threads();
  app.add_option("--threads", threads, "Worker threads")->envname("NIPH_THREADS")->check(CLI::PositiveNumber);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Synthetic point cloud (grid or shape field) to CSV");
  generate->add_option("--shape", gen.shape, "grid | ellipse | rectangle | circle")
      ->check(CLI::IsMember({"grid", "ellipse", "rectangle", "circle"}));
  generate->add_option("--n1", gen.n1, "Grid points along the short spacing");
  generate->add_option("--n2", gen.n2, "Grid points along the long spacing");
  generate->add_option("--d1", gen.d1, "Short grid spacing");
  generate->add_option("--d2", gen.d2, "Long grid spacing");
  generate->add_option("--noise", gen.noise, "Grid noise bound (uniform) or standard deviation (gaussian)");
  generate->add_option("--noise-kind", gen.noise_kind, "uniform | gaussian");
  generate->add_option("--count", gen.count, "Number of shapes");
  generate->add_option("--points", gen.points, "Points per shape");
  generate->add_option("--region", gen.region, "Side of the square region holding the shape centers");
  generate->add_option("--region-aspect", gen.region_aspect, "Region height / width");
  generate->add_option("--region-angle", gen.region_angle, "Rotation of the region (radians)");
  generate->add_option("--phi", gen.phi, "Orientation (radians)");
  generate->add_option("--var", gen.var, "Orientational variance (radians^2)");
  generate->add_option("--s", gen.s, "Scaling factor, long / short axis");
  generate->add_option("--size-min", gen.size_min, "Smallest short size");
  generate->add_option("--size-max", gen.size_max, "Largest short size");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("-o,--output", gen.output, "Output CSV (stdout when omitted); writes <output>.json too");

  NetworkOptions netopt;
  auto* sample = app.add_subcommand("sample-network", "Length-uniform point sample of a GeoJSON road network");
  sample->add_option("input", netopt.input, "GeoJSON FeatureCollection")->required();
  sample->add_option("--filter", netopt.filter, "Road types (properties.highway) to keep")->delimiter(',');
  sample->add_option("--count", netopt.count, "Number of points");
  sample->add_option("--seed", netopt.seed, "Random seed");
  sample->add_option("-o,--output", netopt.output, "Output CSV (stdout when omitted)");

  PhOptions ph;
  auto* phcmd = app.add_subcommand("ph", "Vietoris-Rips persistence diagram of a CSV point cloud");
  phcmd->add_option("input", ph.input, "Point cloud CSV ('-' for stdin)")->required();
  phcmd->add_option("--dim", ph.dim, "Homology dimension")->check(CLI::IsMember({0, 1}));
  phcmd->add_option("--rmax", ph.r_max, "Radius cap (required for --dim 1)")->check(CLI::PositiveNumber);
  phcmd->add_option("--probe-angle", ph.probe_angle, "Probe direction (radians)");
  phcmd->add_option("--probe-scale", ph.probe_scale, "Probe factor")->check(CLI::PositiveNumber);
  phcmd->add_option("--format", ph.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  phcmd->add_option("--max-edges", ph.max_edges, "Edge budget of the dimension-1 filtration")
      ->check(CLI::PositiveNumber);
  phcmd->add_option("-o,--output", ph.output, "Output file (stdout when omitted)");

  auto add_fit_flags = [](CLI::App* cmd, FitOptions& f) {
    cmd->add_option("--seed", f.seed, "Optimizer seed");
    cmd->add_option("--evaluations", f.evaluations, "Annealing evaluations per restart")->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", f.restarts, "Annealing restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--var-max", f.var_max, "Upper bound of V (radians^2)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--s-max", f.s_max, "Upper bound of s")->check(CLI::Range(1.0, 1e6));
    cmd->add_option("--fold", f.fold, "integral | argmax")->check(CLI::IsMember({"integral", "argmax"}));
    cmd->add_option("--nodes", f.nodes, "Quadrature nodes (per smooth piece for piecewise)")->check(CLI::Range(1, 512));
    cmd->add_option("--quadrature", f.quadrature, "piecewise | hermite")->check(CLI::IsMember({"piecewise", "hermite"}));
    cmd->add_flag("--raw-s", f.raw_s, "Report the optimizer's s without resolving flat residual regions");
  };

  NiphOptions ni;
  auto* niphcmd = app.add_subcommand("niph", "Full pipeline: probes, shift diagrams, peaks and fit");
  niphcmd->add_option("input", ni.input, "Point cloud CSV ('-' for stdin)")->required();
  niphcmd->add_option("--dim", ni.dim, "Homology dimension")->check(CLI::IsMember({0, 1}));
  niphcmd->add_option("--directions", ni.directions, "Number of evenly spaced probe directions")
      ->check(CLI::Range(2, 100000));
  niphcmd->add_option("--scales", ni.scales, "Probe factors (> 1), comma separated")->delimiter(',');
  niphcmd->add_option("--weighting", ni.weighting, "unit | diff | ratio")
      ->check(CLI::IsMember({"unit", "diff", "ratio", "persistence-diff", "persistence-ratio"}));
  niphcmd->add_option("--rmax", ni.r_max, "Radius cap (required for --dim 1)")->check(CLI::PositiveNumber);
  niphcmd->add_option("--bins", ni.bins, "Death-edge orientation histogram bins (0 = off)")
      ->check(CLI::NonNegativeNumber);
  niphcmd->add_option("--max-edges", ni.max_edges, "Edge budget of the dimension-1 filtration")
      ->check(CLI::PositiveNumber);
  niphcmd->add_flag("--no-fit", ni.no_fit, "Skip the (phi, V, s) fit");
  niphcmd->add_flag("--timing", ni.timing, "Record wall-clock seconds in the report");
  niphcmd->add_option("-o,--output", ni.output, "Report JSON (stdout when omitted)");
  niphcmd->add_option("--shifts-csv", ni.shifts_csv, "Write per-probe shifts");
  niphcmd->add_option("--curves-csv", ni.curves_csv, "Write per-probe density curves");
  niphcmd->add_option("--peaks-csv", ni.peaks_csv, "Write per-probe peaks (input for `fit`)");
  add_fit_flags(niphcmd, ni.fit);

  std::string fit_input, fit_output;
  FitOptions fitopt;
  auto* fitcmd = app.add_subcommand("fit", "Fit (phi, V, s) to a peaks CSV");
  fitcmd->add_option("input", fit_input, "Peaks CSV: probe_angle, probe_scale, peak[, dim]")->required();
  fitcmd->add_option("-o,--output", fit_output, "FitResult JSON (stdout when omitted)");
  add_fit_flags(fitcmd, fitopt);

  std::string pca_input, pca_output;
  auto* pcacmd = app.add_subcommand("pca", "Global PCA orientation of a CSV point cloud");
  pcacmd->add_option("input", pca_input, "Point cloud CSV")->required();
  pcacmd->add_option("-o,--output", pca_output, "JSON output (stdout when omitted)");

  std::string plot_input, plot_output, plot_title;
  auto* plotcmd = app.add_subcommand("plot", "SVG line plot of a curves or shifts CSV");
  plotcmd->add_option("input", plot_input, "Curves or shifts CSV")->required();
  plotcmd->add_option("-o,--output", plot_output, "SVG output (stdout when omitted)");
  plotcmd->add_option("--title", plot_title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*sample) return run_sample_network(netopt);
    if (*phcmd) return run_ph(ph);
    if (*niphcmd) return run_niph_cmd(ni, threads);
    if (*fitcmd) return run_fit(fit_input, fitopt, threads, fit_output);
    if (*pcacmd) return run_pca(pca_input, pca_output);
    if (*plotcmd) return run_plot(plot_input, plot_output, plot_title);
  } catch (const UsageError& e) {
    std::cerr << "niph: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const niph::ResourceError& e) {
    std::cerr << "niph: resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const niph::Error& e) {
    std::cerr << "niph: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::bad_alloc&) {
    std::cerr << "niph: resource limit: out of memory\n";
    return kExitResource;
  }
  return kExitUsage;
}
