#include <gtest/gtest.h>

#include <sstream>

#include "niph/report.hpp"
#include "niph/svg.hpp"
#include "niph/synth.hpp"

namespace {

struct Fixture {
  niph::NiphConfig cfg;
  niph::NiphReport report;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    niph::ShapeFieldSpec spec;
    spec.count = 6;
    spec.points_per_shape = 40;
    spec.region = 300.0;
    spec.seed = 11;
    auto cloud = niph::gen_shape_field(spec);
    cloud.provenance = "unit test field";
    Fixture out;
    out.cfg.r_max = 12.0;
    out.cfg.fit.restarts = 2;
    out.cfg.fit.evaluations = 1000;
    out.cfg.orientation_bins = 6;
    out.report = niph::run_niph(cloud, niph::ProbePlan::evenly_spaced(4, {2.0}, 1, niph::Weighting::persistence_diff),
                                out.cfg);
    return out;
  }();
  return f;
}

TEST(ReportJson, TopLevelSchema) {
  const auto& f = fixture();
  const auto j = niph::to_json(f.report, f.cfg);
  for (const char* key : {"fingerprint", "provenance", "points", "dim", "weighting", "r_max", "base_finite_pairs",
                          "base_truncated_pairs", "plan", "kde", "partial", "probes", "strength", "fit",
                          "base_orientation_histogram"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_EQ(j["provenance"], "unit test field");
  EXPECT_EQ(j["weighting"], "persistence-diff");
  EXPECT_EQ(j["r_max"], 12.0);
  EXPECT_EQ(j["plan"]["directions"].size(), 4u);
  EXPECT_EQ(j["probes"].size(), 4u);
  EXPECT_EQ(j["base_orientation_histogram"].size(), 6u);
  const auto& probe = j["probes"][0];
  for (const char* key : {"probe_angle", "probe_scale", "peak", "weight_mass", "shifts", "dropped", "degenerate",
                          "bandwidth", "orientation_histogram"}) {
    EXPECT_TRUE(probe.contains(key)) << key;
  }
  const auto& fit = j["fit"];
  for (const char* key : {"phi_rad", "phi_deg", "var", "sqrt_var", "s", "residual", "evaluations", "config_echo"}) {
    EXPECT_TRUE(fit.contains(key)) << key;
  }
  EXPECT_EQ(fit["config_echo"]["quadrature"], "piecewise");
  EXPECT_EQ(fit["config_echo"]["resolve_flat_s"], true);
  EXPECT_EQ(fit["config_echo"]["restarts"], 2);
}

TEST(ReportJson, ByteStable) {
  const auto& f = fixture();
  EXPECT_EQ(niph::to_json(f.report, f.cfg).dump(), niph::to_json(f.report, f.cfg).dump());
}

TEST(ReportJson, InfinityAsString) {
  niph::PersistenceDiagram d;
  d.dim = 1;
  d.r_max = 2.0;
  niph::PersistencePair open;
  open.birth = 1.5;
  open.dim = 1;
  open.truncated = true;
  d.pairs.push_back(open);
  const auto j = niph::to_json(d);
  EXPECT_EQ(j["pairs"][0]["death"], "inf");
  EXPECT_TRUE(j["pairs"][0]["death_edge"].is_null());
  EXPECT_EQ(j["truncated_pairs"], 1u);

  auto report = fixture().report;
  report.fit.reset();
  report.r_max = niph::kInfinity;
  const auto r = niph::to_json(report, fixture().cfg);
  EXPECT_EQ(r["r_max"], "inf");
  EXPECT_TRUE(r["fit"].is_null());
}

TEST(ReportJson, NumbersRoundedToNineDigits) {
  niph::TransportPlan plan;
  plan.rows = 1;
  plan.cols = 1;
  plan.source_mass = {1.0 / 3.0};
  plan.target_mass = {1.0};
  plan.entries.push_back({0, 0, 1.0 / 3.0});
  const auto j = niph::to_json(plan);
  EXPECT_EQ(j["entries"][0]["mass"].get<double>(), 0.333333333);
}

TEST(ReportCsv, PeaksRoundTrip) {
  const auto& f = fixture();
  std::stringstream ss;
  niph::write_peaks_csv(ss, f.report.probes, 1);
  const auto obs = niph::read_peaks_csv(ss);
  ASSERT_EQ(obs.size(), f.report.probes.size());
  for (std::size_t k = 0; k < obs.size(); ++k) {
    EXPECT_NEAR(obs[k].psi, f.report.probes[k].psi, 1e-8);
    EXPECT_NEAR(obs[k].factor, f.report.probes[k].factor, 1e-8);
    EXPECT_NEAR(obs[k].peak, f.report.probes[k].peak, 1e-8 * f.report.probes[k].peak);
    EXPECT_EQ(obs[k].dim, 1);
  }
}

TEST(ReportCsv, PeaksReaderErrors) {
  std::istringstream no_header("0.1,2,1.5,1\n");
  EXPECT_THROW(niph::read_peaks_csv(no_header), niph::InvalidInput);
  std::istringstream bad("probe_angle,probe_scale,peak\n0.1,2,abc\n");
  try {
    niph::read_peaks_csv(bad, "peaks.csv");
    FAIL();
  } catch (const niph::InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("peaks.csv:2"), std::string::npos);
  }
  std::istringstream no_dim("# probe_angle, probe_scale, peak\n0.5, 2, 1.25\n");
  const auto obs = niph::read_peaks_csv(no_dim);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_EQ(obs[0].dim, 1);
  EXPECT_EQ(obs[0].peak, 1.25);
}

TEST(ReportCsv, ShiftsAndCurvesRows) {
  const auto& f = fixture();
  std::stringstream shifts;
  niph::write_shifts_csv(shifts, f.report.probes);
  std::stringstream curves;
  niph::write_curves_csv(curves, f.report.probes);
  std::size_t shift_rows = 0;
  std::size_t curve_rows = 0;
  for (const auto& p : f.report.probes) {
    shift_rows += p.diagram.shifts.size();
    curve_rows += p.diagram.density.grid.size();
  }
  auto count_lines = [](std::stringstream& ss) {
    std::size_t n = 0;
    std::string line;
    while (std::getline(ss, line)) ++n;
    return n;
  };
  EXPECT_EQ(count_lines(shifts), shift_rows + 1);
  EXPECT_EQ(count_lines(curves), curve_rows + 1);
}

TEST(ReportCsv, DiagramColumns) {
  niph::PersistenceDiagram d;
  d.dim = 1;
  niph::PersistencePair p;
  p.birth = 1.0;
  p.death = 2.0;
  p.dim = 1;
  p.death_edge = std::array<std::size_t, 2>{3, 7};
  d.pairs.push_back(p);
  niph::PersistencePair open;
  open.birth = 1.5;
  open.dim = 1;
  open.truncated = true;
  d.pairs.push_back(open);
  std::ostringstream out;
  niph::write_diagram_csv(out, d);
  EXPECT_EQ(out.str(), "birth,death,dim,edge_i,edge_j,truncated\n1,2,1,3,7,0\n1.5,inf,1,,,1\n");
}

TEST(Svg, PlotFromShiftsAndCurves) {
  const auto& f = fixture();
  std::stringstream shifts;
  niph::write_shifts_csv(shifts, f.report.probes);
  const auto from_shifts = niph::read_plot_series(shifts);
  ASSERT_EQ(from_shifts.size(), 4u);
  std::stringstream curves;
  niph::write_curves_csv(curves, f.report.probes);
  const auto from_curves = niph::read_plot_series(curves);
  ASSERT_EQ(from_curves.size(), 4u);
  for (const auto& s : from_curves) {
    EXPECT_EQ(s.x.size(), s.y.size());
    EXPECT_FALSE(s.label.empty());
  }
  niph::PlotStyle style;
  style.title = "a < b & c";
  const auto svg = niph::render_line_plot(from_curves, style);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
  std::size_t lines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
  EXPECT_EQ(lines, 4u);
}

TEST(Svg, ReaderErrors) {
  std::istringstream wrong("a,b,c\n1,2,3\n");
  EXPECT_THROW(niph::read_plot_series(wrong), niph::InvalidInput);
  std::istringstream empty("probe_angle,probe_scale,x,density\n");
  EXPECT_THROW(niph::read_plot_series(empty), niph::InvalidInput);
  std::istringstream degenerate("probe_angle,probe_scale,shift,weight\n0,2,1.5,1\n0,2,1.5,1\n");
  EXPECT_EQ(niph::read_plot_series(degenerate).size(), 1u);
}

TEST(Svg, EmptySeriesStillRenders) {
  const auto svg = niph::render_line_plot({});
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

}  // namespace
