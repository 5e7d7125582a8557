#include "niph/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "niph/error.hpp"

namespace niph {

namespace {

std::vector<std::size_t> sorted_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

std::vector<double> normalized(const std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = w[k] / total;
  return out;
}

double log_sum_exp(const std::vector<double>& v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

}  // namespace

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> out(rows, 0.0);
  for (const auto& e : entries) out[e.i] += e.mass;
  return out;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> out(cols, 0.0);
  for (const auto& e : entries) out[e.j] += e.mass;
  return out;
}

TransportPlan ot_1d(const WeightedDeaths& mu, const WeightedDeaths& nu) {
  mu.validate();
  nu.validate();
  TransportPlan plan;
  plan.rows = mu.size();
  plan.cols = nu.size();
  plan.source_mass = normalized(mu.weights);
  plan.target_mass = normalized(nu.weights);

  const auto order_a = sorted_order(mu.deaths);
  const auto order_b = sorted_order(nu.deaths);

  // Walk both cumulative distributions; each step transports the overlap of
  // the current quantile intervals. Breakpoints closer than `snap` are merged
  // so rounding in the cumulative sums does not create slivers.
  constexpr double snap = 1e-12;
  std::size_t ia = 0;
  std::size_t ib = 0;
  double lower = 0.0;
  double upper_a = plan.source_mass[order_a[0]];
  double upper_b = plan.target_mass[order_b[0]];
  const std::size_t na = order_a.size();
  const std::size_t nb = order_b.size();
  while (ia < na && ib < nb) {
    const bool last_a = ia + 1 == na;
    const bool last_b = ib + 1 == nb;
    if (last_a) upper_a = 1.0;
    if (last_b) upper_b = 1.0;
    const double upper = std::min(upper_a, upper_b);
    const double mass = upper - lower;
    if (mass > 0.0) plan.entries.push_back({order_a[ia], order_b[ib], mass});
    lower = upper;
    const bool advance_a = upper_a - upper <= snap;
    const bool advance_b = upper_b - upper <= snap;
    if (advance_a) {
      if (++ia < na) upper_a += plan.source_mass[order_a[ia]];
    }
    if (advance_b) {
      if (++ib < nb) upper_b += plan.target_mass[order_b[ib]];
    }
  }
  return plan;
}

TransportPlan ot_sinkhorn(const WeightedDeaths& mu, const WeightedDeaths& nu, const SinkhornConfig& cfg) {
  mu.validate();
  nu.validate();
  if (!(cfg.lambda > 0.0)) throw InvalidInput("sinkhorn: lambda must be > 0");
  TransportPlan plan;
  plan.rows = mu.size();
  plan.cols = nu.size();
  plan.source_mass = normalized(mu.weights);
  plan.target_mass = normalized(nu.weights);
  const std::size_t m = plan.rows;
  const std::size_t n = plan.cols;

  std::vector<double> cost(m * n);
  double mean_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = mu.deaths[i] - nu.deaths[j];
      cost[i * n + j] = d * d;
      mean_cost += d * d;
    }
  }
  mean_cost /= static_cast<double>(m * n);
  const double eps = cfg.lambda * (mean_cost > 0.0 ? mean_cost : 1.0);

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_a(m);
  std::vector<double> log_b(n);
  for (std::size_t i = 0; i < m; ++i) log_a[i] = plan.source_mass[i] > 0.0 ? std::log(plan.source_mass[i]) : neg_inf;
  for (std::size_t j = 0; j < n; ++j) log_b[j] = plan.target_mass[j] > 0.0 ? std::log(plan.target_mass[j]) : neg_inf;

  std::vector<double> f(m, 0.0);
  std::vector<double> g(n, 0.0);
  std::vector<double> buf;
  auto log_entry = [&](std::size_t i, std::size_t j) { return (f[i] + g[j] - cost[i * n + j]) / eps; };

  for (int it = 0; it < cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      if (log_a[i] == neg_inf) {
        f[i] = neg_inf;
        continue;
      }
      buf.assign(n, neg_inf);
      for (std::size_t j = 0; j < n; ++j) {
        if (log_b[j] != neg_inf) buf[j] = (g[j] - cost[i * n + j]) / eps;
      }
      f[i] = eps * (log_a[i] - log_sum_exp(buf));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (log_b[j] == neg_inf) {
        g[j] = neg_inf;
        continue;
      }
      buf.assign(m, neg_inf);
      for (std::size_t i = 0; i < m; ++i) {
        if (log_a[i] != neg_inf) buf[i] = (f[i] - cost[i * n + j]) / eps;
      }
      g[j] = eps * (log_b[j] - log_sum_exp(buf));
    }
    // Columns are exact after the g update; check the rows.
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (log_a[i] == neg_inf) continue;
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (log_b[j] != neg_inf) row += std::exp(log_entry(i, j));
      }
      err = std::max(err, std::abs(row - plan.source_mass[i]));
    }
    if (err < cfg.tolerance) break;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (log_a[i] == neg_inf) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (log_b[j] == neg_inf) continue;
      const double mass = std::exp(log_entry(i, j));
      if (mass > 1e-300) plan.entries.push_back({i, j, mass});
    }
  }
  return plan;
}

double transport_cost(const TransportPlan& plan, const WeightedDeaths& mu, const WeightedDeaths& nu) {
  double acc = 0.0;
  for (const auto& e : plan.entries) {
    const double d = mu.deaths[e.i] - nu.deaths[e.j];
    acc += e.mass * d * d;
  }
  return acc;
}

ShiftSet mult_shifts(const TransportPlan& plan, const WeightedDeaths& source, const WeightedDeaths& target) {
  source.validate();
  target.validate();
  if (plan.rows != source.size() || plan.cols != target.size()) {
    throw InvalidInput("mult_shifts: plan shape does not match the death distributions");
  }
  std::vector<std::vector<const TransportPlan::Entry*>> by_row(plan.rows);
  for (const auto& e : plan.entries) {
    if (e.i >= plan.rows || e.j >= plan.cols || !(e.mass >= 0.0)) throw InvalidInput("mult_shifts: malformed plan entry");
    if (e.mass > 0.0) by_row[e.i].push_back(&e);
  }
  ShiftSet out;
  for (std::size_t i = 0; i < plan.rows; ++i) {
    const auto& row = by_row[i];
    if (row.empty()) {
      out.dropped.push_back(i);
      continue;
    }
    double shift = 0.0;
    if (row.size() == 1) {
      shift = target.deaths[row.front()->j] / source.deaths[i];
    } else {
      double mass = 0.0;
      for (const auto* e : row) mass += e->mass;
      double log_shift = 0.0;
      for (const auto* e : row) log_shift += (e->mass / mass) * std::log(target.deaths[e->j] / source.deaths[i]);
      shift = std::exp(log_shift);
    }
    out.shifts.push_back(shift);
    out.weights.push_back(source.weights[i]);
    out.source.push_back(i);
  }
  return out;
}

MultShiftDiagram shift_diagram(std::vector<double> shifts, std::vector<double> weights, std::optional<Probe> probe,
                               const KdeConfig& cfg) {
  if (shifts.empty()) throw InvalidInput("shift_diagram: no shifts");
  if (shifts.size() != weights.size()) throw InvalidInput("shift_diagram: shifts and weights differ in length");
  double total = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    if (!(shifts[k] > 0.0) || !std::isfinite(shifts[k])) throw InvalidInput("shift_diagram: shifts must be > 0");
    if (!(weights[k] >= 0.0)) throw InvalidInput("shift_diagram: negative weight");
    total += weights[k];
    if (weights[k] > 0.0) {
      lo = std::min(lo, shifts[k]);
      hi = std::max(hi, shifts[k]);
    }
  }
  if (!(total > 0.0)) throw InvalidInput("shift_diagram: all weights are zero");

  MultShiftDiagram out;
  out.probe = std::move(probe);
  double h = 0.0;
  try {
    h = scott_bandwidth(shifts, weights);
  } catch (const DegenerateInput&) {
    out.degenerate = true;
  }
  if (out.degenerate) {
    double mean = 0.0;
    for (std::size_t k = 0; k < shifts.size(); ++k) mean += weights[k] * shifts[k];
    mean /= total;
    // All positive-weight atoms coincide up to rounding; report the atom.
    out.peak = std::clamp(mean, lo, hi);
    out.density = kde(shifts, weights, std::max(1e-3 * out.peak, 1e-12), cfg);
  } else {
    out.density = kde(shifts, weights, h, cfg);
    out.peak = std::clamp(find_peak(out.density, cfg.refine_peak), lo, hi);
  }
  out.shifts = std::move(shifts);
  out.weights = std::move(weights);
  return out;
}

}  // namespace niph
