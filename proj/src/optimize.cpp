#include "niph/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "niph/error.hpp"
#include "niph/random.hpp"

namespace niph {

void Box::validate() const {
  if (lower.empty() || lower.size() != upper.size()) throw InvalidInput("box: bounds must be nonempty and of equal length");
  if (!periodic.empty() && periodic.size() != lower.size()) throw InvalidInput("box: periodic flags length mismatch");
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || !(lower[k] <= upper[k])) {
      throw InvalidInput("box: empty or non-finite bounds");
    }
    if (is_periodic(k) && !(upper[k] > lower[k])) throw InvalidInput("box: periodic coordinate needs a positive period");
  }
}

bool Box::is_periodic(std::size_t k) const { return !periodic.empty() && periodic[k]; }

void Box::project(std::vector<double>& x) const {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (is_periodic(k)) {
      const double period = upper[k] - lower[k];
      double t = std::fmod(x[k] - lower[k], period);
      if (t < 0.0) t += period;
      if (t >= period) t = 0.0;
      x[k] = lower[k] + t;
    } else {
      x[k] = std::clamp(x[k], lower[k], upper[k]);
    }
  }
}

OptimumPoint anneal(const Objective& f, const Box& box, const AnnealConfig& cfg) {
  box.validate();
  if (cfg.evaluations < 1) throw InvalidInput("anneal: evaluation budget must be >= 1");
  if (!(cfg.initial_temperature > 0.0) || !(cfg.final_temperature > 0.0)) {
    throw InvalidInput("anneal: temperatures must be > 0");
  }
  Rng rng(cfg.seed);
  const std::size_t n = box.dim();
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = rng.uniform(box.lower[k], box.upper[k]);
  double fx = f(x);
  OptimumPoint best{x, fx, 1};
  // Energy scale for Metropolis acceptance; refreshed from observed uphill moves.
  double energy_scale = std::max(std::abs(fx), 1e-12);
  const int steps = cfg.evaluations - 1;
  const double ratio = steps > 0 ? std::pow(cfg.final_temperature / cfg.initial_temperature, 1.0 / steps) : 1.0;
  double temperature = cfg.initial_temperature;
  std::vector<double> y(n);
  for (int it = 0; it < steps; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      const double width = box.upper[k] - box.lower[k];
      const double cauchy = std::tan(std::numbers::pi * (rng.uniform() - 0.5));
      y[k] = x[k] + temperature * width * std::clamp(cauchy, -1e3, 1e3);
      if (!box.is_periodic(k)) {
        // Reflect once, then clamp.
        if (y[k] < box.lower[k]) y[k] = 2.0 * box.lower[k] - y[k];
        if (y[k] > box.upper[k]) y[k] = 2.0 * box.upper[k] - y[k];
      }
    }
    box.project(y);
    const double fy = f(y);
    ++best.evaluations;
    const double delta = fy - fx;
    bool accept = delta <= 0.0;
    if (!accept && std::isfinite(fy)) {
      energy_scale = 0.9 * energy_scale + 0.1 * delta;
      const double t_accept = temperature / cfg.initial_temperature * energy_scale;
      accept = rng.uniform() < std::exp(-delta / std::max(t_accept, 1e-300));
    }
    if (accept) {
      x = y;
      fx = fy;
      if (fx < best.value) {
        best.x = x;
        best.value = fx;
      }
    }
    temperature *= ratio;
  }
  return best;
}

OptimumPoint nelder_mead(const Objective& f, const Box& box, std::vector<double> start, const SimplexConfig& cfg) {
  box.validate();
  const std::size_t n = box.dim();
  if (start.size() != n) throw InvalidInput("nelder_mead: start point dimension mismatch");
  std::vector<double> width(n);
  for (std::size_t k = 0; k < n; ++k) width[k] = std::max(box.upper[k] - box.lower[k], 1e-300);

  // Work in box-normalized coordinates.
  auto to_x = [&](const std::vector<double>& z) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = box.lower[k] + z[k] * width[k];
    box.project(x);
    return x;
  };
  auto clamp_z = [&](std::vector<double>& z) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!box.is_periodic(k)) z[k] = std::clamp(z[k], 0.0, 1.0);
    }
  };

  int evaluations = 0;
  auto eval = [&](const std::vector<double>& z) {
    ++evaluations;
    return f(to_x(z));
  };

  box.project(start);
  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) simplex[0][k] = (start[k] - box.lower[k]) / width[k];
  for (std::size_t v = 1; v <= n; ++v) {
    simplex[v] = simplex[0];
    const std::size_t k = v - 1;
    // Step inward when the start sits on the upper face.
    simplex[v][k] += simplex[0][k] + cfg.initial_step <= 1.0 || box.is_periodic(k) ? cfg.initial_step : -cfg.initial_step;
  }
  std::vector<double> values(n + 1);
  for (std::size_t v = 0; v <= n; ++v) values[v] = eval(simplex[v]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n);
  auto point_along = [&](double t, const std::vector<double>& worst) {
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = centroid[k] + t * (worst[k] - centroid[k]);
    clamp_z(z);
    return z;
  };

  while (evaluations < cfg.max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double spread = 0.0;
    for (std::size_t v = 0; v <= n; ++v) {
      for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(simplex[v][k] - simplex[best][k]));
    }
    if (spread < cfg.step_tolerance && values[worst] - values[best] <= cfg.value_tolerance) break;
    if (spread < 1e-3 * cfg.step_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v <= n; ++v) {
      if (v == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[v][k] / static_cast<double>(n);
    }

    auto reflected = point_along(-1.0, simplex[worst]);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      auto expanded = point_along(-2.0, simplex[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    auto contracted = outside ? point_along(-0.5, simplex[worst]) : point_along(0.5, simplex[worst]);
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 0; v <= n; ++v) {
      if (v == best) continue;
      for (std::size_t k = 0; k < n; ++k) simplex[v][k] = simplex[best][k] + 0.5 * (simplex[v][k] - simplex[best][k]);
      values[v] = eval(simplex[v]);
    }
  }
  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  return {to_x(simplex[best]), *best_it, evaluations};
}

}  // namespace niph
