#include "niph/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "niph/error.hpp"
#include "niph/geometry.hpp"
#include "niph/optimize.hpp"
#include "niph/parallel.hpp"
#include "niph/random.hpp"

namespace niph {

void FitBounds::validate() const {
  if (!(var_max >= 0.0) || !std::isfinite(var_max)) throw InvalidInput("fit bounds: var_max must be >= 0");
  if (!(s_min >= 1.0) || !(s_max >= s_min) || !std::isfinite(s_max)) {
    throw InvalidInput("fit bounds: need 1 <= s_min <= s_max");
  }
}

double FitResult::sqrt_var() const { return std::sqrt(var); }

double fit_residual(const std::vector<PeakObservation>& obs, double phi, double var, double s,
                    const PeakModelConfig& model) {
  double acc = 0.0;
  for (const auto& o : obs) {
    const double d = expected_peak(o.dim, o.psi, o.factor, phi, var, s, model) - o.peak;
    acc += d * d;
  }
  return acc;
}

FitResult fit_parameters(const std::vector<PeakObservation>& obs, const FitBounds& bounds, const FitConfig& cfg) {
  bounds.validate();
  if (obs.size() < 3) throw InvalidInput("fit: at least 3 peak observations are required");
  if (cfg.restarts < 1 || cfg.evaluations < 1) throw InvalidInput("fit: restarts and evaluations must be >= 1");
  std::set<double> directions;
  for (const auto& o : obs) {
    if (o.dim != obs.front().dim) throw InvalidInput("fit: observations mix homology dimensions");
    if (!(o.peak > 0.0) || !std::isfinite(o.peak)) throw InvalidInput("fit: peaks must be finite and > 0");
    if (!(o.factor > 0.0)) throw InvalidInput("fit: probe factors must be > 0");
    directions.insert(canonical_angle(o.psi));
  }
  if (directions.size() < 2) throw InvalidInput("fit: observations must span at least 2 directions");

  Box box;
  box.lower = {0.0, 0.0, bounds.s_min};
  box.upper = {std::numbers::pi, bounds.var_max, bounds.s_max};
  box.periodic = {true, false, false};
  const Objective objective = [&](const std::vector<double>& x) {
    return fit_residual(obs, x[0], x[1], x[2], cfg.model);
  };

  std::vector<OptimumPoint> results(static_cast<std::size_t>(cfg.restarts));
  parallel_for(results.size(), cfg.threads, [&](std::size_t r) {
    AnnealConfig ac;
    ac.evaluations = cfg.evaluations;
    ac.seed = mix_seed(cfg.seed, r);
    auto coarse = anneal(objective, box, ac);
    auto fine = nelder_mead(objective, box, coarse.x);
    if (fine.value <= coarse.value) {
      fine.evaluations += coarse.evaluations;
      results[r] = std::move(fine);
    } else {
      coarse.evaluations += fine.evaluations;
      results[r] = std::move(coarse);
    }
  });

  std::size_t best = 0;
  int evaluations = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    evaluations += results[r].evaluations;
    if (results[r].value < results[best].value) best = r;
  }
  FitResult out;
  out.phi = canonical_angle(results[best].x[0]);
  out.var = results[best].x[1];
  out.s = results[best].x[2];
  out.residual = results[best].value;

  if (cfg.resolve_flat_s) {
    // For s >= the largest probe factor every modeled peak is independent of
    // s, and below it an observation may still miss the long axis. Pick a
    // representative of the set of s values matching the optimum.
    const double tolerance = 1e-15 + 1e-9 * out.residual;
    auto flat = [&](double s) {
      ++evaluations;
      return fit_residual(obs, out.phi, out.var, s, cfg.model) <= out.residual + tolerance;
    };
    double lo = bounds.s_min;
    double hi = out.s;
    if (hi > lo && !flat(lo)) {
      for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (flat(mid) ? hi : lo) = mid;
      }
    } else {
      hi = lo;
    }
    double factor_max = 0.0;
    for (const auto& o : obs) factor_max = std::max(factor_max, o.factor);
    const bool use_factor = factor_max >= hi && factor_max <= bounds.s_max && flat(factor_max);
    out.s = use_factor ? factor_max : hi;
    out.residual = fit_residual(obs, out.phi, out.var, out.s, cfg.model);
  }
  out.evaluations = evaluations;
  return out;
}

double angular_error(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  d = std::min(d, std::numbers::pi - d);
  return d * 180.0 / std::numbers::pi;
}

}  // namespace niph
