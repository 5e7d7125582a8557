#include "niph/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "niph/error.hpp"

namespace niph {

double DensityCurve::integral() const {
  double acc = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) acc += 0.5 * (values[k] + values[k - 1]) * (grid[k] - grid[k - 1]);
  return acc;
}

double scott_bandwidth(std::span<const double> samples, std::span<const double> weights) {
  if (samples.size() != weights.size()) throw InvalidInput("scott_bandwidth: samples and weights differ in length");
  if (samples.size() < 2) throw DegenerateInput("scott_bandwidth: at least 2 samples required");
  double sw = 0.0;
  double sw2 = 0.0;
  double mean = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(weights[k] >= 0.0)) throw InvalidInput("scott_bandwidth: negative weight");
    sw += weights[k];
    sw2 += weights[k] * weights[k];
    mean += weights[k] * samples[k];
  }
  if (!(sw > 0.0)) throw InvalidInput("scott_bandwidth: total weight must be > 0");
  mean /= sw;
  double var = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double d = samples[k] - mean;
    var += weights[k] * d * d;
  }
  var /= sw;
  const double sigma = std::sqrt(var);
  // Relative test so that identical atoms with rounding noise count as degenerate.
  if (!(sigma > 1e-14 * std::max(1.0, std::abs(mean)))) {
    throw DegenerateInput("scott_bandwidth: zero weighted variance");
  }
  const double n_eff = sw * sw / sw2;
  return sigma * std::pow(n_eff, -0.2);
}

DensityCurve kde(std::span<const double> samples, std::span<const double> weights, double bandwidth,
                 const KdeConfig& cfg) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw InvalidInput("kde: bandwidth must be > 0");
  if (samples.empty()) throw InvalidInput("kde: no samples");
  if (samples.size() != weights.size()) throw InvalidInput("kde: samples and weights differ in length");
  if (cfg.grid_points < 2) throw InvalidInput("kde: grid needs at least 2 points");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw InvalidInput("kde: total weight must be > 0");

  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it - cfg.pad_bandwidths * bandwidth;
  const double hi = *hi_it + cfg.pad_bandwidths * bandwidth;
  const std::size_t m = cfg.grid_points;

  DensityCurve curve;
  curve.bandwidth = bandwidth;
  curve.grid.resize(m);
  curve.values.assign(m, 0.0);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t g = 0; g < m; ++g) curve.grid[g] = lo + step * static_cast<double>(g);

  const double norm = 1.0 / (bandwidth * std::sqrt(2.0 * std::numbers::pi) * total);
  // Kernel evaluated out to 40 bandwidths; beyond that exp underflows anyway.
  const double reach = 40.0 * bandwidth;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const double c = samples[k];
    const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((c - reach - lo) / step)));
    const auto last = std::min<std::size_t>(m - 1, static_cast<std::size_t>(std::max(0.0, std::ceil((c + reach - lo) / step))));
    for (std::size_t g = first; g <= last; ++g) {
      const double z = (curve.grid[g] - c) / bandwidth;
      curve.values[g] += weights[k] * norm * std::exp(-0.5 * z * z);
    }
  }
  return curve;
}

double find_peak(const DensityCurve& curve, bool refine) {
  if (curve.empty() || curve.values.size() != curve.grid.size()) throw InvalidInput("find_peak: empty curve");
  std::size_t best = 0;
  for (std::size_t g = 1; g < curve.values.size(); ++g) {
    if (curve.values[g] > curve.values[best]) best = g;
  }
  if (!refine || best == 0 || best + 1 == curve.values.size()) return curve.grid[best];
  const double ym = curve.values[best - 1];
  const double y0 = curve.values[best];
  const double yp = curve.values[best + 1];
  const double denom = ym - 2.0 * y0 + yp;
  if (!(denom < 0.0)) return curve.grid[best];
  const double offset = 0.5 * (ym - yp) / denom;
  const double step = curve.grid[best + 1] - curve.grid[best];
  return curve.grid[best] + std::clamp(offset, -1.0, 1.0) * step;
}

}  // namespace niph
