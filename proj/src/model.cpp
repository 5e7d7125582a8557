#include "niph/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "niph/density.hpp"
#include "niph/error.hpp"

namespace niph {

namespace {

// Golub-Welsch for a symmetric weight: `offdiag(k)` is the k-th recurrence
// coefficient and mu0 the total mass of the weight.
template <typename OffDiag>
GaussHermiteRule build_rule(std::size_t n, OffDiag&& offdiag, double mu0) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const double b = offdiag(static_cast<double>(k));
    jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
    jacobi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    rule.nodes[k] = solver.eigenvalues()(kk);
    const double v0 = solver.eigenvectors()(0, kk);
    rule.weights[k] = mu0 * v0 * v0;
  }
  // Symmetrize to remove eigen-solver rounding.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const std::size_t m = n - 1 - k;
    const double x = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[m] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[m] = x;
    rule.weights[k] = w;
    rule.weights[m] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

void check_model_args(double S, double V, double s) {
  if (!(S > 0.0) || !std::isfinite(S)) throw InvalidInput("expected peak: probe factor S must be > 0");
  if (!(V >= 0.0) || !std::isfinite(V)) throw InvalidInput("expected peak: variance V must be >= 0");
  if (!(s >= 1.0) || !std::isfinite(s)) throw InvalidInput("expected peak: scaling s must be >= 1");
}

double peak_1d_sharp(double psi, double S, double phi, double s) {
  const double c = std::cos(phi - psi);
  const double sn = std::sin(phi - psi);
  const double k = S * S - 1.0;
  return std::min(S / std::sqrt(1.0 + k * c * c), s * S / std::sqrt(1.0 + k * sn * sn));
}

double peak_0d_sharp(double psi, double S, double phi, double s) {
  const double c = std::cos(phi - psi);
  const double sn = std::sin(phi - psi);
  return std::min(std::sqrt(S * S * c * c + sn * sn), s);
}

// Offsets d in [0, pi) of theta - psi at which the two branches of a sharp
// peak function cross (where the minimum has a kink).
std::vector<double> kink_offsets(double crossing_cos2) {
  if (!(crossing_cos2 >= 0.0 && crossing_cos2 <= 1.0)) return {};
  const double d = std::acos(std::sqrt(crossing_cos2));
  return {d, std::numbers::pi - d};
}

std::vector<double> kinks_1d(double S, double s) {
  if (S == 1.0) return {};
  return kink_offsets((S * S - s * s) / ((S * S - 1.0) * (1.0 + s * s)));
}

std::vector<double> kinks_0d(double S, double s) {
  if (S == 1.0) return {};
  return kink_offsets((s * s - 1.0) / (S * S - 1.0));
}

// E[sharp(phi + t)] for t ~ N(0, V), integrated piece by piece between the
// kinks with Gauss-Legendre. Narrow Gaussians are truncated at 8 sigma; wide
// ones are wrapped onto one period of the (pi-periodic) integrand.
template <typename Sharp>
double fold_piecewise(Sharp&& sharp, double psi, const std::vector<double>& kinks, double phi, double V,
                      std::size_t nodes) {
  constexpr double pi = std::numbers::pi;
  const double sigma = std::sqrt(V);
  const bool wrapped = 8.0 * sigma > 0.5 * pi;
  const double lo = wrapped ? -0.5 * pi : -8.0 * sigma;
  const double hi = -lo;
  const int images = wrapped ? static_cast<int>(std::ceil(8.0 * sigma / pi)) + 1 : 0;
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * pi));
  auto density = [&](double t) {
    double acc = 0.0;
    for (int j = -images; j <= images; ++j) {
      const double z = (t + j * pi) / sigma;
      acc += std::exp(-0.5 * z * z);
    }
    return acc * norm;
  };

  std::vector<double> cuts = {lo, hi};
  for (double d : kinks) {
    const double base = psi + d - phi;
    for (double j = std::ceil((lo - base) / pi); base + j * pi < hi; j += 1.0) {
      const double t = base + j * pi;
      if (t > lo) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  const auto& rule = gauss_legendre(nodes);
  double acc = 0.0;
  for (std::size_t c = 1; c < cuts.size(); ++c) {
    const double width = cuts[c] - cuts[c - 1];
    if (!(width > 0.0)) continue;
    // The branches have complex poles near the real axis when S is large,
    // so long pieces are split further.
    const int parts = static_cast<int>(std::ceil(width / (0.25 * pi)));
    const double half = 0.5 * width / parts;
    for (int p = 0; p < parts; ++p) {
      const double mid = cuts[c - 1] + (2 * p + 1) * half;
      double piece = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t = mid + half * rule.nodes[k];
        piece += rule.weights[k] * sharp(phi + t) * density(t);
      }
      acc += half * piece;
    }
  }
  return acc;
}

template <typename Sharp>
double fold(Sharp&& sharp, double psi, const std::vector<double>& kinks, double phi, double V,
            const PeakModelConfig& cfg) {
  if (V == 0.0) return sharp(phi);
  if (cfg.fold == FoldMode::weighted_integral) {
    if (cfg.quadrature == Quadrature::piecewise) return fold_piecewise(sharp, psi, kinks, phi, V, cfg.quadrature_nodes);
    const auto& rule = gauss_hermite(cfg.quadrature_nodes);
    const double scale = std::sqrt(2.0 * V);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * sharp(phi + scale * rule.nodes[k]);
    return acc / std::sqrt(std::numbers::pi);
  }
  // Argmax of the pushforward of N(0, V) through t -> sharp(phi + t).
  constexpr int samples = 2001;
  const double sigma = std::sqrt(V);
  std::vector<double> values(samples);
  std::vector<double> weights(samples);
  for (int k = 0; k < samples; ++k) {
    const double z = -6.0 + 12.0 * k / (samples - 1);
    values[k] = sharp(phi + sigma * z);
    weights[k] = std::exp(-0.5 * z * z);
  }
  try {
    const double h = scott_bandwidth(values, weights);
    return find_peak(kde(values, weights, h), true);
  } catch (const DegenerateInput&) {
    return values[samples / 2];
  }
}

}  // namespace

const GaussHermiteRule& gauss_hermite(std::size_t n) {
  if (n < 1 || n > 512) throw InvalidInput("gauss_hermite: node count must be in [1, 512]");
  static std::mutex mutex;
  static std::map<std::size_t, GaussHermiteRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    // Physicists' Hermite polynomials: off-diagonal sqrt(k/2).
    auto rule = build_rule(n, [](double k) { return std::sqrt(k / 2.0); }, std::sqrt(std::numbers::pi));
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

const GaussHermiteRule& gauss_legendre(std::size_t n) {
  if (n < 1 || n > 512) throw InvalidInput("gauss_legendre: node count must be in [1, 512]");
  static std::mutex mutex;
  static std::map<std::size_t, GaussHermiteRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto rule = build_rule(n, [](double k) { return k / std::sqrt(4.0 * k * k - 1.0); }, 2.0);
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

double expected_peak_1d(double psi, double S, double phi, double V, double s, const PeakModelConfig& cfg) {
  check_model_args(S, V, s);
  return fold([&](double angle) { return peak_1d_sharp(psi, S, angle, s); }, psi, kinks_1d(S, s), phi, V, cfg);
}

double expected_peak_0d(double psi, double S, double phi, double V, double s, const PeakModelConfig& cfg) {
  check_model_args(S, V, s);
  return fold([&](double angle) { return peak_0d_sharp(psi, S, angle, s); }, psi, kinks_0d(S, s), phi, V, cfg);
}

double expected_peak(int dim, double psi, double S, double phi, double V, double s, const PeakModelConfig& cfg) {
  switch (dim) {
    case 0: return expected_peak_0d(psi, S, phi, V, s, cfg);
    case 1: return expected_peak_1d(psi, S, phi, V, s, cfg);
    default: throw InvalidInput("expected peak: only homology dimensions 0 and 1 are modeled");
  }
}

}  // namespace niph
