#pragma once

#include <cstddef>
#include <vector>

namespace niph {

/// Nodes and weights of the n-point Gauss-Hermite rule for weight exp(-x^2).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction; cached per n.
const GaussHermiteRule& gauss_hermite(std::size_t n);

/// n-point Gauss-Legendre rule on [-1, 1] (same layout); cached per n.
const GaussHermiteRule& gauss_legendre(std::size_t n);

enum class FoldMode {
  /// Gaussian-weighted mean of the V = 0 peak over orientation noise.
  weighted_integral,
  /// Location of the maximum of the distribution of V = 0 peaks under
  /// orientation noise (KDE of a fine quadrature sample).
  argmax,
};

enum class Quadrature {
  /// Gauss-Legendre on each smooth piece of the integrand: the V = 0 peak has
  /// kinks where the two terms of the minimum cross, and the pieces between
  /// them are integrated against the (wrapped) Gaussian separately.
  piecewise,
  /// One Gauss-Hermite rule over the whole line. Converges only
  /// algebraically across the kinks.
  gauss_hermite,
};

struct PeakModelConfig {
  /// Nodes per smooth piece (piecewise) or in total (gauss_hermite).
  std::size_t quadrature_nodes = 33;
  Quadrature quadrature = Quadrature::piecewise;
  FoldMode fold = FoldMode::weighted_integral;
};

/// Expected shift-diagram peak for 1-dimensional homology of oriented
/// rectangles: probe direction psi with factor S against shapes of orientation
/// phi, orientational variance V and aspect s.
///
/// V = 0: min(S / sqrt(1 + (S^2-1) cos^2(phi-psi)), s S / sqrt(1 + (S^2-1) sin^2(phi-psi))).
double expected_peak_1d(double psi, double S, double phi, double V, double s, const PeakModelConfig& cfg = {});

/// Expected peak for 0-dimensional homology of oriented grids.
///
/// V = 0: min(sqrt(S^2 cos^2(phi-psi) + sin^2(phi-psi)), s).
double expected_peak_0d(double psi, double S, double phi, double V, double s, const PeakModelConfig& cfg = {});

/// Dispatch on homology dimension (0 or 1).
double expected_peak(int dim, double psi, double S, double phi, double V, double s, const PeakModelConfig& cfg = {});

}  // namespace niph
