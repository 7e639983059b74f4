#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "cutofflab/chain.hpp"
#include "cutofflab/heat_kernel.hpp"

namespace cutofflab {

inline constexpr std::size_t kExactCheegerLimit = 22;

/// Solves pi K = pi. Dense LU with iterative refinement up to dense_limit;
/// power iteration on the lazy chain (I + K)/2 above. Throws SolveFailed if
/// the residual ||pi K - pi||_1 stays above 1e-12.
Distribution stationary_distribution(const Chain& chain,
                                     std::size_t dense_limit = kDefaultDenseLimit);

/// ||pi K - pi||_1.
double stationarity_residual(const Chain& chain, const Distribution& pi);

/// Time reversal K*(x,y) = pi(y) K(y,x) / pi(x). Rows are renormalized to
/// absorb the residual of pi.
Chain pi_adjoint(const Chain& chain, const Distribution& pi);

/// Second eigenpair of the additive reversibilization (K + K*)/2, taken in
/// the symmetric form S = D^{1/2} A D^{-1/2} with D = diag(pi).
struct SpectralGap {
  double gamma = 0.0;
  double lambda2 = 0.0;
  /// Eigenvector of S for lambda2, unit norm.
  Eigen::VectorXd vector;
  /// ||S v - lambda2 v||_2; bounds the eigenvalue error.
  double residual = 0.0;
};

/// Symmetric matrix S(x,y) = (pi(x)K(x,y) + pi(y)K(y,x)) / (2 sqrt(pi(x)pi(y))).
Eigen::MatrixXd reversibilized_symmetric(const Chain& chain, const Distribution& pi);

/// Throws EigenFailed when the iteration stalls or lambda2 < -1 beyond
/// round-off.
SpectralGap spectral_gap(const Chain& chain, const Distribution& pi,
                         std::size_t dense_limit = kDefaultDenseLimit);

/// Poincare constant gamma = 1 - lambda2.
double poincare_constant(const Chain& chain, const Distribution& pi,
                         std::size_t dense_limit = kDefaultDenseLimit);

/// Exact isoperimetric constant by enumerating all cuts. Throws
/// TooLargeForExact above kExactCheegerLimit states.
double cheeger_exact(const Chain& chain, const Distribution& pi);

/// Best prefix cut in the order of the second eigenvector; an upper bound on
/// the isoperimetric constant.
double cheeger_sweep_bound(const Chain& chain, const Distribution& pi, const SpectralGap& gap);
double cheeger_sweep_bound(const Chain& chain, const Distribution& pi,
                           std::size_t dense_limit = kDefaultDenseLimit);

struct SpectralSummary {
  Distribution pi;
  double p_min = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
  bool phi_exact = false;
  double delta = 0.0;
  unsigned diameter = 0;
  double c = 0.0;
};

SpectralSummary spectral_summary(const Chain& chain, const ChainMetrics& metrics,
                                 std::size_t dense_limit = kDefaultDenseLimit);

}  // namespace cutofflab
