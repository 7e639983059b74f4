#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

/// Probability vector; mass_defect bounds 1 - sum(probs) from series truncation.
struct Distribution {
  std::vector<double> probs;
  double mass_defect = 0.0;

  std::size_t size() const { return probs.size(); }
  double operator[](State x) const { return probs[x]; }
};

/// Extra truncation control for statistics that take logarithms of the
/// heat kernel. Every entry reachable at time t is at least
/// w_d * delta^d with d <= diameter, so truncating below relative_tol times
/// the smallest such floor keeps each positive entry relatively accurate.
struct RelativeAccuracy {
  double relative_tol = 1e-9;
  unsigned diameter = 0;
  double delta = 1.0;
};

struct HeatKernelOptions {
  double tol = 1e-12;
  std::size_t max_terms = 1'000'000;
  std::optional<RelativeAccuracy> relative;
  /// Use the closed-form product kernel on chains tagged as hypercubes.
  bool use_product_form = true;
};

/// 1e-12 up to the dense limit, 1e-10 above.
double default_heat_tol(std::size_t n, std::size_t dense_limit = kDefaultDenseLimit);

/// Poisson(t) weights truncated at the smallest N whose upper tail is
/// within tolerance. Weights come from log-space evaluation; the tail is
/// summed exactly from the far end plus a geometric remainder bound.
struct PoissonSeries {
  double t = 0.0;
  std::vector<double> weights;  // weights[n] = e^{-t} t^n / n!, n = 0..N
  double tail = 0.0;            // sum_{n > N} e^{-t} t^n / n! (upper bound)

  std::size_t terms() const { return weights.size(); }
};

/// Throws ToleranceUnreachable if N would exceed options.max_terms and
/// InvalidParams for negative t or a tolerance outside (0, 1e-6].
PoissonSeries poisson_series(double t, const HeatKernelOptions& options);

/// P_t(origin, .) = sum_n w_n (delta_origin K^n), summed in ascending n.
Distribution heat_kernel_row(const Chain& chain, State origin, double t,
                             const HeatKernelOptions& options = {});

/// Same as above with precomputed weights.
Distribution heat_kernel_row(const Chain& chain, State origin, const PoissonSeries& series);

/// Every row of P_t; rows are computed independently and in parallel.
std::vector<Distribution> heat_kernel_all(const Chain& chain, double t,
                                          const HeatKernelOptions& options = {});

/// Closed form on {0,1}^d with holding probability `laziness`: coordinates
/// flip independently at rate (1 - laziness) / d.
Distribution hypercube_heat_kernel_row(const HypercubeForm& form, State origin, double t);

}  // namespace cutofflab
