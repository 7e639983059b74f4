#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cutofflab/heat_kernel.hpp"
#include "cutofflab/model.hpp"

namespace cutofflab {

/// (1/2) sum |mu - nu|.
double tv_distance(std::span<const double> mu, std::span<const double> nu);

/// sum mu log(mu / pi) with 0 log 0 = 0, natural log. pi must be positive.
double kl_divergence(std::span<const double> mu, std::span<const double> pi);

/// Var_mu(log mu/pi) over the support of mu, two-pass.
double varentropy(std::span<const double> mu, std::span<const double> pi);

struct OriginStats {
  double dtv = 0.0;
  double dkl = 0.0;
  double vkl = 0.0;
};

OriginStats origin_stats(std::span<const double> mu, std::span<const double> pi);

struct StatsOptions {
  HeatKernelOptions heat;
  /// Origins to maximize over; empty means all states.
  std::vector<State> origins;
  /// Bisection tolerance for mixing times; <= 0 picks 1e-8 * max(1, T_hi).
  double t_tol = 0.0;
};

/// Heat-kernel options with the tolerance defaulted to the chain size.
StatsOptions default_stats_options(const ChainModel& model);

struct ProfilePoint {
  double t = 0.0;
  double dtv = 0.0;
  double dkl = 0.0;
  double vkl = 0.0;
  State argmax_tv = 0;
  State argmax_kl = 0;
  State argmax_vkl = 0;
};

/// Maxima of the three statistics over origins. Ties go to the smallest
/// origin index.
ProfilePoint worst_case_profile(const ChainModel& model, double t, const StatsOptions& options);

/// Per-origin statistics at time t, in the order of options.origins (or
/// all states).
std::vector<OriginStats> profile_by_origin(const ChainModel& model, double t,
                                           const StatsOptions& options);

/// max_o d_TV(P_t(o,.), pi).
double worst_case_tv(const ChainModel& model, double t, const StatsOptions& options);

/// (1/(2 gamma)) log(1 / (4 p eps^2)).
double mixing_time_upper_bound(const ChainModel& model, double epsilon);

struct MixingTimeResult {
  double epsilon = 0.0;
  double t_mix = 0.0;
  double bracket_width = 0.0;
  double dtv_at_t = 0.0;
};

/// Bisection for min{t : d_TV(t) <= eps}. Throws InvalidParams for eps
/// outside (0,1) and BracketFailed if the upper bracket cannot be found.
MixingTimeResult mixing_time(const ChainModel& model, double epsilon, const StatsOptions& options);

/// -d/dt d_KL(P_t(o,.), pi) =
///   sum_{x,y} P_t(o,x) K(x,y) (log P_t(o,x)/pi(x) - log P_t(o,y)/pi(y)).
/// Throws ZeroMassState when some P_t(o,x) vanishes.
double entropy_dissipation(const ChainModel& model, State origin, double t,
                           const HeatKernelOptions& heat);

/// Same, from an already computed row.
double entropy_dissipation(const Chain& chain, std::span<const double> pi, std::span<const double> mu);

/// Heat options tightened for statistics that take logs of tiny entries.
HeatKernelOptions log_accurate(const ChainModel& model, HeatKernelOptions heat);

}  // namespace cutofflab
