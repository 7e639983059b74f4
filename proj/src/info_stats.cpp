#include "cutofflab/info_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cutofflab/errors.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {
namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw LabError(ErrorCode::InvalidParams, "distribution lengths differ");
}

std::vector<State> origin_list(const ChainModel& model, const StatsOptions& options) {
  if (!options.origins.empty()) {
    for (State o : options.origins)
      if (o >= model.size()) throw LabError(ErrorCode::InvalidParams, "origin out of range");
    return options.origins;
  }
  std::vector<State> all(model.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<Distribution> rows_for(const ChainModel& model, const std::vector<State>& origins,
                                   double t, const HeatKernelOptions& heat) {
  std::vector<Distribution> rows(origins.size());
  if (heat.use_product_form && model.chain.hypercube_form()) {
    parallel_for(origins.size(), [&](std::size_t i) {
      rows[i] = hypercube_heat_kernel_row(*model.chain.hypercube_form(), origins[i], t);
    });
    return rows;
  }
  const PoissonSeries series = poisson_series(t, heat);
  parallel_for(origins.size(),
               [&](std::size_t i) { rows[i] = heat_kernel_row(model.chain, origins[i], series); });
  return rows;
}

}  // namespace

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
  check_lengths(mu, nu);
  double sum = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) sum += std::abs(mu[x] - nu[x]);
  return 0.5 * sum;
}

double kl_divergence(std::span<const double> mu, std::span<const double> pi) {
  check_lengths(mu, pi);
  double sum = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x)
    if (mu[x] > 0.0) sum += mu[x] * (std::log(mu[x]) - std::log(pi[x]));
  return sum;
}

double varentropy(std::span<const double> mu, std::span<const double> pi) {
  const double mean = kl_divergence(mu, pi);
  double sum = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (!(mu[x] > 0.0)) continue;
    const double d = std::log(mu[x]) - std::log(pi[x]) - mean;
    sum += mu[x] * d * d;
  }
  return sum;
}

OriginStats origin_stats(std::span<const double> mu, std::span<const double> pi) {
  // kl >= 0 analytically; clamp the round-off near equilibrium.
  return {tv_distance(mu, pi), std::max(0.0, kl_divergence(mu, pi)), varentropy(mu, pi)};
}

StatsOptions default_stats_options(const ChainModel& model) {
  StatsOptions options;
  options.heat.tol = default_heat_tol(model.size());
  return options;
}

std::vector<OriginStats> profile_by_origin(const ChainModel& model, double t,
                                           const StatsOptions& options) {
  const auto origins = origin_list(model, options);
  const auto rows = rows_for(model, origins, t, options.heat);
  std::vector<OriginStats> stats(origins.size());
  parallel_for(origins.size(),
               [&](std::size_t i) { stats[i] = origin_stats(rows[i].probs, model.pi().probs); });
  return stats;
}

ProfilePoint worst_case_profile(const ChainModel& model, double t, const StatsOptions& options) {
  const auto origins = origin_list(model, options);
  const auto stats = profile_by_origin(model, t, options);
  ProfilePoint point;
  point.t = t;
  point.dtv = point.dkl = point.vkl = -1.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (stats[i].dtv > point.dtv) point.dtv = stats[i].dtv, point.argmax_tv = origins[i];
    if (stats[i].dkl > point.dkl) point.dkl = stats[i].dkl, point.argmax_kl = origins[i];
    if (stats[i].vkl > point.vkl) point.vkl = stats[i].vkl, point.argmax_vkl = origins[i];
  }
  return point;
}

double worst_case_tv(const ChainModel& model, double t, const StatsOptions& options) {
  const auto origins = origin_list(model, options);
  const auto rows = rows_for(model, origins, t, options.heat);
  std::vector<double> tv(origins.size());
  parallel_for(origins.size(), [&](std::size_t i) { tv[i] = tv_distance(rows[i].probs, model.pi().probs); });
  return *std::max_element(tv.begin(), tv.end());
}

double mixing_time_upper_bound(const ChainModel& model, double epsilon) {
  const auto& s = model.spectral;
  return std::log(1.0 / (4.0 * s.p_min * epsilon * epsilon)) / (2.0 * s.gamma);
}

MixingTimeResult mixing_time(const ChainModel& model, double epsilon, const StatsOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw LabError(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  MixingTimeResult result;
  result.epsilon = epsilon;
  const double d0 = worst_case_tv(model, 0.0, options);
  if (d0 <= epsilon) {
    result.dtv_at_t = d0;
    return result;
  }

  const double bound = mixing_time_upper_bound(model, epsilon);
  double hi = bound > 0.0 ? bound : 1.0 / model.spectral.gamma;
  double d_hi = worst_case_tv(model, hi, options);
  constexpr int kMaxDoublings = 60;
  for (int k = 0; d_hi > epsilon; ++k) {
    if (k == kMaxDoublings)
      throw LabError(ErrorCode::BracketFailed, "d_TV stays above epsilon after doubling the bracket");
    hi *= 2.0;
    d_hi = worst_case_tv(model, hi, options);
  }

  const double t_tol = options.t_tol > 0.0 ? options.t_tol : 1e-8 * std::max(1.0, std::max(bound, hi));
  double lo = 0.0;
  while (hi - lo > t_tol) {
    const double mid = 0.5 * (lo + hi);
    if (worst_case_tv(model, mid, options) <= epsilon)
      hi = mid;
    else
      lo = mid;
  }
  result.t_mix = 0.5 * (lo + hi);
  result.bracket_width = 0.5 * (hi - lo);
  result.dtv_at_t = worst_case_tv(model, result.t_mix, options);
  return result;
}

double entropy_dissipation(const Chain& chain, std::span<const double> pi, std::span<const double> mu) {
  const std::size_t n = chain.size();
  std::vector<double> ratio(n);
  for (State x = 0; x < n; ++x) {
    if (!(mu[x] > 0.0))
      throw LabError(ErrorCode::ZeroMassState,
                     "P_t(o," + std::to_string(x) + ") vanishes; increase t");
    ratio[x] = std::log(mu[x]) - std::log(pi[x]);
  }
  double sum = 0.0;
  for (State x = 0; x < n; ++x)
    for (const auto& e : chain.row(x)) sum += mu[x] * e.value * (ratio[x] - ratio[e.col]);
  return sum;
}

double entropy_dissipation(const ChainModel& model, State origin, double t, const HeatKernelOptions& heat) {
  const Distribution mu = heat_kernel_row(model.chain, origin, t, log_accurate(model, heat));
  return entropy_dissipation(model.chain, model.pi().probs, mu.probs);
}

HeatKernelOptions log_accurate(const ChainModel& model, HeatKernelOptions heat) {
  heat.relative = RelativeAccuracy{1e-9, model.metrics.diameter, model.metrics.delta};
  return heat;
}

}  // namespace cutofflab
