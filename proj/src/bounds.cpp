#include "cutofflab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutofflab/errors.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {
namespace {

constexpr std::array<std::string_view, 13> kBoundNames = {
    "window_width",
    "mixing_time_lower",
    "mixing_time_upper",
    "p_control",
    "lipschitz_regularity",
    "entropy_time_regularity",
    "uniform_heat_kernel_lower",
    "uniform_heat_kernel_upper",
    "reversed_pinsker",
    "cheeger_lower",
    "cheeger_upper",
    "density_tail_upper",
    "density_tail_lower",
};

std::vector<double> log_ratio(std::span<const double> mu, std::span<const double> pi) {
  std::vector<double> out(mu.size());
  for (std::size_t x = 0; x < mu.size(); ++x) out[x] = std::log(mu[x]) - std::log(pi[x]);
  return out;
}

bool has_zero(const Distribution& mu) {
  return std::any_of(mu.probs.begin(), mu.probs.end(), [](double v) { return !(v > 0.0); });
}

}  // namespace

std::string_view bound_name(BoundId id) { return kBoundNames[static_cast<std::size_t>(id)]; }

std::optional<BoundId> parse_bound_name(std::string_view name) {
  for (std::size_t i = 0; i < kBoundNames.size(); ++i)
    if (kBoundNames[i] == name) return static_cast<BoundId>(i);
  return std::nullopt;
}

std::string_view status_name(BoundStatus status) {
  switch (status) {
    case BoundStatus::Pass: return "PASS";
    case BoundStatus::Fail: return "FAILED";
    case BoundStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

double f_function(double u) { return std::log(u) + 1.0 / u - 1.0; }

double g_function(double u) {
  if (u == 1.0) return 1.0;
  return u * std::log(u) / (u - 1.0);
}

CheckOptions default_check_options(const ChainModel& model) {
  CheckOptions options;
  options.stats = default_stats_options(model);
  return options;
}

BoundChecker::BoundChecker(const ChainModel& model, CheckOptions options)
    : model_(model), options_(std::move(options)) {}

const MixingTimeResult& BoundChecker::mixing(double epsilon) {
  auto it = mixing_.find(epsilon);
  if (it == mixing_.end()) it = mixing_.emplace(epsilon, mixing_time(model_, epsilon, options_.stats)).first;
  return it->second;
}

const std::vector<Distribution>& BoundChecker::rows(double t) {
  auto it = rows_.find(t);
  if (it != rows_.end()) return it->second;
  const HeatKernelOptions heat = log_accurate(model_, options_.stats.heat);
  std::vector<Distribution> all(model_.size());
  if (heat.use_product_form && model_.chain.hypercube_form()) {
    parallel_for(all.size(), [&](std::size_t o) {
      all[o] = hypercube_heat_kernel_row(*model_.chain.hypercube_form(), o, t);
    });
  } else {
    const PoissonSeries series = poisson_series(t, heat);
    parallel_for(all.size(), [&](std::size_t o) { all[o] = heat_kernel_row(model_.chain, o, series); });
  }
  return rows_.emplace(t, std::move(all)).first->second;
}

ProfilePoint BoundChecker::profile(double t) {
  const auto& all = rows(t);
  ProfilePoint point;
  point.t = t;
  point.dtv = point.dkl = point.vkl = -1.0;
  for (State o = 0; o < all.size(); ++o) {
    const auto s = origin_stats(all[o].probs, model_.pi().probs);
    if (s.dtv > point.dtv) point.dtv = s.dtv, point.argmax_tv = o;
    if (s.dkl > point.dkl) point.dkl = s.dkl, point.argmax_kl = o;
    if (s.vkl > point.vkl) point.vkl = s.vkl, point.argmax_vkl = o;
  }
  return point;
}

double BoundChecker::worst_kl(double t) {
  double best = 0.0;
  for (const auto& mu : rows(t)) best = std::max(best, kl_divergence(mu.probs, model_.pi().probs));
  return best;
}

double BoundChecker::worst_tv(double t) {
  double best = 0.0;
  for (const auto& mu : rows(t)) best = std::max(best, tv_distance(mu.probs, model_.pi().probs));
  return best;
}

BoundReport BoundChecker::make(BoundId id, BoundInputs inputs, double lhs, double rhs) const {
  BoundReport r;
  r.id = id;
  r.inputs = inputs;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.preconditions_met = true;
  const bool ok = r.slack >= -options_.slack_tol * std::max(1.0, std::abs(rhs));
  r.status = ok ? BoundStatus::Pass : BoundStatus::Fail;
  return r;
}

BoundReport BoundChecker::skipped(BoundId id, BoundInputs inputs, std::string reason,
                                  std::string note) const {
  BoundReport r;
  r.id = id;
  r.inputs = inputs;
  r.lhs = r.rhs = r.slack = std::numeric_limits<double>::quiet_NaN();
  r.status = BoundStatus::Skipped;
  r.preconditions_met = false;
  r.reason = std::move(reason);
  r.note = std::move(note);
  return r;
}

BoundReport BoundChecker::check_window_bound(double epsilon) {
  BoundInputs in{.epsilon = epsilon};
  if (!(epsilon > 0.0 && epsilon < 0.5))
    return skipped(BoundId::WindowWidth, in, "epsilon_out_of_range", "requires 0 < eps < 1/2");
  const double early = mixing(1.0 - epsilon).t_mix;
  const double width = mixing(epsilon).t_mix - early;
  double vkl = 0.0;
  for (const auto& mu : rows(early)) vkl = std::max(vkl, varentropy(mu.probs, model_.pi().probs));
  const double rhs = 2.0 / (model_.spectral.gamma * epsilon * epsilon) * (1.0 + std::sqrt(vkl));
  auto r = make(BoundId::WindowWidth, in, width, rhs);
  r.inputs.t = early;
  r.note = "V_KL(t_mix(1-eps)) = " + std::to_string(vkl);
  return r;
}

std::array<BoundReport, 2> BoundChecker::check_mixing_time_bounds(double epsilon) {
  BoundInputs in{.epsilon = epsilon};
  if (!(epsilon > 0.0 && epsilon < 1.0))
    return {skipped(BoundId::MixingTimeLower, in, "epsilon_out_of_range", "requires 0 < eps < 1"),
            skipped(BoundId::MixingTimeUpper, in, "epsilon_out_of_range", "requires 0 < eps < 1")};
  const auto& s = model_.spectral;
  const double t = mixing(epsilon).t_mix;
  in.t = t;
  const double lower = 0.5 * s.diameter - std::sqrt(2.0 * t / (1.0 - epsilon)) -
                       std::sqrt(2.0 / (s.gamma * (1.0 - epsilon)));
  auto lo = make(BoundId::MixingTimeLower, in, lower, t);
  if (lower <= 0.0) lo.note = "vacuous: lower bound is not positive";
  if (4.0 * s.p_min * epsilon * epsilon > 1.0)
    return {lo, skipped(BoundId::MixingTimeUpper, in, "epsilon_above_p_threshold",
                        "requires 4 p eps^2 <= 1 (rhs would be negative)")};
  auto hi = make(BoundId::MixingTimeUpper, in, t, mixing_time_upper_bound(model_, epsilon));
  return {lo, hi};
}

BoundReport BoundChecker::check_p_control() {
  const auto& s = model_.spectral;
  if (s.delta > 0.5)
    return skipped(BoundId::PControl, {}, "delta_above_half", "requires delta <= 1/2");
  return make(BoundId::PControl, {}, std::log(1.0 / s.p_min), 3.0 * s.diameter * std::log(1.0 / s.delta));
}

BoundReport BoundChecker::check_lipschitz_regularity(State origin, double t) {
  BoundInputs in{.t = t, .origin = origin};
  if (t < model_.spectral.diameter / 4.0)
    return skipped(BoundId::LipschitzRegularity, in, "t_below_diam_over_4", "requires t >= diam/4");
  const auto& mu = rows(t).at(origin);
  if (has_zero(mu))
    return skipped(BoundId::LipschitzRegularity, in, "zero_mass", "heat kernel has a vanishing entry");
  const double lip = lipschitz_norm(model_.chain, log_ratio(mu.probs, model_.pi().probs));
  return make(BoundId::LipschitzRegularity, in, lip, model_.spectral.c);
}

BoundReport BoundChecker::check_lipschitz_regularity(double t) {
  BoundReport worst;
  for (State o = 0; o < model_.size(); ++o) {
    auto r = check_lipschitz_regularity(o, t);
    if (r.status == BoundStatus::Skipped) return r;
    if (o == 0 || r.slack < worst.slack) worst = r;
  }
  return worst;
}

BoundReport BoundChecker::check_entropy_time_regularity(double t, double s) {
  BoundInputs in{.t = t, .s = s};
  if (t < model_.spectral.diameter / 4.0)
    return skipped(BoundId::EntropyTimeRegularity, in, "t_below_diam_over_4", "requires t >= diam/4");
  if (!(s >= 0.0))
    return skipped(BoundId::EntropyTimeRegularity, in, "negative_shift", "requires s >= 0");
  return make(BoundId::EntropyTimeRegularity, in, worst_kl(t), worst_kl(t + s) + model_.spectral.c * s);
}

std::array<BoundReport, 2> BoundChecker::check_uniform_heat_kernel(double t) {
  BoundInputs in{.t = t};
  if (t < model_.spectral.diameter / 4.0)
    return {skipped(BoundId::UniformHeatKernelLower, in, "t_below_diam_over_4", "requires t >= diam/4"),
            skipped(BoundId::UniformHeatKernelUpper, in, "t_below_diam_over_4", "requires t >= diam/4")};
  const auto& all = rows(t);
  double lowest = std::numeric_limits<double>::infinity();
  double highest = -std::numeric_limits<double>::infinity();
  State low_o = 0, high_o = 0;
  std::size_t low_x = 0, high_x = 0;
  for (State o = 0; o < all.size(); ++o) {
    if (has_zero(all[o]))
      return {skipped(BoundId::UniformHeatKernelLower, in, "zero_mass", "heat kernel has a vanishing entry"),
              skipped(BoundId::UniformHeatKernelUpper, in, "zero_mass", "heat kernel has a vanishing entry")};
    const auto lr = log_ratio(all[o].probs, model_.pi().probs);
    for (std::size_t x = 0; x < lr.size(); ++x) {
      if (lr[x] < lowest) lowest = lr[x], low_o = o, low_x = x;
      if (lr[x] > highest) highest = lr[x], high_o = o, high_x = x;
    }
  }
  const auto& s = model_.spectral;
  auto lo = make(BoundId::UniformHeatKernelLower, in, -s.c * s.diameter, lowest);
  lo.inputs.origin = low_o;
  lo.note = "worst state " + std::to_string(low_x);
  auto hi = make(BoundId::UniformHeatKernelUpper, in, highest, std::log(1.0 / s.p_min));
  hi.inputs.origin = high_o;
  hi.note = "worst state " + std::to_string(high_x);
  return {lo, hi};
}

BoundReport BoundChecker::check_reversed_pinsker(double t) {
  const double p = model_.spectral.p_min;
  return make(BoundId::ReversedPinsker, {.t = t}, worst_kl(t), g_function(1.0 / p) * worst_tv(t));
}

std::array<BoundReport, 2> BoundChecker::check_cheeger() {
  const auto& s = model_.spectral;
  if (!s.phi_exact)
    return {skipped(BoundId::CheegerLower, {}, "phi_not_exact", "isoperimetric constant is only an upper bound"),
            skipped(BoundId::CheegerUpper, {}, "phi_not_exact", "isoperimetric constant is only an upper bound")};
  return {make(BoundId::CheegerLower, {}, 0.5 * s.phi * s.phi, s.gamma),
          make(BoundId::CheegerUpper, {}, s.gamma, 2.0 * s.phi)};
}

std::array<BoundReport, 2> BoundChecker::check_density_tail_bounds(State origin, double t, double theta) {
  if (!(theta > 0.0)) throw LabError(ErrorCode::InvalidParams, "theta must be positive");
  const double p = model_.spectral.p_min;
  const double low_threshold = std::pow(p, theta);
  if (low_threshold >= 1.0 - 1e-12)
    throw LabError(ErrorCode::DegenerateThreshold, "p^theta is 1 within round-off");
  const double high_threshold = std::pow(p, -theta);

  const auto& mu = rows(t).at(origin);
  const auto& pi = model_.pi().probs;
  const double dkl = std::max(0.0, kl_divergence(mu.probs, pi));
  double upper_mass = 0.0, lower_mass = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (!(mu[x] > 0.0)) continue;
    const double z = mu[x] / pi[x];
    if (z >= high_threshold) upper_mass += mu[x];
    if (z <= low_threshold) lower_mass += mu[x];
  }
  BoundInputs in{.t = t, .theta = theta, .origin = origin};
  return {make(BoundId::DensityTailUpper, in, upper_mass, dkl / f_function(high_threshold)),
          make(BoundId::DensityTailLower, in, lower_mass, dkl / f_function(low_threshold))};
}

std::array<BoundReport, 2> BoundChecker::check_density_tail_bounds(double t, double theta) {
  std::array<BoundReport, 2> worst;
  for (State o = 0; o < model_.size(); ++o) {
    const auto r = check_density_tail_bounds(o, t, theta);
    for (int side = 0; side < 2; ++side)
      if (o == 0 || r[side].slack < worst[side].slack) worst[side] = r[side];
  }
  return worst;
}

std::vector<BoundReport> verify_all(const ChainModel& model, const VerifyGrid& grid,
                                    const CheckOptions& options) {
  BoundChecker checker(model, options);
  const double diam = model.spectral.diameter;

  auto times = grid.times;
  if (times.empty()) {
    const double t75 = checker.mixing(0.75).t_mix;
    const double t50 = checker.mixing(0.5).t_mix;
    const double t25 = checker.mixing(0.25).t_mix;
    times = {diam / 4.0, t75, t50, t25, 2.0 * t25};
  }
  auto shifts = grid.shifts;
  if (shifts.empty()) shifts = {0.0, 0.1, 1.0, checker.mixing(0.25).t_mix};
  auto thetas = grid.thetas.empty() ? std::vector<double>{0.25, 0.5, 1.0} : grid.thetas;
  auto window_eps = grid.window_epsilons.empty() ? std::vector<double>{0.25} : grid.window_epsilons;
  auto mixing_eps =
      grid.mixing_epsilons.empty() ? std::vector<double>{0.25, 0.5, 0.75} : grid.mixing_epsilons;

  std::vector<BoundReport> reports;
  auto add = [&](const auto& rs) { reports.insert(reports.end(), rs.begin(), rs.end()); };

  for (double e : window_eps) reports.push_back(checker.check_window_bound(e));
  for (double e : mixing_eps) add(checker.check_mixing_time_bounds(e));
  reports.push_back(checker.check_p_control());
  for (double t : times) reports.push_back(checker.check_lipschitz_regularity(t));
  for (double t : times)
    for (double s : shifts) reports.push_back(checker.check_entropy_time_regularity(t, s));
  for (double t : times) add(checker.check_uniform_heat_kernel(t));
  reports.push_back(checker.check_reversed_pinsker(0.0));
  for (double t : times) reports.push_back(checker.check_reversed_pinsker(t));
  add(checker.check_cheeger());
  for (double t : times)
    for (double theta : thetas) add(checker.check_density_tail_bounds(t, theta));

  std::stable_sort(reports.begin(), reports.end(),
                   [](const BoundReport& a, const BoundReport& b) { return a.id < b.id; });
  return reports;
}

VerifySummary summarize(const std::vector<BoundReport>& reports) {
  VerifySummary s;
  for (const auto& r : reports) {
    switch (r.status) {
      case BoundStatus::Pass: ++s.passed; break;
      case BoundStatus::Fail: ++s.failed; break;
      case BoundStatus::Skipped: ++s.skipped; break;
    }
  }
  return s;
}

}  // namespace cutofflab
