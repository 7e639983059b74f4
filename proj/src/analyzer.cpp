#include "cutofflab/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutofflab/errors.hpp"
#include "cutofflab/model.hpp"

namespace cutofflab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ptrdiff_t index_of(const std::vector<double>& values, double v) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(values[i] - v) <= 1e-12) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

std::vector<double> window_pairs(const std::vector<double>& eps) {
  std::vector<double> out;
  for (double e : eps)
    if (e < 0.5 && index_of(eps, 1.0 - e) >= 0) out.push_back(e);
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

double SweepRecord::t_mix_at(double eps) const {
  const auto i = index_of(epsilons, eps);
  return i < 0 ? kNaN : t_mix[static_cast<std::size_t>(i)];
}

double SweepRecord::vc_at(double eps) const {
  const auto i = index_of(epsilons, eps);
  return i < 0 ? kNaN : vc_statistic[static_cast<std::size_t>(i)];
}

SweepRecord analyze_member(const Chain& chain, std::size_t size, const SweepOptions& options) {
  SweepRecord rec;
  rec.size = size;
  rec.states = chain.size();
  rec.epsilons = options.epsilons;

  const ChainModel model = build_model(chain, options.dense_limit);
  CheckOptions check = default_check_options(model);
  if (options.heat_tol) check.stats.heat.tol = *options.heat_tol;
  check.stats.t_tol = options.t_tol;
  check.slack_tol = options.slack_tol;
  BoundChecker checker(model, check);

  const auto& s = model.spectral;
  rec.gamma = s.gamma;
  rec.phi = s.phi;
  rec.phi_exact = s.phi_exact;
  rec.delta = s.delta;
  rec.p_min = s.p_min;
  rec.diameter = s.diameter;

  for (double eps : rec.epsilons) {
    const double t = checker.mixing(eps).t_mix;
    const double vkl = checker.profile(t).vkl;
    rec.t_mix.push_back(t);
    rec.vkl_at_t_mix.push_back(vkl);
    rec.vc_statistic.push_back(s.gamma * t / (1.0 + std::sqrt(vkl)));
  }
  rec.window_epsilons = window_pairs(rec.epsilons);
  for (double eps : rec.window_epsilons) {
    const double late = rec.t_mix_at(eps), early = rec.t_mix_at(1.0 - eps);
    rec.window.push_back(late - early);
    rec.cutoff_ratio.push_back(early / late);
    rec.window_reports.push_back(checker.check_window_bound(eps));
  }
  const double half = rec.t_mix_at(0.5);
  rec.window_ratio = rec.window.empty() || std::isnan(half) ? kNaN : rec.window.front() / half;
  rec.ok = true;
  return rec;
}

std::vector<SweepRecord> sweep(const FamilySpec& family, const std::vector<std::size_t>& sizes,
                               const SweepOptions& options) {
  for (double e : options.epsilons)
    if (!(e > 0.0 && e < 1.0)) throw LabError(ErrorCode::InvalidParams, "epsilons must lie in (0,1)");
  if (window_pairs(options.epsilons).empty())
    throw LabError(ErrorCode::InvalidParams, "epsilon grid needs a pair (eps, 1 - eps) with eps < 1/2");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw LabError(ErrorCode::InvalidParams, "sizes must be strictly increasing");

  // Members are analyzed one at a time; each analysis is parallel inside.
  std::vector<SweepRecord> records;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    FamilySpec spec = family;
    spec.size = sizes[i];
    spec.seed = family.seed + i;
    try {
      records.push_back(analyze_member(generate(spec), sizes[i], options));
    } catch (const LabError& e) {
      SweepRecord failed;
      failed.size = sizes[i];
      failed.epsilons = options.epsilons;
      failed.error = e.what();
      records.push_back(std::move(failed));
    }
  }
  return records;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CutoffConsistent: return "cutoff-consistent";
    case Verdict::NoCutoffConsistent: return "no-cutoff-consistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool flat_within(const std::vector<double>& values, double band) {
  if (values.empty()) return false;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *lo > 0.0 && *hi <= (1.0 + band) * *lo;
}

bool trending(const std::vector<double>& values, bool decreasing, int inversions) {
  if (values.size() < 2) return false;
  int wrong = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool step_ok = decreasing ? values[i] < values[i - 1] : values[i] > values[i - 1];
    if (!step_ok) ++wrong;
  }
  const bool net = decreasing ? values.back() < values.front() : values.back() > values.front();
  return wrong <= inversions && net;
}

TrendVerdict verdict(const std::vector<SweepRecord>& records, const VerdictThresholds& thresholds) {
  TrendVerdict v;
  std::vector<double> sizes;
  v.min_delta = v.min_gamma = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (!r.ok) continue;
    sizes.push_back(static_cast<double>(r.states));
    v.window_ratios.push_back(r.window_ratio);
    v.vc_values.push_back(r.vc_at(thresholds.vc_epsilon));
    v.min_delta = std::min(v.min_delta, r.delta);
    v.min_gamma = std::min(v.min_gamma, r.gamma);
  }
  if (sizes.size() < 3) throw LabError(ErrorCode::InvalidParams, "verdict needs at least 3 successful sizes");
  for (double x : v.window_ratios)
    if (!std::isfinite(x)) throw LabError(ErrorCode::InvalidParams, "epsilon grid lacks 1/2 for the window ratio");
  for (double x : v.vc_values)
    if (!std::isfinite(x))
      throw LabError(ErrorCode::InvalidParams, "epsilon grid lacks the vc epsilon " +
                                                   std::to_string(thresholds.vc_epsilon));

  v.window_slope = log_log_slope(sizes, v.window_ratios);
  v.vc_slope = log_log_slope(sizes, v.vc_values);
  v.window_decreasing = trending(v.window_ratios, true, thresholds.allowed_inversions);
  v.vc_increasing = trending(v.vc_values, false, thresholds.allowed_inversions);
  v.window_flat = flat_within(v.window_ratios, thresholds.flat_band);
  v.vc_flat = flat_within(v.vc_values, thresholds.flat_band);
  v.a1_holds = v.min_delta >= thresholds.a1_delta;
  v.a2_holds = v.min_gamma >= thresholds.a2_gamma;

  if (v.window_flat && v.vc_flat)
    v.verdict = Verdict::NoCutoffConsistent;
  else if (v.window_decreasing && v.vc_increasing)
    v.verdict = Verdict::CutoffConsistent;
  else
    v.verdict = Verdict::Inconclusive;
  return v;
}

std::vector<BoundReport> window_bound_consistency(const std::vector<SweepRecord>& records,
                                              const std::vector<double>& epsilons) {
  std::vector<BoundReport> out;
  for (const auto& r : records) {
    for (double eps : epsilons) {
      const auto i = index_of(r.window_epsilons, eps);
      if (r.ok && i >= 0) {
        out.push_back(r.window_reports[static_cast<std::size_t>(i)]);
        continue;
      }
      BoundReport skip;
      skip.id = BoundId::WindowWidth;
      skip.inputs.epsilon = eps;
      skip.lhs = skip.rhs = skip.slack = kNaN;
      skip.status = BoundStatus::Skipped;
      skip.preconditions_met = false;
      if (!(eps > 0.0 && eps < 0.5)) {
        skip.reason = "epsilon_out_of_range";
        skip.note = "requires 0 < eps < 1/2";
      } else if (!r.ok) {
        skip.reason = "member_failed";
        skip.note = r.error;
      } else {
        skip.reason = "not_in_sweep_grid";
        skip.note = "sweep grid lacks the pair (eps, 1 - eps)";
      }
      out.push_back(std::move(skip));
    }
  }
  return out;
}

}  // namespace cutofflab
