#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutofflab/bounds.hpp"
#include "cutofflab/families.hpp"

namespace cutofflab {

/// Statistics of one family member.
///   window(eps)        = t_mix(eps) - t_mix(1 - eps), eps < 1/2
///   cutoff_ratio(eps)  = t_mix(1 - eps) / t_mix(eps)
///   vc_statistic(eps)  = gamma t_mix(eps) / (1 + sqrt(V_KL(t_mix(eps))))
struct SweepRecord {
  std::size_t size = 0;  // family size parameter
  std::size_t states = 0;
  bool ok = false;
  std::string error;

  std::vector<double> epsilons;
  std::vector<double> t_mix;
  std::vector<double> vkl_at_t_mix;
  std::vector<double> vc_statistic;

  /// Pairs (eps, 1 - eps) present in the grid with eps < 1/2.
  std::vector<double> window_epsilons;
  std::vector<double> window;
  std::vector<double> cutoff_ratio;
  /// window(first window eps) / t_mix(1/2); NaN when 1/2 is not in the grid.
  double window_ratio = 0.0;

  double gamma = 0.0;
  double phi = 0.0;
  bool phi_exact = false;
  double delta = 0.0;
  double p_min = 0.0;
  unsigned diameter = 0;

  /// Window-width bound evaluated per window epsilon.
  std::vector<BoundReport> window_reports;

  double t_mix_at(double eps) const;
  double vc_at(double eps) const;
};

struct SweepOptions {
  std::vector<double> epsilons{0.25, 0.5, 0.75};
  std::optional<double> heat_tol;
  double t_tol = 0.0;
  double slack_tol = 1e-9;
  std::size_t dense_limit = kDefaultDenseLimit;
};

/// Throws InvalidParams when the epsilon grid has no (eps, 1 - eps) pair.
/// Failures of individual sizes are recorded and the sweep continues.
std::vector<SweepRecord> sweep(const FamilySpec& family, const std::vector<std::size_t>& sizes,
                               const SweepOptions& options = {});

/// Record for a single chain, as computed inside a sweep.
SweepRecord analyze_member(const Chain& chain, std::size_t size, const SweepOptions& options);

enum class Verdict { CutoffConsistent, NoCutoffConsistent, Inconclusive };
std::string_view verdict_name(Verdict v);

/// Heuristic finite-size thresholds.
struct VerdictThresholds {
  double flat_band = 0.2;
  int allowed_inversions = 1;
  /// vc_statistic is read at this epsilon.
  double vc_epsilon = 0.5;
  double a1_delta = 0.1;
  double a2_gamma = 0.01;
};

struct TrendVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> window_ratios;
  std::vector<double> vc_values;
  /// Least-squares slope of log(value) against log(size).
  double window_slope = 0.0;
  double vc_slope = 0.0;
  bool window_decreasing = false;
  bool vc_increasing = false;
  bool window_flat = false;
  bool vc_flat = false;
  bool a1_holds = false;
  bool a2_holds = false;
  double min_delta = 0.0;
  double min_gamma = 0.0;
};

/// no-cutoff-consistent: window ratio and vc both flat within the band;
/// otherwise cutoff-consistent when the window ratio decreases (up to the
/// allowed inversions) and vc increases likewise; otherwise inconclusive. Assumption flags never gate the verdict.
/// Throws InvalidParams with fewer than 3 successful records.
TrendVerdict verdict(const std::vector<SweepRecord>& records, const VerdictThresholds& thresholds = {});

/// Window-width bound per size and epsilon; epsilons >= 1/2 produce
/// SKIPPED reports.
std::vector<BoundReport> window_bound_consistency(const std::vector<SweepRecord>& records,
                                              const std::vector<double>& epsilons);

/// max <= (1 + band) * min, all positive.
bool flat_within(const std::vector<double>& values, double band);
/// Mostly monotone: at most `inversions` steps go the wrong way and the last
/// value is strictly beyond the first.
bool trending(const std::vector<double>& values, bool decreasing, int inversions);

}  // namespace cutofflab
