#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cutofflab/info_stats.hpp"
#include "cutofflab/model.hpp"

namespace cutofflab {

/// One identifier per checked inequality; two-sided statements get one id
/// per side. Declaration order is the report order of a verification run.
enum class BoundId {
  WindowWidth,
  MixingTimeLower,
  MixingTimeUpper,
  PControl,
  LipschitzRegularity,
  EntropyTimeRegularity,
  UniformHeatKernelLower,
  UniformHeatKernelUpper,
  ReversedPinsker,
  CheegerLower,
  CheegerUpper,
  DensityTailUpper,
  DensityTailLower,
};

std::string_view bound_name(BoundId id);
std::optional<BoundId> parse_bound_name(std::string_view name);

enum class BoundStatus { Pass, Fail, Skipped };
std::string_view status_name(BoundStatus status);

struct BoundInputs {
  std::optional<double> t;
  std::optional<double> s;
  std::optional<double> epsilon;
  std::optional<double> theta;
  std::optional<State> origin;
};

/// lhs <= rhs is the checked statement; slack = rhs - lhs.
struct BoundReport {
  BoundId id = BoundId::WindowWidth;
  BoundInputs inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  BoundStatus status = BoundStatus::Skipped;
  bool preconditions_met = false;
  /// Machine-readable reason for SKIPPED reports, empty otherwise.
  std::string reason;
  std::string note;

  bool passed() const { return status == BoundStatus::Pass; }
};

/// F(u) = log u + 1/u - 1.
double f_function(double u);
/// g(u) = u log u / (u - 1), with g(1) = 1.
double g_function(double u);

struct CheckOptions {
  StatsOptions stats;
  double slack_tol = 1e-9;
};

CheckOptions default_check_options(const ChainModel& model);

/// Evaluates the quantitative inequalities on one chain. Heat-kernel rows and
/// mixing times are memoized, so a checker is not thread-safe; the work
/// inside each check is parallel.
class BoundChecker {
 public:
  BoundChecker(const ChainModel& model, CheckOptions options);

  const ChainModel& model() const { return model_; }
  const MixingTimeResult& mixing(double epsilon);
  /// Worst-case statistics at t from the memoized heat-kernel rows.
  ProfilePoint profile(double t);

  BoundReport check_window_bound(double epsilon);
  std::array<BoundReport, 2> check_mixing_time_bounds(double epsilon);
  BoundReport check_p_control();
  BoundReport check_lipschitz_regularity(State origin, double t);
  /// Worst origin.
  BoundReport check_lipschitz_regularity(double t);
  BoundReport check_entropy_time_regularity(double t, double s);
  std::array<BoundReport, 2> check_uniform_heat_kernel(double t);
  BoundReport check_reversed_pinsker(double t);
  std::array<BoundReport, 2> check_cheeger();
  /// Throws DegenerateThreshold if p^theta rounds to 1.
  std::array<BoundReport, 2> check_density_tail_bounds(State origin, double t, double theta);
  /// Worst origin on each side.
  std::array<BoundReport, 2> check_density_tail_bounds(double t, double theta);

 private:
  const std::vector<Distribution>& rows(double t);
  BoundReport make(BoundId id, BoundInputs inputs, double lhs, double rhs) const;
  BoundReport skipped(BoundId id, BoundInputs inputs, std::string reason, std::string note) const;
  double worst_kl(double t);
  double worst_tv(double t);

  const ChainModel& model_;
  CheckOptions options_;
  std::map<double, MixingTimeResult> mixing_;
  std::map<double, std::vector<Distribution>> rows_;
};

/// Evaluation grid; empty members take the defaults
///   t in {diam/4, t_mix(3/4), t_mix(1/2), t_mix(1/4), 2 t_mix(1/4)},
///   s in {0, 0.1, 1, t_mix(1/4)}, theta in {1/4, 1/2, 1},
///   window epsilons {1/4}, mixing-time epsilons {1/4, 1/2, 3/4}.
struct VerifyGrid {
  std::vector<double> times;
  std::vector<double> shifts;
  std::vector<double> thetas;
  std::vector<double> window_epsilons;
  std::vector<double> mixing_epsilons;
};

/// Runs every check over the grid; reports come back grouped by BoundId in
/// declaration order, then in grid order.
std::vector<BoundReport> verify_all(const ChainModel& model, const VerifyGrid& grid,
                                    const CheckOptions& options);

struct VerifySummary {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

VerifySummary summarize(const std::vector<BoundReport>& reports);

}  // namespace cutofflab
