#include <doctest.h>

#include <cmath>

#include "cutofflab/analyzer.hpp"
#include "cutofflab/errors.hpp"
#include "support.hpp"

using namespace cutofflab;

namespace {

SweepRecord synthetic(std::size_t states, double window_ratio, double vc) {
  SweepRecord r;
  r.size = r.states = states;
  r.ok = true;
  r.epsilons = {0.25, 0.5, 0.75};
  r.t_mix = {1.0, 1.0, 1.0};
  r.vc_statistic = {vc, vc, vc};
  r.window_ratio = window_ratio;
  r.delta = 0.5;
  r.gamma = 0.1;
  return r;
}

FamilySpec family_spec(FamilyId id, std::uint64_t seed = 0) {
  FamilySpec spec;
  spec.family = id;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("flat_within and trending") {
  CHECK(flat_within({1.0, 1.1, 1.19}, 0.2));
  CHECK_FALSE(flat_within({1.0, 1.3}, 0.2));
  CHECK_FALSE(flat_within({0.0, 0.0}, 0.2));
  CHECK_FALSE(flat_within({}, 0.2));
  CHECK(trending({4, 3, 2, 1}, true, 0));
  CHECK(trending({4, 3, 3.5, 1}, true, 1));
  CHECK_FALSE(trending({4, 3, 3.5, 1}, true, 0));
  CHECK_FALSE(trending({4, 5, 6, 1}, true, 1));
  CHECK_FALSE(trending({1, 2, 1}, false, 1));
  CHECK(trending({1, 2, 3}, false, 0));
  CHECK_FALSE(trending({1}, false, 1));
}

TEST_CASE("synthetic verdicts") {
  const std::vector<SweepRecord> cutoff{synthetic(8, 0.8, 1.0), synthetic(16, 0.5, 2.0), synthetic(32, 0.3, 4.0)};
  CHECK(verdict(cutoff).verdict == Verdict::CutoffConsistent);

  const std::vector<SweepRecord> flat{synthetic(8, 0.8, 1.0), synthetic(16, 0.82, 1.05), synthetic(32, 0.79, 1.02)};
  const auto v = verdict(flat);
  CHECK(v.verdict == Verdict::NoCutoffConsistent);
  CHECK(std::abs(v.window_slope) < 0.05);

  const std::vector<SweepRecord> falling{synthetic(8, 0.9, 1.0), synthetic(16, 0.6, 1.5), synthetic(32, 0.4, 2.2),
                                         synthetic(64, 0.25, 3.0)};
  CHECK(verdict(falling).verdict == Verdict::CutoffConsistent);
  const std::vector<SweepRecord> banded{synthetic(8, 0.52, 1.0), synthetic(16, 0.50, 1.01), synthetic(32, 0.55, 1.03),
                                        synthetic(64, 0.51, 1.04)};
  CHECK(verdict(banded).verdict == Verdict::NoCutoffConsistent);

  const std::vector<SweepRecord> mixed{synthetic(8, 0.8, 1.0), synthetic(16, 0.5, 1.0), synthetic(32, 0.3, 1.0)};
  CHECK(verdict(mixed).verdict == Verdict::Inconclusive);

  const auto slope = verdict(cutoff);
  CHECK(slope.vc_slope == doctest::Approx(1.0));
  CHECK(slope.a1_holds);
  CHECK(slope.a2_holds);
  CHECK(slope.min_gamma == 0.1);

  CHECK(verdict_name(Verdict::NoCutoffConsistent) == "no-cutoff-consistent");
}

TEST_CASE("verdict input errors") {
  std::vector<SweepRecord> two{synthetic(8, 0.8, 1.0), synthetic(16, 0.5, 2.0)};
  CHECK_THROWS_AS(verdict(two), LabError);
  two.push_back(synthetic(32, 0.3, 4.0));
  two.push_back(SweepRecord{});
  CHECK_NOTHROW(verdict(two));
  two[0].window_ratio = std::nan("");
  CHECK_THROWS_AS(verdict(two), LabError);
}

TEST_CASE("sweep rejects bad grids") {
  SweepOptions opt;
  opt.epsilons = {0.25, 0.5};
  CHECK_THROWS_AS(sweep(family_spec(FamilyId::Cycle), {8, 16}, opt), LabError);
  opt.epsilons = {0.25, 1.5};
  CHECK_THROWS_AS(sweep(family_spec(FamilyId::Cycle), {8, 16}, opt), LabError);
  CHECK_THROWS_AS(sweep(family_spec(FamilyId::Cycle), {16, 8}), LabError);
}

TEST_CASE("failed members are recorded and the sweep continues") {
  const auto records = sweep(family_spec(FamilyId::Cycle), {1, 8, 16});
  REQUIRE(records.size() == 3);
  CHECK_FALSE(records[0].ok);
  CHECK_FALSE(records[0].error.empty());
  CHECK(records[1].ok);
  CHECK(records[2].ok);
}

TEST_CASE("complete graph mixing times follow the closed form") {
  const auto records = sweep(family_spec(FamilyId::Complete), {8, 16, 32});
  for (const auto& r : records) {
    REQUIRE(r.ok);
    const double n = static_cast<double>(r.states);
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
      const double eps = r.epsilons[i];
      CHECK(r.t_mix[i] == doctest::Approx((n - 1.0) / n * std::log((1.0 - 1.0 / n) / eps)).epsilon(1e-7));
    }
    CHECK(r.gamma == doctest::Approx(n / (n - 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("cycle sweep is no-cutoff-consistent") {
  const auto records = sweep(family_spec(FamilyId::Cycle), {16, 32, 64, 128});
  for (const auto& r : records) {
    REQUIRE(r.ok);
    CHECK(r.window_epsilons == std::vector<double>{0.25});
    CHECK(r.window.front() == doctest::Approx(r.t_mix_at(0.25) - r.t_mix_at(0.75)));
    CHECK(r.cutoff_ratio.front() == doctest::Approx(r.t_mix_at(0.75) / r.t_mix_at(0.25)));
    CHECK(r.window_ratio == doctest::Approx(r.window.front() / r.t_mix_at(0.5)));
    CHECK(r.window_reports.front().passed());
    CHECK(r.t_mix_at(0.25) >= r.t_mix_at(0.5));
    CHECK(r.t_mix_at(0.5) >= r.t_mix_at(0.75));
  }
  const auto v = verdict(records);
  CHECK(v.verdict == Verdict::NoCutoffConsistent);
  CHECK(v.a1_holds);
  CHECK_FALSE(v.a2_holds);
}

TEST_CASE("laziness rescales time and leaves scale-free statistics alone") {
  const auto fast = sweep(family_spec(FamilyId::Cycle), {8, 16, 32});
  FamilySpec slow_spec = family_spec(FamilyId::Cycle);
  slow_spec.laziness = 0.5;
  SweepOptions opt;
  opt.t_tol = 1e-10;
  const auto slow = sweep(slow_spec, {8, 16, 32}, opt);
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(slow[i].gamma == doctest::Approx(0.5 * fast[i].gamma).epsilon(1e-9));
    for (double eps : {0.25, 0.5, 0.75}) {
      CHECK(slow[i].t_mix_at(eps) == doctest::Approx(2.0 * fast[i].t_mix_at(eps)).epsilon(1e-6));
      CHECK(slow[i].vc_at(eps) == doctest::Approx(fast[i].vc_at(eps)).epsilon(1e-6));
    }
    CHECK(slow[i].window_ratio == doctest::Approx(fast[i].window_ratio).epsilon(1e-6));
  }
}

TEST_CASE("window-bound consistency reports") {
  auto records = sweep(family_spec(FamilyId::Cycle), {1, 8, 16});
  const auto reports = window_bound_consistency(records, {0.25, 0.1, 0.6});
  REQUIRE(reports.size() == 9);
  CHECK(reports[0].reason == "member_failed");
  CHECK(reports[2].reason == "epsilon_out_of_range");
  CHECK(reports[3].passed());
  CHECK(reports[4].reason == "not_in_sweep_grid");
  for (const auto& r : reports) CHECK(r.id == BoundId::WindowWidth);
}

TEST_CASE("record invariants on random-regular members") {
  FamilySpec spec = family_spec(FamilyId::RandomRegular, 3);
  const auto records = sweep(spec, {16, 32});
  for (const auto& r : records) {
    REQUIRE(r.ok);
    CHECK(r.states == r.size);
    CHECK(r.t_mix.size() == r.epsilons.size());
    CHECK(r.vkl_at_t_mix.size() == r.epsilons.size());
    for (double v : r.vkl_at_t_mix) CHECK(v >= 0.0);
    for (double c : r.cutoff_ratio) {
      CHECK(c > 0.0);
      CHECK(c <= 1.0);
    }
    CHECK(std::isnan(r.t_mix_at(0.3)));
  }
}
