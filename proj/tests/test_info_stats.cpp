#include <doctest.h>

#include <cmath>
#include <limits>

#include "cutofflab/errors.hpp"
#include "cutofflab/info_stats.hpp"
#include "cutofflab/model.hpp"
#include "support.hpp"

using namespace cutofflab;

namespace {

const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);

}  // namespace

TEST_CASE("total variation examples") {
  const std::vector<double> a{0.3, 0.7}, point{1.0, 0.0}, half{0.5, 0.5}, q{0.75, 0.25};
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(point, half) == 0.5);
  CHECK(tv_distance(q, half) == 0.25);
}

TEST_CASE("relative entropy examples") {
  const std::vector<double> half{0.5, 0.5}, q{0.75, 0.25};
  CHECK(kl_divergence(half, half) == 0.0);
  CHECK(kl_divergence(q, half) == doctest::Approx(0.75 * std::log(1.5) + 0.25 * std::log(0.5)).epsilon(1e-15));
  CHECK(kl_divergence(q, half) == doctest::Approx(0.1308123).epsilon(1e-6));
  for (std::size_t n : {2u, 5u, 17u}) {
    std::vector<double> point(n, 0.0), uniform(n, 1.0 / n);
    point[0] = 1.0;
    CHECK(kl_divergence(point, uniform) == doctest::Approx(std::log(n)).epsilon(1e-15));
  }
}

TEST_CASE("varentropy examples") {
  const std::vector<double> half{0.5, 0.5}, q{0.75, 0.25}, point{1.0, 0.0};
  CHECK(varentropy(half, half) == 0.0);
  CHECK(varentropy(point, half) == 0.0);
  CHECK(varentropy(q, half) == doctest::Approx(3.0 / 16.0 * kLn3 * kLn3).epsilon(1e-14));
  CHECK(varentropy(q, half) == doctest::Approx(0.2263025).epsilon(1e-6));
}

TEST_CASE("Pinsker inequality on random pairs") {
  FamilyRng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    std::vector<double> mu(n), pi(n);
    double smu = 0.0, spi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mu[i] = rng.unit() < 0.2 ? 0.0 : rng.unit();
      pi[i] = 0.01 + rng.unit();
      smu += mu[i];
      spi += pi[i];
    }
    if (smu == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) mu[i] /= smu, pi[i] /= spi;
    CHECK(tv_distance(mu, pi) <= std::sqrt(kl_divergence(mu, pi) / 2.0) + 1e-15);
    CHECK(varentropy(mu, pi) >= 0.0);
  }
}

TEST_CASE("worst-case profile at t = 0 with uniform stationary law") {
  for (std::size_t n : {3u, 8u, 13u}) {
    const ChainModel m = build_model(support::cycle(n));
    const auto p = worst_case_profile(m, 0.0, default_stats_options(m));
    CHECK(p.dtv == doctest::Approx(1.0 - 1.0 / n).epsilon(1e-14));
    CHECK(p.dkl == doctest::Approx(std::log(n)).epsilon(1e-14));
    CHECK(p.vkl == 0.0);
  }
}

TEST_CASE("worst-case profile of the lazy two-state chain at ln 2") {
  const ChainModel m = build_model(support::lazy_two_state());
  const auto p = worst_case_profile(m, kLn2, default_stats_options(m));
  CHECK(p.t == kLn2);
  CHECK(std::abs(p.dtv - 0.25) <= 1e-10);
  CHECK(std::abs(p.dkl - 0.1308123) <= 1e-6);
  CHECK(std::abs(p.vkl - 0.2263025) <= 1e-6);
  CHECK(p.argmax_tv == 0);
  CHECK(p.argmax_kl == 0);
  CHECK(p.argmax_vkl == 0);
}

TEST_CASE("vertex-transitive chains give identical statistics at every origin") {
  const ChainModel m = build_model(support::cycle(8));
  const auto by_origin = profile_by_origin(m, 1.3, default_stats_options(m));
  REQUIRE(by_origin.size() == 8);
  for (const auto& s : by_origin) {
    CHECK(s.dtv == doctest::Approx(by_origin[0].dtv).epsilon(1e-13));
    CHECK(s.dkl == doctest::Approx(by_origin[0].dkl).epsilon(1e-13));
    CHECK(s.vkl == doctest::Approx(by_origin[0].vkl).epsilon(1e-11));
  }
}

TEST_CASE("origin subsets restrict the maximization") {
  const ChainModel m = build_model(validate_chain({{0.0, 1.0}, {0.5, 0.5}}));
  StatsOptions all = default_stats_options(m);
  StatsOptions one = all;
  one.origins = {1};
  const auto full = worst_case_profile(m, 0.0, all);
  const auto sub = worst_case_profile(m, 0.0, one);
  CHECK(full.dtv == doctest::Approx(2.0 / 3.0));
  CHECK(full.argmax_tv == 0);
  CHECK(sub.dtv == doctest::Approx(1.0 / 3.0));
  CHECK(sub.argmax_tv == 1);
}

TEST_CASE("worst-case TV is non-increasing on time grids") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ChainModel m = build_model(support::random_chain(seed, 4 + seed % 8));
    const auto opt = default_stats_options(m);
    double prev = 1.0;
    for (int i = 0; i < 32; ++i) {
      const double d = worst_case_tv(m, 0.25 * i, opt);
      CHECK(d <= prev + 1e-10);
      CHECK(d >= 0.0);
      prev = d;
    }
  }
}

TEST_CASE("mixing time examples") {
  const ChainModel two = build_model(support::lazy_two_state());
  const auto r = mixing_time(two, 0.25, default_stats_options(two));
  CHECK(std::abs(r.t_mix - kLn2) <= 1e-8);
  CHECK(r.bracket_width <= 1e-8);
  CHECK(mixing_time(two, 0.75, default_stats_options(two)).t_mix == 0.0);

  const ChainModel k4 = build_model(support::complete(4));
  const auto rk = mixing_time(k4, 0.25, default_stats_options(k4));
  CHECK(std::abs(rk.t_mix - 0.75 * kLn3) <= 1e-8);
  CHECK(rk.t_mix == doctest::Approx(0.8239592).epsilon(1e-7));
}

TEST_CASE("mixing time brackets the threshold and decreases in epsilon") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ChainModel m = build_model(support::random_chain(seed, 6 + seed));
    const auto opt = default_stats_options(m);
    double prev = std::numeric_limits<double>::infinity();
    double prev_tol = 0.0;
    for (double eps : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const auto r = mixing_time(m, eps, opt);
      CHECK(r.dtv_at_t <= 1.0);
      CHECK(worst_case_tv(m, r.t_mix + r.bracket_width, opt) <= eps + 1e-10);
      if (r.t_mix > r.bracket_width) CHECK(worst_case_tv(m, r.t_mix - r.bracket_width, opt) >= eps - 1e-10);
      CHECK(r.t_mix <= prev + 2.0 * std::max(prev_tol, r.bracket_width));
      prev = r.t_mix;
      prev_tol = r.bracket_width;
    }
    CHECK_THROWS_AS(mixing_time(m, 0.0, opt), LabError);
    CHECK_THROWS_AS(mixing_time(m, 1.0, opt), LabError);
  }
}

TEST_CASE("mixing time stays below the spectral upper bound") {
  for (std::size_t n : {8u, 16u, 33u}) {
    const ChainModel m = build_model(support::cycle(n));
    const auto r = mixing_time(m, 0.25, default_stats_options(m));
    CHECK(r.t_mix <= mixing_time_upper_bound(m, 0.25));
  }
}

TEST_CASE("entropy dissipation examples") {
  const ChainModel two = build_model(support::lazy_two_state());
  HeatKernelOptions heat;
  CHECK(entropy_dissipation(two, 0, kLn2, heat) == doctest::Approx(0.25 * kLn3).epsilon(1e-12));
  CHECK(std::abs(entropy_dissipation(two, 0, kLn2, heat) - 0.2746531) <= 1e-7);

  const ChainModel m = build_model(support::random_chain(4, 7));
  CHECK(std::abs(entropy_dissipation(m.chain, m.pi().probs, m.pi().probs)) <= 1e-15);
}

TEST_CASE("entropy dissipation needs positive mass") {
  const ChainModel m = build_model(support::cycle(6));
  try {
    entropy_dissipation(m, 0, 0.0, HeatKernelOptions{});
    FAIL("expected ZeroMassState");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::ZeroMassState);
  }
}

TEST_CASE("entropy dissipation is the negative time derivative of KL") {
  const double h = 1e-5;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ChainModel m = build_model(support::random_chain(seed, 5));
    const auto heat = log_accurate(m, HeatKernelOptions{});
    for (State o = 0; o < m.size(); ++o) {
      for (double t : {0.5, 1.0, 3.0}) {
        const double d0 = kl_divergence(heat_kernel_row(m.chain, o, t - h, heat).probs, m.pi().probs);
        const double d1 = kl_divergence(heat_kernel_row(m.chain, o, t + h, heat).probs, m.pi().probs);
        const double diss = entropy_dissipation(m, o, t, heat);
        CHECK(std::abs(diss + (d1 - d0) / (2.0 * h)) <= 1e-4);
        CHECK(diss >= -1e-10);
        const auto mu = heat_kernel_row(m.chain, o, t, heat).probs;
        std::vector<double> f(m.size());
        for (State x = 0; x < m.size(); ++x) f[x] = std::log(mu[x]) - std::log(m.pi()[x]);
        CHECK(diss <= lipschitz_norm(m.chain, f) + 1e-10);
      }
    }
  }
}
