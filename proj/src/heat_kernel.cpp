#include "cutofflab/heat_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "cutofflab/errors.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {
namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_poisson(double t, std::size_t n) {
  const double k = static_cast<double>(n);
  return -t + k * std::log(t) - std::lgamma(k + 1.0);
}

}  // namespace

double default_heat_tol(std::size_t n, std::size_t dense_limit) {
  return n <= dense_limit ? 1e-12 : 1e-10;
}

PoissonSeries poisson_series(double t, const HeatKernelOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw LabError(ErrorCode::InvalidParams, "time must be finite and >= 0");
  if (!(options.tol > 0.0 && options.tol <= 1e-6))
    throw LabError(ErrorCode::InvalidParams, "heat-kernel tolerance must lie in (0, 1e-6]");

  PoissonSeries series;
  series.t = t;
  if (t == 0.0) {
    series.weights = {1.0};
    return series;
  }
  if (t > static_cast<double>(options.max_terms))
    throw LabError(ErrorCode::ToleranceUnreachable,
                   "time " + std::to_string(t) + " needs more than " +
                       std::to_string(options.max_terms) + " series terms");

  double log_target = std::log(options.tol);
  if (options.relative) {
    const auto& rel = *options.relative;
    const double floor_far = log_poisson(t, rel.diameter) + rel.diameter * std::log(rel.delta);
    const double floor = std::min(-t, floor_far);
    log_target = std::min(log_target, std::log(rel.relative_tol) + floor);
  }

  // Extend past the mode until the terms are far below the target; beyond
  // that point consecutive ratios t/(n+1) are < 1 and shrinking, so the rest
  // is bounded by a geometric series.
  std::vector<double> logw;
  constexpr double kMargin = 40.0;
  for (std::size_t n = 0;; ++n) {
    logw.push_back(log_poisson(t, n));
    if (static_cast<double>(n + 2) > t && logw.back() < log_target - kMargin) break;
    if (n > options.max_terms + 1)
      throw LabError(ErrorCode::ToleranceUnreachable,
                     "series needs more than " + std::to_string(options.max_terms) + " terms");
  }
  const std::size_t m = logw.size() - 1;
  // Remainder beyond m is at most w_{m+1} / (1 - t/(m+2)).
  const double log_remainder =
      log_poisson(t, m + 1) - std::log1p(-t / static_cast<double>(m + 2));

  // logtail[k] = log sum_{n >= k} w_n, accumulated from the small end.
  std::vector<double> logtail(m + 2);
  logtail[m + 1] = log_remainder;
  for (std::size_t k = m + 1; k-- > 0;) logtail[k] = log_add(logtail[k + 1], logw[k]);

  std::size_t last = 0;
  while (logtail[last + 1] > log_target) ++last;
  if (last + 1 > options.max_terms)
    throw LabError(ErrorCode::ToleranceUnreachable,
                   "series needs " + std::to_string(last + 1) + " terms, cap is " +
                       std::to_string(options.max_terms));

  series.weights.resize(last + 1);
  double total = 0.0;
  for (std::size_t n = 0; n <= last; ++n) total += series.weights[n] = std::exp(logw[n]);
  series.tail = std::exp(logtail[last + 1]);
  // The retained weights sum to 1 - tail exactly; rescaling removes the
  // rounding of the log-space evaluation, which grows with t.
  const double scale = (1.0 - series.tail) / total;
  for (double& w : series.weights) w *= scale;
  return series;
}

Distribution heat_kernel_row(const Chain& chain, State origin, const PoissonSeries& series) {
  const std::size_t n = chain.size();
  if (origin >= n) throw LabError(ErrorCode::InvalidParams, "origin out of range");

  std::vector<double> power(n, 0.0), next(n, 0.0);
  power[origin] = 1.0;
  Distribution out;
  out.probs.assign(n, 0.0);
  out.mass_defect = series.tail;

  const std::size_t terms = series.terms();
  for (std::size_t k = 0; k < terms; ++k) {
    const double w = series.weights[k];
    for (State x = 0; x < n; ++x) out.probs[x] += w * power[x];
    if (k + 1 == terms) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (State x = 0; x < n; ++x) {
      const double px = power[x];
      if (px == 0.0) continue;
      for (const auto& e : chain.row(x)) next[e.col] += px * e.value;
    }
    power.swap(next);
  }
  return out;
}

Distribution heat_kernel_row(const Chain& chain, State origin, double t,
                             const HeatKernelOptions& options) {
  if (options.use_product_form && chain.hypercube_form()) {
    if (!(t >= 0.0)) throw LabError(ErrorCode::InvalidParams, "time must be >= 0");
    return hypercube_heat_kernel_row(*chain.hypercube_form(), origin, t);
  }
  return heat_kernel_row(chain, origin, poisson_series(t, options));
}

std::vector<Distribution> heat_kernel_all(const Chain& chain, double t,
                                          const HeatKernelOptions& options) {
  std::vector<Distribution> rows(chain.size());
  if (options.use_product_form && chain.hypercube_form()) {
    parallel_for(chain.size(), [&](std::size_t o) {
      rows[o] = hypercube_heat_kernel_row(*chain.hypercube_form(), o, t);
    });
    return rows;
  }
  const PoissonSeries series = poisson_series(t, options);
  parallel_for(chain.size(), [&](std::size_t o) { rows[o] = heat_kernel_row(chain, o, series); });
  return rows;
}

Distribution hypercube_heat_kernel_row(const HypercubeForm& form, State origin, double t) {
  const unsigned d = form.dimension;
  const std::size_t n = std::size_t{1} << d;
  if (origin >= n) throw LabError(ErrorCode::InvalidParams, "origin out of range");
  const double rate = (1.0 - form.laziness) / d;
  const double decay = std::exp(-2.0 * rate * t);
  const double same = 0.5 * (1.0 + decay);
  const double flip = 0.5 * (1.0 - decay);
  Distribution out;
  out.probs.resize(n);
  for (State x = 0; x < n; ++x) {
    const int h = std::popcount(static_cast<unsigned long long>(x ^ origin));
    out.probs[x] = std::pow(flip, h) * std::pow(same, static_cast<int>(d) - h);
  }
  return out;
}

}  // namespace cutofflab
