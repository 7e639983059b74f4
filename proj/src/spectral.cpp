#include "cutofflab/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "cutofflab/errors.hpp"
#include "cutofflab/parallel.hpp"

namespace cutofflab {
namespace {

constexpr double kStationaryResidual = 1e-12;
constexpr double kEigenResidual = 1e-9;

std::vector<double> left_multiply(const Chain& chain, const std::vector<double>& v) {
  std::vector<double> out(chain.size(), 0.0);
  for (State x = 0; x < chain.size(); ++x)
    for (const auto& e : chain.row(x)) out[e.col] += v[x] * e.value;
  return out;
}

void normalize_l1(std::vector<double>& v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= sum;
}

Distribution stationary_dense(const Chain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  // Transpose system (K^T - I) pi = 0 with the last equation replaced by
  // sum(pi) = 1.
  Eigen::MatrixXd a = chain.dense().transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  for (int step = 0; step < 3; ++step) {
    const Eigen::VectorXd r = b - a * x;
    x += lu.solve(r);
  }
  Distribution pi;
  pi.probs.assign(x.data(), x.data() + n);
  for (double v : pi.probs)
    if (!(v > 0.0) || !std::isfinite(v))
      throw LabError(ErrorCode::SolveFailed, "stationary solve produced a non-positive entry");
  normalize_l1(pi.probs);
  return pi;
}

Distribution stationary_iterative(const Chain& chain) {
  const std::size_t n = chain.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  constexpr std::size_t kMaxIterations = 1'000'000;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    auto next = left_multiply(chain, v);
    double diff = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      next[x] = 0.5 * (next[x] + v[x]);
      diff += std::abs(next[x] - v[x]);
    }
    normalize_l1(next);
    v.swap(next);
    if (diff <= 0.25 * kStationaryResidual) break;
  }
  return Distribution{std::move(v), 0.0};
}

/// Row-compressed symmetric S with the same pattern as K.
struct SparseSymmetric {
  std::vector<std::size_t> start;
  std::vector<State> col;
  std::vector<double> value;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (Eigen::Index x = 0; x < v.size(); ++x) {
      double acc = 0.0;
      for (std::size_t k = start[x]; k < start[x + 1]; ++k) acc += value[k] * v(col[k]);
      out(x) = acc;
    }
    return out;
  }
};

SparseSymmetric sparse_symmetric(const Chain& chain, const Distribution& pi) {
  SparseSymmetric s;
  s.start.push_back(0);
  for (State x = 0; x < chain.size(); ++x) {
    for (const auto& e : chain.row(x)) {
      const State y = e.col;
      s.col.push_back(y);
      s.value.push_back((pi[x] * e.value + pi[y] * chain(y, x)) / (2.0 * std::sqrt(pi[x] * pi[y])));
    }
    s.start.push_back(s.col.size());
  }
  return s;
}

SpectralGap gap_dense(const Chain& chain, const Distribution& pi) {
  const Eigen::MatrixXd s = reversibilized_symmetric(chain, pi);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) throw LabError(ErrorCode::EigenFailed, "dense eigensolve failed");
  const auto n = s.rows();
  SpectralGap gap;
  gap.lambda2 = solver.eigenvalues()(n - 2);
  gap.vector = solver.eigenvectors().col(n - 2);
  gap.residual = (s * gap.vector - gap.lambda2 * gap.vector).norm();
  return gap;
}

SpectralGap gap_iterative(const Chain& chain, const Distribution& pi) {
  const std::size_t n = chain.size();
  const SparseSymmetric s = sparse_symmetric(chain, pi);
  Eigen::VectorXd top(n);
  for (std::size_t x = 0; x < n; ++x) top(x) = std::sqrt(pi[x]);
  top.normalize();

  // Deterministic, generic starting vector.
  Eigen::VectorXd v(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (std::size_t x = 0; x < n; ++x) {
    state ^= state >> 33;
    state *= 0xff51afd7ed558ccdull;
    state ^= state >> 33;
    v(x) = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  }

  // Power iteration on (S + I)/2, whose spectrum lies in [0, 1], with the
  // known top eigenvector sqrt(pi) projected out.
  constexpr std::size_t kMaxIterations = 200'000;
  double theta = 0.0, residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    v -= top.dot(v) * top;
    v.normalize();
    const Eigen::VectorXd sv = s.apply(v);
    theta = v.dot(sv);
    residual = (sv - theta * v).norm();
    if (residual <= kEigenResidual) break;
    v = 0.5 * (sv + v);
  }
  if (residual > kEigenResidual)
    throw LabError(ErrorCode::EigenFailed,
                   "power iteration stalled with residual " + std::to_string(residual));
  return SpectralGap{1.0 - theta, theta, v, residual};
}

double cut_ratio(double flow, double mass) { return flow / std::min(mass, 1.0 - mass); }

}  // namespace

Distribution stationary_distribution(const Chain& chain, std::size_t dense_limit) {
  Distribution pi = chain.size() <= dense_limit ? stationary_dense(chain) : stationary_iterative(chain);
  const double r = stationarity_residual(chain, pi);
  if (!(r <= kStationaryResidual))
    throw LabError(ErrorCode::SolveFailed, "stationary residual " + std::to_string(r) + " above 1e-12");
  return pi;
}

double stationarity_residual(const Chain& chain, const Distribution& pi) {
  const auto pk = left_multiply(chain, pi.probs);
  double r = 0.0;
  for (std::size_t x = 0; x < pk.size(); ++x) r += std::abs(pk[x] - pi[x]);
  return r;
}

Chain pi_adjoint(const Chain& chain, const Distribution& pi) {
  const std::size_t n = chain.size();
  std::vector<std::vector<Triplet>> rows(n);
  for (State y = 0; y < n; ++y)
    for (const auto& e : chain.row(y)) rows[e.col].push_back({e.col, y, pi[y] * e.value / pi[e.col]});
  RawMatrix raw;
  raw.n = n;
  raw.labels = chain.labels();
  for (auto& r : rows) {
    double sum = 0.0;
    for (const auto& t : r) sum += t.value;
    for (auto& t : r) raw.entries.push_back({t.row, t.col, t.value / sum});
  }
  ValidateOptions options;
  options.renormalize = true;
  return validate_chain(raw, options);
}

Eigen::MatrixXd reversibilized_symmetric(const Chain& chain, const Distribution& pi) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (State x = 0; x < chain.size(); ++x)
    for (const auto& e : chain.row(x)) {
      const double flow = 0.5 * pi[x] * e.value / std::sqrt(pi[x] * pi[e.col]);
      s(x, e.col) += flow;
      s(e.col, x) += flow;
    }
  return s;
}

SpectralGap spectral_gap(const Chain& chain, const Distribution& pi, std::size_t dense_limit) {
  SpectralGap gap = chain.size() <= dense_limit ? gap_dense(chain, pi) : gap_iterative(chain, pi);
  if (gap.lambda2 < -1.0 - kEigenResidual)
    throw LabError(ErrorCode::EigenFailed, "second eigenvalue below -1: " + std::to_string(gap.lambda2));
  gap.gamma = 1.0 - gap.lambda2;
  return gap;
}

double poincare_constant(const Chain& chain, const Distribution& pi, std::size_t dense_limit) {
  return spectral_gap(chain, pi, dense_limit).gamma;
}

double cheeger_exact(const Chain& chain, const Distribution& pi) {
  const std::size_t n = chain.size();
  if (n > kExactCheegerLimit)
    throw LabError(ErrorCode::TooLargeForExact,
                   std::to_string(n) + " states exceed the exact enumeration cap of " +
                       std::to_string(kExactCheegerLimit));

  // Subsets A of {0..n-2}; state n-1 always lies in the complement, which
  // covers every cut exactly once. Enumerated in Gray-code order within
  // fixed blocks, each block starting from a fresh evaluation.
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  constexpr std::uint64_t kBlock = 1 << 12;
  const std::size_t blocks = static_cast<std::size_t>((total + kBlock - 1) / kBlock);
  std::vector<double> block_min(blocks, std::numeric_limits<double>::infinity());

  auto flow_of = [&](std::uint64_t mask) {
    double flow = 0.0;
    for (State x = 0; x < n; ++x) {
      if (!((mask >> x) & 1)) continue;
      for (const auto& e : chain.row(x))
        if (!((mask >> e.col) & 1)) flow += pi[x] * e.value;
    }
    return flow;
  };
  auto mass_of = [&](std::uint64_t mask) {
    double mass = 0.0;
    for (State x = 0; x < n; ++x)
      if ((mask >> x) & 1) mass += pi[x];
    return mass;
  };

  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(total, begin + kBlock);
    std::uint64_t mask = begin ^ (begin >> 1);
    double flow = flow_of(mask);
    double mass = mass_of(mask);
    double best = std::numeric_limits<double>::infinity();
    if (mask != 0) best = cut_ratio(flow, mass);
    for (std::uint64_t i = begin + 1; i < end; ++i) {
      const std::uint64_t next = i ^ (i >> 1);
      const State x = static_cast<State>(std::countr_zero(next ^ mask));
      const bool adding = (next >> x) & 1;
      double out = 0.0, in = 0.0;  // x -> complement, members -> x
      for (const auto& e : chain.row(x)) {
        if (e.col == x) continue;
        if ((mask >> e.col) & 1)
          in += pi[e.col] * chain(e.col, x);
        else
          out += pi[x] * e.value;
      }
      if (adding) {
        flow += out - in;
        mass += pi[x];
      } else {
        flow += in - out;
        mass -= pi[x];
      }
      mask = next;
      if (mask != 0) best = std::min(best, cut_ratio(flow, mass));
    }
    block_min[b] = best;
  });
  return *std::min_element(block_min.begin(), block_min.end());
}

double cheeger_sweep_bound(const Chain& chain, const Distribution& pi, const SpectralGap& gap) {
  const std::size_t n = chain.size();
  std::vector<double> score(n);
  for (State x = 0; x < n; ++x) score[x] = gap.vector(static_cast<Eigen::Index>(x)) / std::sqrt(pi[x]);
  std::vector<State> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](State a, State b) { return score[a] < score[b]; });

  std::vector<char> member(n, 0);
  double flow = 0.0, mass = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const State x = order[k];
    double out = 0.0, in = 0.0;
    for (const auto& e : chain.row(x)) {
      if (e.col == x) continue;
      if (member[e.col])
        in += pi[e.col] * chain(e.col, x);
      else
        out += pi[x] * e.value;
    }
    flow += out - in;
    mass += pi[x];
    member[x] = 1;
    best = std::min(best, cut_ratio(flow, mass));
  }
  return best;
}

double cheeger_sweep_bound(const Chain& chain, const Distribution& pi, std::size_t dense_limit) {
  return cheeger_sweep_bound(chain, pi, spectral_gap(chain, pi, dense_limit));
}

SpectralSummary spectral_summary(const Chain& chain, const ChainMetrics& metrics,
                                 std::size_t dense_limit) {
  SpectralSummary s;
  s.pi = stationary_distribution(chain, dense_limit);
  s.p_min = *std::min_element(s.pi.probs.begin(), s.pi.probs.end());
  const SpectralGap gap = spectral_gap(chain, s.pi, dense_limit);
  s.gamma = gap.gamma;
  if (chain.size() <= kExactCheegerLimit) {
    s.phi = cheeger_exact(chain, s.pi);
    s.phi_exact = true;
  } else {
    s.phi = cheeger_sweep_bound(chain, s.pi, gap);
    s.phi_exact = false;
  }
  s.delta = metrics.delta;
  s.diameter = metrics.diameter;
  s.c = metrics.lip_constant_c;
  return s;
}

}  // namespace cutofflab
