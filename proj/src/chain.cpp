#include "cutofflab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "cutofflab/errors.hpp"

namespace cutofflab {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::string pair_str(State x, State y) {
  std::ostringstream os;
  os << "(" << x << "," << y << ")";
  return os.str();
}

}  // namespace

RawMatrix RawMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  RawMatrix raw;
  raw.n = rows.size();
  for (State x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != rows.size())
      throw LabError(ErrorCode::InvalidParams,
                     "matrix is not square: row " + std::to_string(x) + " has " +
                         std::to_string(rows[x].size()) + " entries, expected " +
                         std::to_string(rows.size()));
    for (State y = 0; y < rows.size(); ++y)
      if (rows[x][y] != 0.0) raw.entries.push_back({x, y, rows[x][y]});
  }
  return raw;
}

double Chain::operator()(State x, State y) const {
  const auto r = row(x);
  auto it = std::lower_bound(r.begin(), r.end(), y,
                             [](const Entry& e, State c) { return e.col < c; });
  return (it != r.end() && it->col == y) ? it->value : 0.0;
}

Eigen::MatrixXd Chain::dense() const {
  const std::size_t n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (State x = 0; x < n; ++x)
    for (const auto& e : row(x)) m(x, e.col) = e.value;
  return m;
}

Chain Chain::with_hypercube_form(HypercubeForm form) const {
  Chain copy = *this;
  copy.hypercube_ = form;
  return copy;
}

Chain validate_chain(const RawMatrix& raw, const ValidateOptions& options) {
  const std::size_t n = raw.n;
  if (n < 2) throw LabError(ErrorCode::InvalidParams, "need at least 2 states, got " + std::to_string(n));
  if (!raw.labels.empty() && raw.labels.size() != n)
    throw LabError(ErrorCode::InvalidParams, "label count does not match state count");

  // Collect into ordered rows; duplicates are an input error.
  std::vector<std::map<State, double>> rows(n);
  for (const auto& t : raw.entries) {
    if (t.row >= n || t.col >= n)
      throw LabError(ErrorCode::InvalidParams, "entry " + pair_str(t.row, t.col) + " out of range");
    if (!std::isfinite(t.value))
      throw LabError(ErrorCode::NonFiniteValue, "entry " + pair_str(t.row, t.col) + " is not finite");
    if (t.value < 0.0)
      throw LabError(ErrorCode::NegativeEntry, "entry " + pair_str(t.row, t.col) + " is negative");
    if (!rows[t.row].emplace(t.col, t.value).second)
      throw LabError(ErrorCode::InvalidParams, "duplicate entry " + pair_str(t.row, t.col));
  }
  for (auto& r : rows)
    std::erase_if(r, [](const auto& kv) { return kv.second == 0.0; });

  for (State x = 0; x < n; ++x) {
    double sum = 0.0;
    for (const auto& [y, v] : rows[x]) sum += v;
    const double err = std::abs(sum - 1.0);
    if (err <= options.row_sum_tol) continue;
    if (options.renormalize && err <= options.renormalize_limit && sum > 0.0) {
      for (auto& [y, v] : rows[x]) v /= sum;
      continue;
    }
    std::ostringstream os;
    os.precision(17);
    os << "row " << x << " sums to " << sum;
    throw LabError(ErrorCode::RowSumError, os.str());
  }

  for (State x = 0; x < n; ++x)
    for (const auto& [y, v] : rows[x])
      if (!rows[y].contains(x))
        throw LabError(ErrorCode::AsymmetricSupport,
                       "K" + pair_str(x, y) + " > 0 but K" + pair_str(y, x) + " = 0");

  Chain chain;
  chain.row_start_.assign(n + 1, 0);
  for (State x = 0; x < n; ++x) {
    chain.row_start_[x + 1] = chain.row_start_[x] + rows[x].size();
    for (const auto& [y, v] : rows[x]) chain.entries_.push_back({y, v});
  }
  chain.labels_ = raw.labels;

  const auto dist = bfs_distances(chain, 0);
  const auto unreached = std::count(dist.begin(), dist.end(), kUnreached);
  if (unreached > 0) {
    // Count components for the diagnostic.
    std::vector<std::uint32_t> comp(n, kUnreached);
    std::uint32_t components = 0;
    for (State s = 0; s < n; ++s) {
      if (comp[s] != kUnreached) continue;
      const auto d = bfs_distances(chain, s);
      for (State y = 0; y < n; ++y)
        if (d[y] != kUnreached) comp[y] = components;
      ++components;
    }
    throw LabError(ErrorCode::NotIrreducible,
                   "support graph has " + std::to_string(components) + " components; " +
                       std::to_string(unreached) + " states unreachable from state 0");
  }
  return chain;
}

Chain validate_chain(const std::vector<std::vector<double>>& rows, const ValidateOptions& options) {
  return validate_chain(RawMatrix::from_dense(rows), options);
}

std::vector<std::uint32_t> bfs_distances(const Chain& chain, State origin) {
  std::vector<std::uint32_t> dist(chain.size(), kUnreached);
  std::deque<State> queue{origin};
  dist[origin] = 0;
  while (!queue.empty()) {
    const State x = queue.front();
    queue.pop_front();
    for (const auto& e : chain.row(x)) {
      if (dist[e.col] != kUnreached) continue;
      dist[e.col] = dist[x] + 1;
      queue.push_back(e.col);
    }
  }
  return dist;
}

unsigned ChainMetrics::distance(State x, State y) const {
  if (dist_.empty())
    throw LabError(ErrorCode::InvalidParams, "distance matrix not stored above the dense limit");
  return dist_[x * n_ + y];
}

ChainMetrics chain_metrics(const Chain& chain, std::size_t dense_limit) {
  ChainMetrics m;
  const std::size_t n = chain.size();
  m.n_ = n;
  m.delta = 1.0;
  for (State x = 0; x < n; ++x)
    for (const auto& e : chain.row(x)) m.delta = std::min(m.delta, e.value);

  const bool keep = n <= dense_limit;
  if (keep) m.dist_.resize(n * n);
  for (State x = 0; x < n; ++x) {
    const auto d = bfs_distances(chain, x);
    for (State y = 0; y < n; ++y) m.diameter = std::max<unsigned>(m.diameter, d[y]);
    if (keep) std::copy(d.begin(), d.end(), m.dist_.begin() + static_cast<std::ptrdiff_t>(x * n));
  }
  m.lip_constant_c = 3.0 * (1.0 - std::log(m.delta));
  return m;
}

double lipschitz_norm(const Chain& chain, std::span<const double> f) {
  if (f.size() != chain.size())
    throw LabError(ErrorCode::InvalidParams, "function length does not match state count");
  for (double v : f)
    if (!std::isfinite(v)) throw LabError(ErrorCode::NonFiniteValue, "function has non-finite values");
  double best = 0.0;
  for (State x = 0; x < chain.size(); ++x)
    for (const auto& e : chain.row(x))
      if (e.col != x) best = std::max(best, std::abs(f[x] - f[e.col]));
  return best;
}

}  // namespace cutofflab
