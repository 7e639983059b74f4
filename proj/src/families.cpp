#include "cutofflab/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "cutofflab/errors.hpp"

namespace cutofflab {
namespace {

constexpr std::array<std::string_view, 7> kFamilyNames = {
    "lazy-two-state", "cycle", "complete", "hypercube", "random-regular", "random-symmetric",
    "srw-from-edgelist",
};

constexpr int kMaxRejectionRounds = 1000;

double laziness_of(const FamilySpec& spec) {
  const double a = spec.laziness.value_or(spec.family == FamilyId::LazyTwoState ? 0.5 : 0.0);
  if (!(a >= 0.0 && a < 1.0)) throw LabError(ErrorCode::InvalidParams, "laziness must lie in [0,1)");
  return a;
}

/// Adds holding probability a: (1 - a) K + a I.
RawMatrix make_lazy(RawMatrix raw, double a) {
  if (a == 0.0) return raw;
  for (auto& t : raw.entries) t.value *= 1.0 - a;
  for (State x = 0; x < raw.n; ++x) raw.entries.push_back({x, x, a});
  // Merge diagonal duplicates.
  std::sort(raw.entries.begin(), raw.entries.end(),
            [](const Triplet& l, const Triplet& r) { return std::tie(l.row, l.col) < std::tie(r.row, r.col); });
  std::vector<Triplet> merged;
  for (const auto& t : raw.entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  raw.entries = std::move(merged);
  return raw;
}

void require_size(const FamilySpec& spec, std::size_t minimum) {
  if (spec.size < minimum)
    throw LabError(ErrorCode::InvalidParams, std::string(family_name(spec.family)) + " needs size >= " +
                                                 std::to_string(minimum));
}

RawMatrix cycle_matrix(std::size_t n) {
  RawMatrix raw;
  raw.n = n;
  if (n == 2) {
    raw.entries = {{0, 1, 1.0}, {1, 0, 1.0}};
    return raw;
  }
  for (State x = 0; x < n; ++x) {
    raw.entries.push_back({x, (x + 1) % n, 0.5});
    raw.entries.push_back({x, (x + n - 1) % n, 0.5});
  }
  return raw;
}

RawMatrix complete_matrix(std::size_t n) {
  RawMatrix raw;
  raw.n = n;
  const double w = 1.0 / static_cast<double>(n - 1);
  for (State x = 0; x < n; ++x)
    for (State y = 0; y < n; ++y)
      if (x != y) raw.entries.push_back({x, y, w});
  return raw;
}

RawMatrix srw_matrix(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<State>> adj(n);
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw LabError(ErrorCode::InvalidParams, "edge endpoint out of range");
    if (u == v) throw LabError(ErrorCode::InvalidParams, "self-loop at " + std::to_string(u));
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      throw LabError(ErrorCode::InvalidParams,
                     "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  RawMatrix raw;
  raw.n = n;
  for (State x = 0; x < n; ++x) {
    if (adj[x].empty()) throw LabError(ErrorCode::NotIrreducible, "isolated vertex " + std::to_string(x));
    const double w = 1.0 / static_cast<double>(adj[x].size());
    for (State y : adj[x]) raw.entries.push_back({x, y, w});
  }
  return raw;
}

bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<State>> adj(n);
  for (auto [u, v] : edges) adj[u].push_back(v), adj[v].push_back(u);
  std::vector<char> seen(n, 0);
  std::vector<State> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const State x = stack.back();
    stack.pop_back();
    for (State y : adj[x])
      if (!seen[y]) seen[y] = 1, ++count, stack.push_back(y);
  }
  return count == n;
}

std::vector<Edge> configuration_model(std::size_t n, unsigned d, FamilyRng& rng) {
  std::vector<State> stubs;
  stubs.reserve(n * d);
  for (State x = 0; x < n; ++x)
    for (unsigned k = 0; k < d; ++k) stubs.push_back(x);

  for (int round = 0; round < kMaxRejectionRounds; ++round) {
    rng.shuffle(stubs);
    std::vector<Edge> edges;
    std::set<Edge> seen;
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      const State u = std::min(stubs[i], stubs[i + 1]);
      const State v = std::max(stubs[i], stubs[i + 1]);
      simple = u != v && seen.insert({u, v}).second;
      edges.push_back({u, v});
    }
    if (simple && connected(n, edges)) return edges;
  }
  throw LabError(ErrorCode::GenerationFailed, "configuration model exceeded " +
                                                  std::to_string(kMaxRejectionRounds) + " rejection rounds");
}

RawMatrix random_symmetric_matrix(std::size_t n, double density, FamilyRng& rng) {
  // A random spanning tree guarantees connectivity; other pairs (and
  // self-loops) join the support independently with probability `density`.
  std::vector<State> order(n);
  for (State x = 0; x < n; ++x) order[x] = x;
  rng.shuffle(order);
  std::set<Edge> support;
  for (std::size_t i = 1; i < n; ++i) {
    const State u = order[i], v = order[rng.below(i)];
    support.insert({std::min(u, v), std::max(u, v)});
  }
  for (State x = 0; x < n; ++x)
    for (State y = x; y < n; ++y)
      if (!support.contains({x, y}) && rng.unit() < density) support.insert({x, y});

  std::vector<std::vector<std::pair<State, double>>> rows(n);
  for (auto [u, v] : support) {
    rows[u].push_back({v, 0.05 + 0.95 * rng.unit()});
    if (u != v) rows[v].push_back({u, 0.05 + 0.95 * rng.unit()});
  }
  RawMatrix raw;
  raw.n = n;
  for (State x = 0; x < n; ++x) {
    double sum = 0.0;
    for (const auto& [y, w] : rows[x]) sum += w;
    for (const auto& [y, w] : rows[x]) raw.entries.push_back({x, y, w / sum});
  }
  return raw;
}

}  // namespace

std::string_view family_name(FamilyId id) { return kFamilyNames[static_cast<std::size_t>(id)]; }

std::optional<FamilyId> parse_family_name(std::string_view name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
    if (kFamilyNames[i] == name) return static_cast<FamilyId>(i);
  return std::nullopt;
}

std::uint64_t FamilyRng::next() { return engine_(); }

std::uint64_t FamilyRng::below(std::uint64_t bound) {
  if (bound == 0) throw LabError(ErrorCode::InvalidParams, "empty range");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double FamilyRng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Chain simple_random_walk(std::size_t n, const std::vector<Edge>& edges, double laziness) {
  return validate_chain(make_lazy(srw_matrix(n, edges), laziness));
}

Chain generate(const FamilySpec& spec) {
  const double a = laziness_of(spec);
  switch (spec.family) {
    case FamilyId::LazyTwoState:
      return validate_chain(make_lazy(cycle_matrix(2), a));
    case FamilyId::Cycle:
      require_size(spec, 2);
      return validate_chain(make_lazy(cycle_matrix(spec.size), a));
    case FamilyId::Complete:
      require_size(spec, 2);
      return validate_chain(make_lazy(complete_matrix(spec.size), a));
    case FamilyId::Hypercube: {
      require_size(spec, 1);
      if (spec.size > 24) throw LabError(ErrorCode::InvalidParams, "hypercube dimension above 24");
      const auto d = static_cast<unsigned>(spec.size);
      const std::size_t n = std::size_t{1} << d;
      std::vector<Edge> edges;
      for (State x = 0; x < n; ++x)
        for (unsigned i = 0; i < d; ++i)
          if (!(x >> i & 1)) edges.push_back({x, x | (State{1} << i)});
      return simple_random_walk(n, edges, a).with_hypercube_form({d, a});
    }
    case FamilyId::RandomRegular: {
      require_size(spec, 2);
      if (spec.degree < 3) throw LabError(ErrorCode::InvalidParams, "random-regular needs degree >= 3");
      if (spec.degree >= spec.size)
        throw LabError(ErrorCode::InvalidParams, "random-regular needs degree < size");
      if ((spec.size * spec.degree) % 2 != 0)
        throw LabError(ErrorCode::InvalidParams, "random-regular needs size * degree even");
      FamilyRng rng(spec.seed);
      return simple_random_walk(spec.size, configuration_model(spec.size, spec.degree, rng), a);
    }
    case FamilyId::RandomSymmetric: {
      require_size(spec, 2);
      if (!(spec.density >= 0.0 && spec.density <= 1.0))
        throw LabError(ErrorCode::InvalidParams, "density must lie in [0,1]");
      FamilyRng rng(spec.seed);
      return validate_chain(make_lazy(random_symmetric_matrix(spec.size, spec.density, rng), a));
    }
    case FamilyId::SrwFromEdgelist: {
      std::size_t n = spec.size;
      for (auto [u, v] : spec.edges) n = std::max({n, u + 1, v + 1});
      if (n < 2) throw LabError(ErrorCode::InvalidParams, "edge list needs at least 2 vertices");
      return simple_random_walk(n, spec.edges, a);
    }
  }
  throw LabError(ErrorCode::InvalidParams, "unknown family");
}

std::vector<Chain> family_sequence(const FamilySpec& base, const std::vector<std::size_t>& sizes) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw LabError(ErrorCode::InvalidParams, "sizes must be strictly increasing");
  std::vector<Chain> chains;
  chains.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    FamilySpec spec = base;
    spec.size = sizes[i];
    spec.seed = base.seed + i;
    chains.push_back(generate(spec));
  }
  return chains;
}

std::vector<Edge> parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0, v = 0;
    if (!(fields >> u)) continue;
    std::string extra;
    if (!(fields >> v) || (fields >> extra) || u < 0 || v < 0)
      throw LabError(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected `u v`");
    const Edge e{static_cast<State>(std::min(u, v)), static_cast<State>(std::max(u, v))};
    if (e.first == e.second)
      throw LabError(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": self-loop");
    if (!seen.insert(e).second)
      throw LabError(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": duplicate edge");
    edges.push_back({static_cast<State>(u), static_cast<State>(v)});
  }
  return edges;
}

}  // namespace cutofflab
