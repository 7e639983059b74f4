#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cutofflab/chain.hpp"

namespace cutofflab {

enum class FamilyId {
  LazyTwoState,
  Cycle,
  Complete,
  Hypercube,
  RandomRegular,
  RandomSymmetric,
  SrwFromEdgelist,
};

std::string_view family_name(FamilyId id);
std::optional<FamilyId> parse_family_name(std::string_view name);

using Edge = std::pair<State, State>;

/// What to generate. `size` is the state count, except for the hypercube
/// where it is the dimension; it is ignored by lazy-two-state and
/// srw-from-edgelist.
struct FamilySpec {
  FamilyId family = FamilyId::Cycle;
  std::size_t size = 0;
  /// Holding probability mixed in as (1 - a) K + a I. Unset means 0, or 1/2
  /// for lazy-two-state.
  std::optional<double> laziness;
  unsigned degree = 3;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::vector<Edge> edges;
};

/// Deterministic source of randomness for the random families:
/// std::mt19937_64 (a fully specified algorithm) with explicit integer and
/// real mappings, so reruns agree across standard libraries.
class FamilyRng {
 public:
  explicit FamilyRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next();
  /// Uniform on {0, ..., bound - 1}, by rejection of the biased low range.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform on [0, 1) with 53 random bits.
  double unit();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Throws InvalidParams for bad sizes/parameters and GenerationFailed when
/// the configuration model keeps producing non-simple or disconnected graphs.
Chain generate(const FamilySpec& spec);

/// One chain per size; random families use seed + index for member index.
std::vector<Chain> family_sequence(const FamilySpec& base, const std::vector<std::size_t>& sizes);

/// Simple random walk K(x,y) = 1/deg(x) on an undirected simple graph.
Chain simple_random_walk(std::size_t n, const std::vector<Edge>& edges, double laziness = 0.0);

/// Edges as `u v` lines, 0-indexed; duplicates and self-loops rejected.
std::vector<Edge> parse_edge_list(std::string_view text);

}  // namespace cutofflab
