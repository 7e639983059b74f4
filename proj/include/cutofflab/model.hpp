#pragma once

#include <cstddef>

#include "cutofflab/chain.hpp"
#include "cutofflab/spectral.hpp"

namespace cutofflab {

/// A chain bundled with everything the statistics and bound checks need:
/// support metrics, stationary distribution, and spectral constants.
/// Immutable once built and safe to share across threads.
struct ChainModel {
  Chain chain;
  ChainMetrics metrics;
  SpectralSummary spectral;

  const Distribution& pi() const { return spectral.pi; }
  std::size_t size() const { return chain.size(); }
};

ChainModel build_model(Chain chain, std::size_t dense_limit = kDefaultDenseLimit);

}  // namespace cutofflab
