#include "cutofflab/model.hpp"

#include <utility>

namespace cutofflab {

ChainModel build_model(Chain chain, std::size_t dense_limit) {
  ChainMetrics metrics = chain_metrics(chain, dense_limit);
  SpectralSummary spectral = spectral_summary(chain, metrics, dense_limit);
  return ChainModel{std::move(chain), std::move(metrics), std::move(spectral)};
}

}  // namespace cutofflab
