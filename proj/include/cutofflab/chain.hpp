#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cutofflab {

using State = std::size_t;

struct Triplet {
  State row;
  State col;
  double value;
};

/// Unvalidated square matrix in coordinate form. Entries not listed are zero.
struct RawMatrix {
  std::size_t n = 0;
  std::vector<Triplet> entries;
  std::vector<std::string> labels;

  static RawMatrix from_dense(const std::vector<std::vector<double>>& rows);
};

struct ValidateOptions {
  double row_sum_tol = 1e-12;
  /// When set, rows whose sum is off by at most renormalize_limit are
  /// rescaled instead of rejected.
  bool renormalize = false;
  double renormalize_limit = 1e-9;
};

/// The hypercube family has a closed-form heat kernel (independent
/// coordinates); generators tag chains that carry it.
struct HypercubeForm {
  unsigned dimension = 0;
  double laziness = 0.0;
};

/// A validated stochastic matrix with symmetric, connected support.
/// Stored row-compressed; immutable after construction.
class Chain {
 public:
  struct Entry {
    State col;
    double value;
  };

  std::size_t size() const { return row_start_.size() - 1; }
  std::size_t nonzeros() const { return entries_.size(); }

  std::span<const Entry> row(State x) const {
    return {entries_.data() + row_start_[x], entries_.data() + row_start_[x + 1]};
  }

  /// K(x, y); zero outside the support.
  double operator()(State x, State y) const;

  Eigen::MatrixXd dense() const;

  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<HypercubeForm>& hypercube_form() const { return hypercube_; }

  Chain with_hypercube_form(HypercubeForm form) const;

  /// Throws LabError (RowSumError, NegativeEntry, NonFiniteValue,
  /// AsymmetricSupport, NotIrreducible, InvalidParams).
  friend Chain validate_chain(const RawMatrix& raw, const ValidateOptions& options);

 private:
  Chain() = default;

  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
  std::vector<std::string> labels_;
  std::optional<HypercubeForm> hypercube_;
};

Chain validate_chain(const RawMatrix& raw, const ValidateOptions& options = {});
Chain validate_chain(const std::vector<std::vector<double>>& rows,
                     const ValidateOptions& options = {});

inline constexpr std::size_t kDefaultDenseLimit = 4096;

/// Combinatorial metrics of the support graph.
class ChainMetrics {
 public:
  double delta = 0.0;
  unsigned diameter = 0;
  /// 3 log(e / delta), the Lipschitz constant of log-heat-kernel ratios.
  double lip_constant_c = 0.0;

  /// Graph distance from the stored matrix. Only kept for chains within the
  /// dense limit; above it use bfs_distances (throws InvalidParams).
  unsigned distance(State x, State y) const;
  bool has_distance_matrix() const { return !dist_.empty(); }

  friend ChainMetrics chain_metrics(const Chain& chain, std::size_t dense_limit);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

ChainMetrics chain_metrics(const Chain& chain, std::size_t dense_limit = kDefaultDenseLimit);

/// Breadth-first distances from one state over the support graph.
std::vector<std::uint32_t> bfs_distances(const Chain& chain, State origin);

/// sup_{x != y} |f(x) - f(y)| / dist(x, y), evaluated over support edges.
/// Throws NonFiniteValue if f has non-finite entries.
double lipschitz_norm(const Chain& chain, std::span<const double> f);

}  // namespace cutofflab
