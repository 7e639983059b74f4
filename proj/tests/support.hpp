#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cutofflab/chain.hpp"
#include "cutofflab/families.hpp"
#include "cutofflab/heat_kernel.hpp"
#include "cutofflab/spectral.hpp"

namespace support {

using cutofflab::Chain;
using cutofflab::State;

inline Chain family(cutofflab::FamilyId id, std::size_t size, double laziness = 0.0, std::uint64_t seed = 0) {
  cutofflab::FamilySpec spec;
  spec.family = id;
  spec.size = size;
  spec.laziness = laziness;
  spec.seed = seed;
  return cutofflab::generate(spec);
}

inline Chain lazy_two_state() { return cutofflab::validate_chain({{0.5, 0.5}, {0.5, 0.5}}); }
inline Chain flip() { return cutofflab::validate_chain({{0.0, 1.0}, {1.0, 0.0}}); }
inline Chain cycle(std::size_t n, double a = 0.0) { return family(cutofflab::FamilyId::Cycle, n, a); }
inline Chain complete(std::size_t n) { return family(cutofflab::FamilyId::Complete, n); }

/// Seeded random chain with symmetric support and non-reversible weights.
inline Chain random_chain(std::uint64_t seed, std::size_t n, double density = 0.4) {
  cutofflab::FamilySpec spec;
  spec.family = cutofflab::FamilyId::RandomSymmetric;
  spec.size = n;
  spec.density = density;
  spec.seed = seed;
  return cutofflab::generate(spec);
}

inline Chain random_regular(std::uint64_t seed, std::size_t n, unsigned d = 3) {
  cutofflab::FamilySpec spec;
  spec.family = cutofflab::FamilyId::RandomRegular;
  spec.size = n;
  spec.degree = d;
  spec.seed = seed;
  return cutofflab::generate(spec);
}

/// exp(t (K - I)) by scaling and squaring with Pade approximants.
inline Eigen::MatrixXd expm_oracle(const Chain& chain, double t) {
  const Eigen::MatrixXd k = chain.dense();
  const Eigen::MatrixXd q = t * (k - Eigen::MatrixXd::Identity(k.rows(), k.cols()));
  return q.exp();
}

/// P_t = D^{-1/2} V exp(t (Lambda - I)) V^T D^{1/2} for reversible chains.
inline Eigen::MatrixXd eigen_heat_oracle(const Chain& chain, const std::vector<double>& pi, double t) {
  const Eigen::Index n = static_cast<Eigen::Index>(chain.size());
  const Eigen::MatrixXd k = chain.dense();
  Eigen::VectorXd sq(n);
  for (Eigen::Index i = 0; i < n; ++i) sq(i) = std::sqrt(pi[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd s = sq.asDiagonal() * k * sq.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  const Eigen::VectorXd decay = ((es.eigenvalues().array() - 1.0) * t).exp().matrix();
  const Eigen::MatrixXd ps = es.eigenvectors() * decay.asDiagonal() * es.eigenvectors().transpose();
  return sq.cwiseInverse().asDiagonal() * ps * sq.asDiagonal();
}

/// Coefficients c[0..n] of det(x I - A) = sum c[k] x^k by Faddeev-LeVerrier.
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * Eigen::MatrixXd::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

inline double polyval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

/// Second-largest eigenvalue of (K + K*)/2 from the roots of its
/// characteristic polynomial with the eigenvalue 1 divided out.
inline double lambda2_oracle(const Chain& chain, const std::vector<double>& pi) {
  const Eigen::Index n = static_cast<Eigen::Index>(chain.size());
  const Eigen::MatrixXd k = chain.dense();
  Eigen::MatrixXd adj(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      adj(x, y) = pi[static_cast<std::size_t>(y)] * k(y, x) / pi[static_cast<std::size_t>(x)];
  const auto c = characteristic_polynomial(0.5 * (k + adj));

  std::vector<double> q(c.size() - 1);
  double carry = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    carry = c[i + 1] + carry;
    q[i] = carry;
  }
  double hi = 1.0 + 1e-9, step = 1e-5;
  double f_hi = polyval(q, hi);
  for (double lo = hi - step; lo >= -1.5; lo -= step) {
    const double f_lo = polyval(q, lo);
    if ((f_lo <= 0.0) != (f_hi <= 0.0)) {
      double a = lo, b = hi, fa = f_lo;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b), fm = polyval(q, m);
        if ((fm <= 0.0) == (fa <= 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    hi = lo;
    f_hi = f_lo;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Minimum of pi-flow(A, A^c) / min(pi(A), pi(A^c)) over every proper subset.
inline double cheeger_oracle(const Chain& chain, const std::vector<double>& pi) {
  const std::size_t n = chain.size();
  const Eigen::MatrixXd k = chain.dense();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    double mass = 0.0, flow = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (!(mask >> x & 1)) continue;
      mass += pi[x];
      for (std::size_t y = 0; y < n; ++y)
        if (!(mask >> y & 1)) flow += pi[x] * k(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    }
    best = std::min(best, flow / std::min(mass, 1.0 - mass));
  }
  return best;
}

/// dist(x, y) = min{m : K^m(x, y) > 0} by explicit matrix powers.
inline std::vector<std::vector<unsigned>> power_distances(const Chain& chain) {
  const Eigen::Index n = static_cast<Eigen::Index>(chain.size());
  const Eigen::MatrixXd k = chain.dense();
  std::vector<std::vector<unsigned>> d(chain.size(), std::vector<unsigned>(chain.size(), ~0u));
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (unsigned m = 0; m <= chain.size(); ++m) {
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        if (power(x, y) > 0.0 && d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] == ~0u)
          d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = m;
    power = power * k;
  }
  return d;
}

inline std::vector<double> row_of(const Eigen::MatrixXd& m, State x) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index y = 0; y < m.cols(); ++y) out[static_cast<std::size_t>(y)] = m(static_cast<Eigen::Index>(x), y);
  return out;
}

}  // namespace support
