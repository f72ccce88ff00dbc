#pragma once

// Statevector simulation of the purity test: canonical purifications of the
// Gibbs state and the ancilla SWAP test (H, controlled-SWAP, H).
//
// Qubit 0 is the most significant bit of a basis index. The k-simplex with
// lexicographic rank r in S_k is basis state |r>; indices >= m stay empty.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"
#include "tqtda/error.hpp"
#include "tqtda/homology.hpp"
#include "tqtda/thermal.hpp"

namespace tqtda {

using cplx = std::complex<double>;

struct StateVector {
  int qubits = 0;
  std::vector<cplx> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  double norm() const {
    double acc = 0.0;
    for (auto a : amplitudes) acc += std::norm(a);
    return std::sqrt(acc);
  }
};

/// Smallest n with 2^n >= m.
inline int qubits_for(std::size_t m) {
  int n = 0;
  while ((std::size_t{1} << n) < m) ++n;
  return n;
}

/// Sum_i sqrt(e^{-beta E_i}/Z) |psi_i>|psi_i> on 2n qubits. The first n
/// qubits are the system register, the last n its mirror.
inline StateVector purification_state(const Spectrum& s, double beta) {
  if (!s.eigenvectors) throw InvalidInput("purification needs eigenvectors");
  const auto m = s.dim();
  const int n = qubits_for(m);
  const std::size_t dim = std::size_t{1} << n;
  const auto& vecs = *s.eigenvectors;
  const double lmin = s.lambda_min();
  std::vector<double> w(m);
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) z += (w[i] = std::exp(-beta * (s.eigenvalues(static_cast<Eigen::Index>(i)) - lmin)));
  StateVector psi;
  psi.qubits = 2 * n;
  psi.amplitudes.assign(dim * dim, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < m; ++i) {
    const double c = std::sqrt(w[i] / z);
    const auto col = vecs.col(static_cast<Eigen::Index>(i));
    for (std::size_t a = 0; a < m; ++a) {
      const double ca = c * col(static_cast<Eigen::Index>(a));
      if (ca == 0.0) continue;
      for (std::size_t b = 0; b < m; ++b) psi.amplitudes[a * dim + b] += ca * col(static_cast<Eigen::Index>(b));
    }
  }
  return psi;
}

/// Reduced density matrix on `keep` (qubit indices, in the given order).
inline Eigen::MatrixXcd reduced_density(const StateVector& psi, std::span<const int> keep) {
  const int q = psi.qubits;
  std::vector<int> rest;
  for (int i = 0; i < q; ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) rest.push_back(i);
  const std::size_t dk = std::size_t{1} << keep.size();
  const std::size_t dr = std::size_t{1} << rest.size();
  auto bit = [q](std::size_t idx, int qubit) { return (idx >> (q - 1 - qubit)) & 1U; };
  // psi reshaped to (keep x rest)
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dr));
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    std::size_t r = 0, c = 0;
    for (int k : keep) r = (r << 1) | bit(idx, k);
    for (int k : rest) c = (c << 1) | bit(idx, k);
    mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi.amplitudes[idx];
  }
  return mat * mat.adjoint();
}

struct SwapProbabilities {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// Joint registers up to this many qubits (ancilla included) are simulated
/// gate by gate; larger ones contract the reduced states instead, which
/// yields the same Born probabilities.
inline constexpr int kMaxCircuitQubits = 21;

namespace detail {

inline void check_registers(const StateVector& a, const StateVector& b, std::span<const int> qa,
                            std::span<const int> qb) {
  if (qa.size() != qb.size()) throw InvalidInput("swap registers have mismatched sizes");
  for (int x : qa)
    if (x < 0 || x >= a.qubits) throw InvalidInput("swap register index out of range for state A");
  for (int x : qb)
    if (x < 0 || x >= b.qubits) throw InvalidInput("swap register index out of range for state B");
  if (a.size() != (std::size_t{1} << a.qubits) || b.size() != (std::size_t{1} << b.qubits))
    throw InvalidInput("state vector length does not match its qubit count");
}

inline void hadamard(std::vector<cplx>& v, int qubits, int target) {
  const std::size_t stride = std::size_t{1} << (qubits - 1 - target);
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i & stride) continue;
    const cplx x = v[i], y = v[i | stride];
    v[i] = h * (x + y);
    v[i | stride] = h * (x - y);
  }
}

inline void controlled_swap(std::vector<cplx>& v, int qubits, int control, int t1, int t2) {
  const std::size_t c = std::size_t{1} << (qubits - 1 - control);
  const std::size_t m1 = std::size_t{1} << (qubits - 1 - t1);
  const std::size_t m2 = std::size_t{1} << (qubits - 1 - t2);
  for (std::size_t i = 0; i < v.size(); ++i)
    if ((i & c) && (i & m1) && !(i & m2)) std::swap(v[i], v[(i & ~m1) | m2]);
}

}  // namespace detail

/// Gate-level SWAP test on |0>_anc |a> |b>: H, one controlled-SWAP per
/// register pair, H. Returns ancilla outcome probabilities.
inline SwapProbabilities swap_test_circuit(const StateVector& a, const StateVector& b, std::span<const int> qa,
                                           std::span<const int> qb) {
  detail::check_registers(a, b, qa, qb);
  const int total = 1 + a.qubits + b.qubits;
  std::vector<cplx> v(std::size_t{1} << total, cplx{0.0, 0.0});
  // ancilla is qubit 0, then A, then B
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.amplitudes[i] == cplx{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) v[(i << b.qubits) | j] = a.amplitudes[i] * b.amplitudes[j];
  }
  detail::hadamard(v, total, 0);
  for (std::size_t r = 0; r < qa.size(); ++r) detail::controlled_swap(v, total, 0, 1 + qa[r], 1 + a.qubits + qb[r]);
  detail::hadamard(v, total, 0);
  SwapProbabilities p;
  const std::size_t half = v.size() / 2;
  for (std::size_t i = 0; i < half; ++i) p.p0 += std::norm(v[i]);
  for (std::size_t i = half; i < v.size(); ++i) p.p1 += std::norm(v[i]);
  return p;
}

/// Same probabilities from P0 - P1 = Re Tr{rho_A rho_B} on the swapped registers.
inline SwapProbabilities swap_test_contracted(const StateVector& a, const StateVector& b, std::span<const int> qa,
                                              std::span<const int> qb) {
  detail::check_registers(a, b, qa, qb);
  auto ra = reduced_density(a, qa);
  auto rb = reduced_density(b, qb);
  const double overlap = (ra.cwiseProduct(rb.transpose())).sum().real();
  return {0.5 * (1.0 + overlap), 0.5 * (1.0 - overlap)};
}

inline SwapProbabilities swap_test_probabilities(const StateVector& a, const StateVector& b,
                                                 std::span<const int> qa, std::span<const int> qb) {
  if (1 + a.qubits + b.qubits <= kMaxCircuitQubits) return swap_test_circuit(a, b, qa, qb);
  return swap_test_contracted(a, b, qa, qb);
}

/// First n qubits of a 2n-qubit purification.
inline std::vector<int> system_register(const StateVector& purification) {
  std::vector<int> q(static_cast<std::size_t>(purification.qubits / 2));
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = static_cast<int>(i);
  return q;
}

struct SwapTestResult {
  std::int64_t shots = 0;
  std::int64_t count0 = 0;
  std::int64_t count1 = 0;
  double purity_estimate = 0.0;
  double std_error = 0.0;
};

/// stderr of (count0 - count1)/shots for a binomial with success probability p0.
inline double swap_stderr(double p0, std::int64_t shots) {
  return 2.0 * std::sqrt(std::max(0.0, p0 * (1.0 - p0)) / static_cast<double>(shots));
}

inline SwapTestResult swap_result_from_counts(std::int64_t count0, std::int64_t shots, double p0) {
  if (shots < 1 || count0 < 0 || count0 > shots) throw InvalidInput("invalid swap-test counts");
  SwapTestResult r;
  r.shots = shots;
  r.count0 = count0;
  r.count1 = shots - count0;
  r.purity_estimate = static_cast<double>(r.count0 - r.count1) / static_cast<double>(shots);
  r.std_error = swap_stderr(p0, shots);
  return r;
}

/// Binomial draw of the ancilla outcomes from exact Born probabilities.
inline SwapTestResult swap_test_sample(double p0, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidInput("shots must be >= 1");
  if (!(p0 >= -1e-12 && p0 <= 1.0 + 1e-12)) throw InvalidInput("P0 must lie in [0, 1]");
  p0 = std::clamp(p0, 0.0, 1.0);
  std::mt19937_64 gen(seed);
  std::binomial_distribution<std::int64_t> draw(shots, p0);
  return swap_result_from_counts(draw(gen), shots, p0);
}

struct SwapBetti {
  ThermalEstimate estimate;  // purity fields come from the sampled estimate
  SwapTestResult test;
  SwapProbabilities exact;
  bool stable = false;  // floor unchanged across the stability band
};

struct SwapOptions {
  ThermalOptions thermal;
  /// Half-width of the stability band in units of stderr. Near convergence
  /// the true inverse purity sits just above b_k, so a band of w stderr
  /// misreports a wrong floor as stable with probability P(Z > w).
  double stability_band = 4.0;
};

/// Purification -> SWAP test -> binomial sampling -> floored inverse purity.
inline SwapBetti betti_swap(const Spectrum& s, double beta, std::int64_t shots, std::uint64_t seed,
                            const SwapOptions& opt = {}) {
  if (!(beta >= 0.0)) throw InvalidInput("beta must be non-negative");
  if (!(opt.stability_band > 0.0)) throw InvalidInput("stability band must be positive");
  const auto m = static_cast<double>(s.dim());
  auto psi = purification_state(s, beta);
  auto reg = system_register(psi);
  SwapBetti out;
  out.exact = swap_test_probabilities(psi, psi, reg, reg);
  out.test = swap_test_sample(out.exact.p0, shots, seed);
  const auto clamp_purity = [m](double p) { return std::clamp(p, 1.0 / m, 1.0); };
  const auto terms = partition_terms(s, beta);
  const double p = clamp_purity(out.test.purity_estimate);
  out.estimate = make_estimate(s, beta, p, terms.z_norm, opt.thermal);
  out.estimate.purity = out.test.purity_estimate;
  const double g = opt.thermal.guard;
  const double band = opt.stability_band * out.test.std_error;
  const double lo = std::floor(1.0 / clamp_purity(out.test.purity_estimate + band) + g);
  const double hi = std::floor(1.0 / clamp_purity(out.test.purity_estimate - band) + g);
  // the trivial-kernel override reads z_norm, not the sampled purity
  out.stable = out.estimate.trivial_kernel || out.test.std_error == 0.0 || lo == hi;
  if (out.test.shots < 2) out.stable = false;
  return out;
}

inline nlohmann::json to_json(const SwapBetti& r) {
  return {{"beta", r.estimate.beta},
          {"shots", r.test.shots},
          {"count0", r.test.count0},
          {"count1", r.test.count1},
          {"purity_estimate", r.test.purity_estimate},
          {"stderr", r.test.std_error},
          {"betti_floor", r.estimate.betti_floor},
          {"stable", r.stable},
          {"p0_exact", r.exact.p0},
          {"p1_exact", r.exact.p1},
          {"inverse_purity", r.estimate.inverse_purity},
          {"z_norm", r.estimate.z_norm},
          {"converged", r.estimate.converged},
          {"trivial_kernel", r.estimate.trivial_kernel}};
}

}  // namespace tqtda
