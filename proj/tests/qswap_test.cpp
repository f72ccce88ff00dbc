#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tqtda/corpus.hpp"
#include "tqtda/qswap.hpp"

using namespace tqtda;

namespace {

Spectrum with_vectors(const Eigen::MatrixXd& L) { return spectrum(L, true); }

Spectrum diag_spectrum(std::vector<double> eigs) {
  const auto m = static_cast<Eigen::Index>(eigs.size());
  Eigen::MatrixXd L = Eigen::Map<Eigen::VectorXd>(eigs.data(), m).asDiagonal();
  return with_vectors(L);
}

StateVector random_state(std::mt19937_64& gen, int qubits) {
  std::normal_distribution<double> nd;
  StateVector s;
  s.qubits = qubits;
  s.amplitudes.resize(std::size_t{1} << qubits);
  for (auto& a : s.amplitudes) a = {nd(gen), nd(gen)};
  const double n = s.norm();
  for (auto& a : s.amplitudes) a /= n;
  return s;
}

}  // namespace

TEST(Purification, BellStateAtInfiniteTemperature) {
  auto s = diag_spectrum({0.0, 1.0});
  auto psi = purification_state(s, 0.0);
  ASSERT_EQ(psi.qubits, 2);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(psi.amplitudes[0]), h, 1e-15);
  EXPECT_NEAR(std::abs(psi.amplitudes[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(psi.amplitudes[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(psi.amplitudes[3]), h, 1e-15);
}

TEST(Purification, PadsUnusedBasisStates) {
  auto s = with_vectors(combinatorial_laplacian(corpus::hollow_triangle(), 1).matrix);
  auto psi = purification_state(s, 1.3);
  ASSERT_EQ(psi.qubits, 4);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      if (a == 3 || b == 3) {
        EXPECT_EQ(psi.amplitudes[a * 4 + b], cplx{});
      }
}

TEST(Purification, ReducedStateIsGibbs) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 2 + t % 5;
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<double> eigs(m);
    for (auto& x : eigs) x = u(gen);
    auto L = oracle::psd_with_spectrum(eigs, gen);
    auto s = with_vectors(L);
    auto psi = purification_state(s, 0.7);
    auto rho = reduced_density(psi, system_register(psi));
    auto g = oracle::gibbs_matrix(L, 0.7);
    const auto mm = static_cast<Eigen::Index>(m);
    EXPECT_LT((rho.topLeftCorner(mm, mm).real() - g).norm(), 1e-10);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  }
}

TEST(SwapTest, ProductStatesGiveOverlap) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 10; ++t) {
    auto a = random_state(gen, 3), b = random_state(gen, 3);
    std::vector<int> reg{0, 1, 2};
    auto p = swap_test_circuit(a, b, reg, reg);
    cplx ip{};
    for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    EXPECT_NEAR(p.p0, 0.5 * (1.0 + std::norm(ip)), 1e-12);
    EXPECT_NEAR(p.p0 + p.p1, 1.0, 1e-12);
  }
}

TEST(SwapTest, MaximallyMixedQubits) {
  // rho = I/2 on one system qubit: P0 = (1 + 1/2) / 2
  auto psi = purification_state(diag_spectrum({0.0, 0.0}), 1.0);
  auto reg = system_register(psi);
  auto p = swap_test_circuit(psi, psi, reg, reg);
  EXPECT_NEAR(p.p0, 0.75, 1e-14);
  EXPECT_NEAR(p.p0 - p.p1, 0.5, 1e-14);
}

TEST(SwapTest, CircuitAndContractionAgree) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + t % 7;
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::vector<double> eigs(m);
    for (auto& x : eigs) x = (t % 3 == 0 && &x == &eigs[0]) ? 0.0 : u(gen);
    auto s = with_vectors(oracle::psd_with_spectrum(eigs, gen));
    const double beta = 0.25 * (t % 8);
    auto psi = purification_state(s, beta);
    auto reg = system_register(psi);
    auto c = swap_test_circuit(psi, psi, reg, reg);
    auto k = swap_test_contracted(psi, psi, reg, reg);
    EXPECT_NEAR(c.p0, k.p0, 1e-12);
    EXPECT_NEAR(c.p0 - c.p1, purity(s, beta), 1e-10);
  }
}

TEST(SwapTest, LargeRegistersUseContraction) {
  // 35 triangles of the full 6-simplex: 6 system qubits, 25 in the circuit
  auto cx = complex_from_maximal(7, {{0, 1, 2, 3, 4, 5, 6}});
  auto s = with_vectors(combinatorial_laplacian(cx, 2).matrix);
  auto psi = purification_state(s, 0.4);
  ASSERT_EQ(psi.qubits, 12);
  ASSERT_GT(1 + 2 * psi.qubits, kMaxCircuitQubits);
  auto reg = system_register(psi);
  auto p = swap_test_probabilities(psi, psi, reg, reg);
  EXPECT_NEAR(p.p0 - p.p1, purity(s, 0.4), 1e-10);
}

TEST(SwapTest, RegisterChecks) {
  StateVector a{1, {1.0, 0.0}};
  std::vector<int> r0{0}, r1{1}, r01{0, 1};
  EXPECT_THROW(swap_test_circuit(a, a, r0, r01), InvalidInput);
  EXPECT_THROW(swap_test_circuit(a, a, r1, r1), InvalidInput);
}

TEST(Sampling, StderrFromCounts) {
  auto r = swap_result_from_counts(750, 1000, 0.75);
  EXPECT_EQ(r.count1, 250);
  EXPECT_DOUBLE_EQ(r.purity_estimate, 0.5);
  EXPECT_NEAR(r.std_error, 0.0274, 1e-4);
  EXPECT_THROW(swap_result_from_counts(5, 4, 0.5), InvalidInput);
  EXPECT_THROW(swap_test_sample(0.5, 0, 1), InvalidInput);
}

TEST(Sampling, DeterministicPerSeed) {
  auto a = swap_test_sample(0.8, 100000, 9);
  auto b = swap_test_sample(0.8, 100000, 9);
  EXPECT_EQ(a.count0, b.count0);
  EXPECT_NE(a.count0, swap_test_sample(0.8, 100000, 10).count0);
}

TEST(Sampling, VarianceMatchesBinomial) {
  const double p0 = 0.7;
  const std::int64_t shots = 2000;
  const int trials = 2000;
  double mean = 0.0, sq = 0.0;
  std::vector<double> est(trials);
  for (int t = 0; t < trials; ++t) {
    est[static_cast<std::size_t>(t)] = swap_test_sample(p0, shots, 1000 + static_cast<std::uint64_t>(t)).purity_estimate;
    mean += est[static_cast<std::size_t>(t)];
  }
  mean /= trials;
  for (double e : est) sq += (e - mean) * (e - mean);
  const double var = sq / (trials - 1);
  const double expected = 4.0 * p0 * (1.0 - p0) / static_cast<double>(shots);
  EXPECT_NEAR(mean, 2.0 * p0 - 1.0, 4.0 * std::sqrt(expected / trials));
  EXPECT_NEAR(var / expected, 1.0, 0.2);
}

TEST(BettiSwap, HollowTriangle) {
  auto s = with_vectors(combinatorial_laplacian(corpus::hollow_triangle(), 1).matrix);
  auto r = betti_swap(s, 4.0 * beta_threshold(s), 1000000, 7);
  EXPECT_EQ(r.estimate.betti_floor, 1u);
  EXPECT_TRUE(r.stable);
  EXPECT_NEAR(r.exact.p0 - r.exact.p1, purity(s, r.estimate.beta), 1e-10);
  EXPECT_EQ(r.test.count0 + r.test.count1, 1000000);
}

TEST(BettiSwap, TrivialKernelAndLowShots) {
  auto s = with_vectors(combinatorial_laplacian(corpus::filled_triangle(), 1).matrix);
  auto r = betti_swap(s, 4.0 * beta_threshold(s), 100000, 3);
  EXPECT_EQ(r.estimate.betti_floor, 0u);
  EXPECT_TRUE(r.estimate.trivial_kernel);

  auto one = betti_swap(s, 1.0, 1, 3);
  EXPECT_FALSE(one.stable);
  EXPECT_EQ(betti_swap(s, 1.0, 5000, 11).test.count0, betti_swap(s, 1.0, 5000, 11).test.count0);
}

TEST(BettiSwap, StableFloorsAreCorrectAtTheBoundary) {
  // b_0 = 2: the converged purity sits just below 1/2, right on a floor boundary
  auto s = with_vectors(combinatorial_laplacian(corpus::two_components(), 0).matrix);
  const double beta = 4.0 * beta_threshold(s);
  // almost every run straddles the boundary and must say so
  int stable = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto r = betti_swap(s, beta, 10000, seed);
    if (!r.stable) continue;
    ++stable;
    EXPECT_EQ(r.estimate.betti_floor, 2u) << "seed " << seed;
  }
  EXPECT_LT(stable, 10);
  SwapOptions bad;
  bad.stability_band = 0.0;
  EXPECT_THROW(betti_swap(s, beta, 100, 1, bad), InvalidInput);
}
