#pragma once

// Dense-matrix model of the coherent Gibbs sampler: operator Fourier
// transforms of single-site Pauli jumps, Metropolis weights, the
// discriminant proxy D_beta and its top eigenvector, and an annealing path
// that tracks that eigenvector from beta = 0.
//
// Vectorisation is row-major: |a>|b> <-> X_ab, so (A (x) conj(A)) vec(X) =
// vec(A X A^dagger) and the purification of rho is vec(sqrt(rho)).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tqtda/error.hpp"
#include "tqtda/homology.hpp"
#include "tqtda/qswap.hpp"

namespace tqtda {

/// Largest D_beta dimension (4^n) handled by the dense laboratory.
inline constexpr Eigen::Index kMaxDiscriminantDim = 4096;

struct FrequencyGrid {
  int M = 0;
  double omega0 = 0.0;
  double t0 = 0.0;
  std::vector<double> omegas;  // omega0 * j, j = -M/2 .. M/2-1
  std::vector<double> times;   // t0 * j

  /// Array index of -omegas[i], with -(-M/2) wrapping onto itself.
  std::size_t negated(std::size_t i) const {
    return (static_cast<std::size_t>(M) - i) % static_cast<std::size_t>(M);
  }
};

/// Minimal covering grid: M omega0 / 2 = norm_h and omega0 t0 = 2 pi / M.
inline FrequencyGrid make_grid(double norm_h, int M) {
  if (M < 4 || M % 2 != 0) throw InvalidInput("grid size M must be even and >= 4");
  if (!(norm_h > 0.0)) throw InvalidInput("grid needs a positive Hamiltonian norm");
  FrequencyGrid g;
  g.M = M;
  g.omega0 = 2.0 * norm_h / M;
  g.t0 = 2.0 * std::numbers::pi / (M * g.omega0);
  for (int j = -M / 2; j < M / 2; ++j) {
    g.omegas.push_back(g.omega0 * j);
    g.times.push_back(g.t0 * j);
  }
  return g;
}

struct GaussianWindow {
  double sigma_t = 0.0;
  std::vector<double> weights;  // f(t) on grid.times, sum f^2 = 1
};

inline GaussianWindow gaussian_window(const FrequencyGrid& grid, double sigma_t) {
  if (!(sigma_t > 0.0)) throw InvalidInput("sigma_t must be positive");
  GaussianWindow w;
  w.sigma_t = sigma_t;
  // Normalise relative to the peak so that tiny sigma_t cannot underflow to all zeros.
  double tmin = std::numeric_limits<double>::infinity();
  for (double t : grid.times) tmin = std::min(tmin, t * t);
  double norm2 = 0.0;
  for (double t : grid.times) {
    const double f = std::exp(-(t * t - tmin) / (4.0 * sigma_t * sigma_t));
    w.weights.push_back(f);
    norm2 += f * f;
  }
  for (double& f : w.weights) f /= std::sqrt(norm2);
  return w;
}

/// Window width used when none is given; resolution tightens with beta.
inline double default_sigma_t(const FrequencyGrid& grid, double beta) {
  return std::max(1.0, beta / 4.0) * grid.t0 * grid.M / 16.0;
}

struct JumpSet {
  int qubits = 0;
  std::vector<Eigen::MatrixXcd> ops;
  std::vector<std::string> labels;

  std::size_t size() const { return ops.size(); }
};

/// X_i, Y_i, Z_i for every qubit i (qubit 0 most significant).
inline JumpSet pauli_jumps(int n) {
  if (n < 1) throw InvalidInput("jump set needs at least one qubit");
  using M2 = Eigen::Matrix2cd;
  const cplx i1{0.0, 1.0};
  M2 x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -i1, i1, 0;
  z << 1, 0, 0, -1;
  const std::pair<char, M2> paulis[] = {{'X', x}, {'Y', y}, {'Z', z}};
  JumpSet set;
  set.qubits = n;
  for (int q = 0; q < n; ++q) {
    for (const auto& [name, p] : paulis) {
      Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
      for (int r = 0; r < n; ++r) {
        Eigen::MatrixXcd f = (r == q) ? Eigen::MatrixXcd(p) : Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd next(op.rows() * 2, op.cols() * 2);
        for (Eigen::Index a = 0; a < op.rows(); ++a)
          for (Eigen::Index b = 0; b < op.cols(); ++b) next.block(a * 2, b * 2, 2, 2) = op(a, b) * f;
        op = std::move(next);
      }
      set.ops.push_back(std::move(op));
      set.labels.push_back(std::string(1, name) + std::to_string(q));
    }
  }
  return set;
}

struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

inline HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// e^{iHt} A e^{-iHt}.
inline Eigen::MatrixXcd heisenberg(const Eigen::MatrixXcd& a, const HermitianEigen& h, double t) {
  if (a.rows() != h.vectors.rows() || a.cols() != h.vectors.rows())
    throw InvalidInput("heisenberg: operator and Hamiltonian shapes differ");
  const cplx i1{0.0, 1.0};
  Eigen::VectorXcd phase = (i1 * t * h.values.cast<cplx>()).array().exp();
  return h.vectors * phase.asDiagonal() * (h.vectors.adjoint() * a * h.vectors) * phase.conjugate().asDiagonal() *
         h.vectors.adjoint();
}

inline Eigen::MatrixXcd heisenberg(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& h, double t) {
  if (h.rows() != h.cols() || a.rows() != h.rows() || a.cols() != h.cols())
    throw InvalidInput("heisenberg: operator and Hamiltonian shapes differ");
  return heisenberg(a, hermitian_eigen(h), t);
}

/// A(omega) = M^{-1/2} sum_t e^{-i omega t} f(t) A(t) for every grid
/// frequency. Evaluated in the eigenbasis of H, where the time sum reduces
/// to a scalar filter of each Bohr frequency E_a - E_b.
inline std::vector<Eigen::MatrixXcd> operator_fourier(const Eigen::MatrixXcd& a, const HermitianEigen& h,
                                                      const FrequencyGrid& grid, const GaussianWindow& window) {
  if (window.weights.size() != grid.times.size()) throw InvalidInput("window does not match grid");
  const auto d = h.values.size();
  const Eigen::MatrixXcd a_eig = h.vectors.adjoint() * a * h.vectors;
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.M));
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(grid.omegas.size());
  for (double w : grid.omegas) {
    Eigen::MatrixXcd filtered(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        const double nu = h.values(r) - h.values(c);
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < grid.times.size(); ++k)
          acc += window.weights[k] * std::polar(1.0, (nu - w) * grid.times[k]);
        filtered(r, c) = a_eig(r, c) * acc * scale;
      }
    }
    out.push_back(h.vectors * filtered * h.vectors.adjoint());
  }
  return out;
}

inline std::vector<Eigen::MatrixXcd> operator_fourier(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& h,
                                                      const FrequencyGrid& grid, const GaussianWindow& window) {
  return operator_fourier(a, hermitian_eigen(h), grid, window);
}

/// gamma(omega) = min(1, e^{beta omega}); gamma(w)/gamma(-w) = e^{beta w}.
inline double metropolis(double omega, double beta) {
  const double x = beta * omega;
  return x >= 0.0 ? 1.0 : std::exp(x);
}

inline std::vector<double> metropolis_weights(const FrequencyGrid& grid, double beta) {
  if (!(beta >= 0.0)) throw InvalidInput("beta must be non-negative");
  std::vector<double> g;
  g.reserve(grid.omegas.size());
  for (double w : grid.omegas) g.push_back(metropolis(w, beta));
  return g;
}

/// Embeds a Laplacian into 2^n dimensions (n >= 1). Unused basis states get
/// energy l_max + 10 (l_max - l_min + 1), far above the low-energy manifold.
inline Eigen::MatrixXcd pad_hamiltonian(const Eigen::MatrixXd& laplacian) {
  const auto m = laplacian.rows();
  if (m == 0 || laplacian.cols() != m) throw InvalidInput("pad_hamiltonian needs a nonempty square matrix");
  const int n = std::max(1, qubits_for(static_cast<std::size_t>(m)));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff(), lmin = es.eigenvalues().minCoeff();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  h.topLeftCorner(m, m) = laplacian.cast<cplx>();
  for (Eigen::Index i = m; i < dim; ++i) h(i, i) = lmax + 10.0 * (lmax - lmin + 1.0);
  return h;
}

/// Half-width handed to make_grid: at least ||H||, and 1.5x the Bohr span so
/// that no transition frequency reaches the aliased grid edge.
inline double frequency_cover(const HermitianEigen& h) {
  const double norm = h.values.cwiseAbs().maxCoeff();
  const double span = h.values.maxCoeff() - h.values.minCoeff();
  const double cover = std::max(norm, 1.5 * span);
  return cover > 0.0 ? cover : 1.0;
}

/// vec(sqrt(rho_beta)) = sum_i sqrt(e^{-beta E_i}/Z) |psi_i> (x) conj|psi_i>.
inline Eigen::VectorXcd canonical_purification(const HermitianEigen& h, double beta) {
  const auto d = h.values.size();
  const double emin = h.values.minCoeff();
  Eigen::VectorXd w = (-beta * (h.values.array() - emin)).exp();
  w /= w.sum();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto psi = h.vectors.col(i);
    for (Eigen::Index a = 0; a < d; ++a) v.segment(a * d, d) += std::sqrt(w(i)) * psi(a) * psi.conjugate();
  }
  return v.normalized();
}

struct DiscriminantModel {
  Eigen::MatrixXcd H;
  HermitianEigen h_eigen;
  double beta = 0.0;
  FrequencyGrid grid;
  GaussianWindow window;
  JumpSet jumps;
  std::vector<double> gammas;
  Eigen::MatrixXcd D;

  double hermiticity_error() const { return (D - D.adjoint()).cwiseAbs().maxCoeff(); }
};

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// D = (1/|A|) sum_{j, w} [ sqrt(g(w) g(-w)) A_j(w) (x) A_j(w)^*
///                          - g(-w)/2 (A_j(w)^dag A_j(w) (x) I + I (x) (A_j(w)^dag A_j(w))^*) ].
/// A(w) carries the Bohr frequency E_out - E_in, so the transition it
/// describes releases energy -w; its Metropolis weight is therefore g(-w).
/// With that pairing the fixed point is rho_beta rather than rho_{-beta}.
inline DiscriminantModel build_discriminant(const Eigen::MatrixXcd& H, const JumpSet& jumps, const FrequencyGrid& grid,
                                            const GaussianWindow& window, double beta) {
  const auto d = H.rows();
  if (H.cols() != d || d != (Eigen::Index{1} << jumps.qubits))
    throw InvalidInput("Hamiltonian dimension must be 2^n for n jump qubits");
  if (d * d > kMaxDiscriminantDim) throw InvalidInput("discriminant dimension exceeds the dense cap of 4096");
  DiscriminantModel model;
  model.H = H;
  model.h_eigen = hermitian_eigen(H);
  model.beta = beta;
  model.grid = grid;
  model.window = window;
  model.jumps = jumps;
  model.gammas = metropolis_weights(grid, beta);
  model.D = Eigen::MatrixXcd::Zero(d * d, d * d);
  Eigen::MatrixXcd decay = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& a : jumps.ops) {
    auto transformed = operator_fourier(a, model.h_eigen, grid, window);
    for (std::size_t i = 0; i < transformed.size(); ++i) {
      const double w = grid.omegas[i];
      const double cross = std::sqrt(metropolis(w, beta) * metropolis(-w, beta));
      const auto& aw = transformed[i];
      model.D += cross * detail::kron(aw, aw.conjugate());
      decay += metropolis(-w, beta) * aw.adjoint() * aw;
    }
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  model.D -= 0.5 * (detail::kron(decay, id) + detail::kron(id, decay.conjugate()));
  model.D /= static_cast<double>(jumps.size());
  return model;
}

/// Builds the model for H with the default grid cover and window width.
inline DiscriminantModel build_discriminant(const Eigen::MatrixXcd& H, int M, double beta,
                                            std::optional<double> sigma_t = std::nullopt) {
  const int n = qubits_for(static_cast<std::size_t>(H.rows()));
  auto grid = make_grid(frequency_cover(hermitian_eigen(H)), M);
  auto window = gaussian_window(grid, sigma_t.value_or(default_sigma_t(grid, beta)));
  return build_discriminant(H, pauli_jumps(n), grid, window, beta);
}

struct TopEigen {
  double eigenvalue = 0.0;  // of I + D
  double max_eigenvalue_d = 0.0;
  Eigen::VectorXcd vector;
  double fidelity = 0.0;       // vs purification of rho_beta
  double fidelity_half = 0.0;  // vs purification of rho_{beta/2}
};

inline TopEigen top_eigenvector(const DiscriminantModel& model) {
  const Eigen::MatrixXcd herm = 0.5 * (model.D + model.D.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  if (solver.info() != Eigen::Success) throw NumericalFailure("discriminant eigensolver did not converge");
  const auto last = herm.rows() - 1;
  TopEigen t;
  t.max_eigenvalue_d = solver.eigenvalues()(last);
  t.eigenvalue = 1.0 + t.max_eigenvalue_d;
  t.vector = solver.eigenvectors().col(last);
  t.fidelity = std::norm(canonical_purification(model.h_eigen, model.beta).dot(t.vector));
  t.fidelity_half = std::norm(canonical_purification(model.h_eigen, 0.5 * model.beta).dot(t.vector));
  return t;
}

struct AnnealingStep {
  double beta = 0.0;
  double sigma_t = 0.0;
  double eigenvalue = 0.0;
  double fidelity = 0.0;
  double fidelity_half = 0.0;
  std::optional<double> overlap_prev;
};

struct AnnealingReport {
  std::vector<AnnealingStep> steps;
  double min_overlap = 1.0;
  double final_fidelity = 0.0;
};

/// Follows the top eigenvector of D along an increasing beta schedule from 0.
inline AnnealingReport annealing_path(const Eigen::MatrixXcd& H, int M, const std::vector<double>& betas,
                                      std::optional<double> sigma_t = std::nullopt) {
  if (betas.empty() || betas.front() != 0.0) throw InvalidInput("annealing schedule must start at beta = 0");
  for (std::size_t i = 1; i < betas.size(); ++i)
    if (!(betas[i] > betas[i - 1])) throw InvalidInput("annealing schedule must be increasing");
  AnnealingReport rep;
  Eigen::VectorXcd prev;
  for (double b : betas) {
    auto model = build_discriminant(H, M, b, sigma_t);
    auto top = top_eigenvector(model);
    AnnealingStep step;
    step.beta = b;
    step.sigma_t = model.window.sigma_t;
    step.eigenvalue = top.eigenvalue;
    step.fidelity = top.fidelity;
    step.fidelity_half = top.fidelity_half;
    if (prev.size()) {
      step.overlap_prev = std::abs(prev.dot(top.vector));
      rep.min_overlap = std::min(rep.min_overlap, *step.overlap_prev);
    }
    prev = top.vector;
    rep.steps.push_back(step);
  }
  rep.final_fidelity = rep.steps.back().fidelity;
  return rep;
}

/// Pauli-jump Parseval residual max_j |sum_w ||A_j(w)||_F^2 - ||A_j||_F^2|.
inline double parseval_residual(const DiscriminantModel& model) {
  double worst = 0.0;
  for (const auto& a : model.jumps.ops) {
    auto tr = operator_fourier(a, model.h_eigen, model.grid, model.window);
    double acc = 0.0;
    for (const auto& m : tr) acc += m.squaredNorm();
    worst = std::max(worst, std::abs(acc - a.squaredNorm()));
  }
  return worst;
}

inline nlohmann::json to_json(const AnnealingReport& rep) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : rep.steps) {
    nlohmann::json j = {{"beta", s.beta},
                        {"sigma_t", s.sigma_t},
                        {"top_eigenvalue", s.eigenvalue},
                        {"fidelity", s.fidelity},
                        {"fidelity_half_beta", s.fidelity_half}};
    j["overlap_prev"] = s.overlap_prev ? nlohmann::json(*s.overlap_prev) : nlohmann::json(nullptr);
    steps.push_back(std::move(j));
  }
  return {{"steps", steps}, {"min_overlap", rep.min_overlap}, {"final_fidelity", rep.final_fidelity}};
}

}  // namespace tqtda
