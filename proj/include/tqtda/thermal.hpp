#pragma once

// Thermal estimator of Betti numbers: the inverse purity of the Gibbs state
// exp(-beta L)/Tr exp(-beta L) of a combinatorial Laplacian L, together with
// the equivalent fidelity, collision-entropy and Hilbert-Schmidt readings.
//
// Everything here is evaluated on the spectrum. Sums are shifted by the
// smallest eigenvalue so that beta up to 1e6 with eigenvalues up to 1e3
// neither overflows nor underflows.

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "tqtda/error.hpp"
#include "tqtda/homology.hpp"

namespace tqtda {

inline constexpr double kDefaultCriterion = 1e-3;
inline constexpr double kDefaultGuard = 1e-9;

struct PartitionTerms {
  double z1 = 0.0;      // sum_i exp(-beta (l_i - l_min))
  double z2 = 0.0;      // sum_i exp(-2 beta (l_i - l_min))
  double z_norm = 0.0;  // (1/m) sum_i exp(-beta l_i), unshifted
};

inline PartitionTerms partition_terms(const Spectrum& s, double beta) {
  if (!std::isfinite(beta)) throw InvalidInput("beta must be finite");
  if (s.dim() == 0) throw InvalidInput("empty spectrum");
  const double lmin = s.lambda_min();
  PartitionTerms t;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double x = beta * (s.eigenvalues(i) - lmin);
    t.z1 += std::exp(-x);
    t.z2 += std::exp(-2.0 * x);
  }
  // log z_norm = -beta l_min + log z1 - log m
  const double log_z = -beta * lmin + std::log(t.z1) - std::log(static_cast<double>(s.dim()));
  t.z_norm = std::exp(log_z);
  return t;
}

inline double purity(const Spectrum& s, double beta) {
  auto t = partition_terms(s, beta);
  return t.z2 / (t.z1 * t.z1);
}

/// Collision entropy in nats.
inline double renyi2(double purity_value) {
  if (!(purity_value > 0.0)) throw InvalidInput("purity must be positive");
  return -std::log(purity_value);
}

/// Uhlmann fidelity between the maximally mixed state and its imaginary-time
/// evolution at tau: (Tr e^{-tau L})^2 / (Tr e^{-2 tau L} m).
inline double uhlmann_fidelity(const Spectrum& s, double tau, std::size_t m) {
  auto t = partition_terms(s, tau);
  return t.z1 * t.z1 / (t.z2 * static_cast<double>(m));
}

/// ||rho_mix - rho_beta||_2^2 = purity - 1/m.
inline double hs_distance(const Spectrum& s, double beta, std::size_t m) {
  return std::max(0.0, purity(s, beta) - 1.0 / static_cast<double>(m));
}

/// Cooling rate |d/dtau Tr{rho_mix e^{-tau L}}| = (1/m) sum_i l_i e^{-tau l_i}.
/// Eigenvalues below the kernel tolerance count as exact zeros.
inline double cooling_rate(const Spectrum& s, double tau) {
  double g = 0.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double l = s.eigenvalues(i);
    if (l >= s.tol) g += l * std::exp(-tau * l);
  }
  return g / static_cast<double>(s.dim());
}

/// Smallest tau with cooling_rate(tau) <= criterion, to relative precision 1e-6.
/// cooling_rate is non-increasing in tau, so bisection on [0, hi] is exact.
inline double beta_threshold(const Spectrum& s, double criterion = kDefaultCriterion) {
  if (!(criterion > 0.0)) throw InvalidInput("criterion must be positive");
  if (s.dim() == 0 || s.kernel_dim == s.dim())
    throw Undefined("threshold undefined: all eigenvalues are zero");
  if (cooling_rate(s, 0.0) <= criterion) return 0.0;
  double lo = 0.0;
  double hi = 1.0 / s.lambda_max();
  while (cooling_rate(s, hi) > criterion) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (cooling_rate(s, mid) > criterion)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

/// z_norm tends to d/m >= 1/m with a d-dimensional kernel and to 0 without one.
inline bool detect_trivial_kernel(double z_norm, std::size_t m) {
  return z_norm < 0.5 / static_cast<double>(m);
}

struct ThermalEstimate {
  double beta = 0.0;
  double purity = 1.0;
  double inverse_purity = 1.0;
  std::size_t betti_floor = 0;
  double renyi2 = 0.0;
  double fidelity = 1.0;
  double hs_distance = 0.0;
  double z_norm = 1.0;
  bool converged = false;
  bool trivial_kernel = false;
};

struct ThermalOptions {
  double guard = kDefaultGuard;
  double criterion = kDefaultCriterion;
};

/// Fills every field from a purity value. The trivial-kernel override only
/// fires once the cooling criterion holds.
inline ThermalEstimate make_estimate(const Spectrum& s, double beta, double purity_value, double z_norm,
                                     const ThermalOptions& opt) {
  if (!(opt.guard >= 0.0 && opt.guard < 1.0)) throw InvalidInput("guard must lie in [0, 1)");
  if (!(opt.criterion > 0.0)) throw InvalidInput("criterion must be positive");
  const auto m = s.dim();
  ThermalEstimate e;
  e.beta = beta;
  e.purity = purity_value;
  e.inverse_purity = 1.0 / purity_value;
  e.renyi2 = renyi2(purity_value);
  e.fidelity = e.inverse_purity / static_cast<double>(m);
  e.hs_distance = std::max(0.0, purity_value - 1.0 / static_cast<double>(m));
  e.z_norm = z_norm;
  e.converged = cooling_rate(s, beta) <= opt.criterion;
  e.trivial_kernel = e.converged && detect_trivial_kernel(z_norm, m);
  const double raw = std::floor(e.inverse_purity + opt.guard);
  e.betti_floor = e.trivial_kernel ? 0 : static_cast<std::size_t>(std::clamp(raw, 0.0, static_cast<double>(m)));
  return e;
}

inline ThermalEstimate betti_thermal(const Spectrum& s, double beta, const ThermalOptions& opt = {}) {
  if (!(beta >= 0.0)) throw InvalidInput("beta must be non-negative");
  auto t = partition_terms(s, beta);
  return make_estimate(s, beta, t.z2 / (t.z1 * t.z1), t.z_norm, opt);
}

struct SweepResult {
  std::vector<double> betas;
  std::vector<ThermalEstimate> estimates;
  std::optional<double> beta_threshold;
};

inline SweepResult sweep(const Spectrum& s, const std::vector<double>& beta_grid,
                         const ThermalOptions& opt = {}) {
  if (beta_grid.empty()) throw InvalidInput("beta grid is empty");
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (!(beta_grid[i] >= 0.0)) throw InvalidInput("beta grid values must be non-negative");
    if (i > 0 && !(beta_grid[i] > beta_grid[i - 1])) throw InvalidInput("beta grid must be strictly increasing");
  }
  SweepResult r;
  r.betas = beta_grid;
  try {
    r.beta_threshold = beta_threshold(s, opt.criterion);
  } catch (const Undefined&) {
    r.beta_threshold.reset();
  }
  r.estimates.reserve(beta_grid.size());
  for (double b : beta_grid) r.estimates.push_back(betti_thermal(s, b, opt));
  return r;
}

/// Log-spaced grid of `steps` points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t steps) {
  if (!(lo > 0.0 && hi > lo) || steps < 1) throw InvalidInput("log grid needs 0 < lo < hi and steps >= 1");
  if (steps == 1) return {lo};
  std::vector<double> g(steps);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < steps; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
  return g;
}

inline constexpr const char* kSweepCsvHeader =
    "beta,purity,inverse_purity,betti_floor,renyi2_nats,fidelity,hs_distance,z_norm,converged";

inline void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << kSweepCsvHeader << '\n';
  out.precision(17);
  for (const auto& e : r.estimates) {
    out << e.beta << ',' << e.purity << ',' << e.inverse_purity << ',' << e.betti_floor << ',' << e.renyi2
        << ',' << e.fidelity << ',' << e.hs_distance << ',' << e.z_norm << ',' << (e.converged ? "true" : "false")
        << '\n';
  }
}

inline nlohmann::json to_json(const ThermalEstimate& e) {
  return {{"beta", e.beta},
          {"purity", e.purity},
          {"inverse_purity", e.inverse_purity},
          {"betti_floor", e.betti_floor},
          {"renyi2_nats", e.renyi2},
          {"fidelity", e.fidelity},
          {"hs_distance", e.hs_distance},
          {"z_norm", e.z_norm},
          {"converged", e.converged},
          {"trivial_kernel", e.trivial_kernel}};
}

}  // namespace tqtda
