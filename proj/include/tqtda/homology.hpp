#pragma once

// Boundary operators restricted to a complex, combinatorial Laplacians, their
// spectra, and two independent routes to Betti numbers (Hodge kernel and
// boundary ranks).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <algorithm>
#include <optional>
#include <vector>

#include "json.hpp"
#include "tqtda/complex.hpp"
#include "tqtda/error.hpp"

namespace tqtda {

/// Relative cutoff separating zero from nonzero Laplacian eigenvalues.
inline constexpr double kKernelRelTol = 1e-8;

inline double kernel_tolerance(double lambda_max) { return kKernelRelTol * std::max(1.0, lambda_max); }

/// Signed incidence matrix of the restricted boundary map, rows S_{k-1}, columns S_k.
struct BoundaryMatrix {
  int k = 0;
  Eigen::SparseMatrix<int> matrix;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix.cast<double>()); }
};

/// Column of s_k carries (-1)^l at the face with vertex l removed, l = 0..k.
inline BoundaryMatrix boundary_matrix(const SimplicialComplex& cx, int k) {
  if (k < 1) throw InvalidInput("boundary_matrix needs k >= 1");
  auto faces = cx.simplices(k - 1);
  auto cells = cx.simplices(k);
  std::vector<Eigen::Triplet<int>> entries;
  entries.reserve(cells.size() * static_cast<std::size_t>(k + 1));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int l = 0; l <= k; ++l) {
      auto face = cells[c].facet(static_cast<std::size_t>(l));
      auto it = std::lower_bound(faces.begin(), faces.end(), face);
      if (it == faces.end() || *it != face) throw InvalidInput("complex is not downward closed");
      entries.emplace_back(static_cast<int>(it - faces.begin()), static_cast<int>(c), (l % 2 == 0) ? 1 : -1);
    }
  }
  BoundaryMatrix b;
  b.k = k;
  b.matrix.resize(static_cast<Eigen::Index>(faces.size()), static_cast<Eigen::Index>(cells.size()));
  b.matrix.setFromTriplets(entries.begin(), entries.end());
  return b;
}

/// Symmetric PSD Hodge Laplacian on the span of S_k.
struct Laplacian {
  int k = 0;
  Eigen::MatrixXd matrix;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Laplacian down + up parts, assembled in integer arithmetic so the result
/// is exactly symmetric.
inline Laplacian combinatorial_laplacian(const SimplicialComplex& cx, int k) {
  if (k < 0 || cx.count(k) == 0)
    throw InvalidInput("no " + std::to_string(k) + "-simplices at this scale");
  const auto m = static_cast<Eigen::Index>(cx.count(k));
  Eigen::SparseMatrix<int> acc(m, m);
  if (k >= 1) {
    auto down = boundary_matrix(cx, k).matrix;
    acc = Eigen::SparseMatrix<int>(down.transpose()) * down;
  }
  if (cx.count(k + 1) > 0) {
    auto up = boundary_matrix(cx, k + 1).matrix;
    acc = acc + Eigen::SparseMatrix<int>(up * Eigen::SparseMatrix<int>(up.transpose()));
  }
  return {k, Eigen::MatrixXd(acc.cast<double>())};
}

/// Ascending eigenvalues with optional orthonormal eigenvectors (columns).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  std::optional<Eigen::MatrixXd> eigenvectors;
  std::size_t kernel_dim = 0;
  double tol = kKernelRelTol;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double lambda_max() const { return eigenvalues.size() ? eigenvalues.maxCoeff() : 0.0; }
  double lambda_min() const { return eigenvalues.size() ? eigenvalues.minCoeff() : 0.0; }
};

/// Spectrum from given eigenvalues (sorted here); tolerance per kernel_tolerance.
inline Spectrum make_spectrum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  s.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  s.tol = kernel_tolerance(s.lambda_max());
  s.kernel_dim = static_cast<std::size_t>((s.eigenvalues.array() < s.tol).count());
  return s;
}

inline Spectrum spectrum(const Eigen::MatrixXd& symmetric, bool with_vectors) {
  if (symmetric.rows() != symmetric.cols()) throw InvalidInput("spectrum needs a square matrix");
  Spectrum s;
  if (symmetric.rows() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetric, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  s.eigenvalues = solver.eigenvalues();
  if (with_vectors) s.eigenvectors = solver.eigenvectors();
  s.tol = kernel_tolerance(s.lambda_max());
  s.kernel_dim = static_cast<std::size_t>((s.eigenvalues.array() < s.tol).count());
  return s;
}

inline Spectrum spectrum(const Laplacian& L, bool with_vectors) { return spectrum(L.matrix, with_vectors); }

inline std::size_t betti_exact_kernel(const Spectrum& s) { return s.kernel_dim; }

struct HomologyRanks {
  std::size_t dim_ker_dk = 0;
  std::size_t rank_dk1 = 0;
  std::size_t betti = 0;
};

/// Numerical rank with the Laplacian tolerance applied to squared singular values.
inline std::size_t matrix_rank(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double tol = kernel_tolerance(sv(0) * sv(0));
  return static_cast<std::size_t>((sv.array().square() > tol).count());
}

/// b_k = dim ker d_k - rank d_{k+1}; d_0 is the zero map.
inline HomologyRanks betti_exact_rank(const SimplicialComplex& cx, int k) {
  if (k < 0 || cx.count(k) == 0)
    throw InvalidInput("no " + std::to_string(k) + "-simplices at this scale");
  HomologyRanks r;
  const auto m = cx.count(k);
  const std::size_t rank_dk = k >= 1 ? matrix_rank(boundary_matrix(cx, k).dense()) : 0;
  r.dim_ker_dk = m - rank_dk;
  r.rank_dk1 = cx.count(k + 1) > 0 ? matrix_rank(boundary_matrix(cx, k + 1).dense()) : 0;
  if (r.rank_dk1 > r.dim_ker_dk) throw NumericalFailure("rank d_{k+1} exceeds dim ker d_k");
  r.betti = r.dim_ker_dk - r.rank_dk1;
  return r;
}

/// Smallest eigenvalue strictly above the kernel tolerance.
inline double spectral_gap(const Spectrum& s) {
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues(i) >= s.tol) return s.eigenvalues(i);
  throw Undefined("spectral gap undefined: all eigenvalues are zero");
}

inline nlohmann::json to_json(const Spectrum& s) {
  return {{"eigenvalues", std::vector<double>(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size())},
          {"kernel_dim", s.kernel_dim},
          {"tol", s.tol}};
}

inline Spectrum spectrum_from_json(const nlohmann::json& j) {
  auto s = make_spectrum(j.at("eigenvalues").get<std::vector<double>>());
  return s;
}

}  // namespace tqtda
