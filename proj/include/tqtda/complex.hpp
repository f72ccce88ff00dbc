#pragma once

// Simplicial complexes: point clouds, clique (Vietoris-Rips) complexes at a
// fixed filtration scale, and Erdos-Renyi random clique complexes.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tqtda/error.hpp"
#include "tqtda/rng.hpp"

namespace tqtda {

using Vertex = std::uint32_t;

struct PointCloud {
  std::vector<std::vector<double>> points;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
};

/// A k-simplex: k+1 strictly increasing vertex indices.
class Simplex {
 public:
  Simplex() = default;
  explicit Simplex(std::vector<Vertex> vertices) : v_(std::move(vertices)) {
    if (v_.empty()) throw InvalidInput("simplex must have at least one vertex");
    for (std::size_t i = 1; i < v_.size(); ++i)
      if (v_[i - 1] >= v_[i]) throw InvalidInput("simplex vertices must be strictly increasing");
  }
  Simplex(std::initializer_list<Vertex> vertices) : Simplex(std::vector<Vertex>(vertices)) {}

  int dim() const { return static_cast<int>(v_.size()) - 1; }
  std::size_t size() const { return v_.size(); }
  Vertex operator[](std::size_t i) const { return v_[i]; }
  Vertex back() const { return v_.back(); }
  const std::vector<Vertex>& vertices() const { return v_; }

  /// The face with the l-th vertex removed.
  Simplex facet(std::size_t l) const {
    Simplex f;
    f.v_.reserve(v_.size() - 1);
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (i != l) f.v_.push_back(v_[i]);
    return f;
  }

  Simplex extended(Vertex v) const {
    Simplex s = *this;
    s.v_.push_back(v);
    return s;
  }

  auto operator<=>(const Simplex&) const = default;
  bool operator==(const Simplex&) const = default;

 private:
  std::vector<Vertex> v_;
};

/// Downward-closed family of simplices on vertices [0, n_vertices).
/// sets()[k] is the sorted, duplicate-free list S_k.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Validates every invariant; throws InvalidInput on violation.
  SimplicialComplex(std::size_t n_vertices, std::vector<std::vector<Simplex>> sets)
      : n_(n_vertices), sets_(std::move(sets)) {
    while (!sets_.empty() && sets_.back().empty()) sets_.pop_back();
    validate();
  }

  std::size_t n_vertices() const { return n_; }
  /// Largest k with S_k nonempty, or -1 for the empty complex.
  int max_dim() const { return static_cast<int>(sets_.size()) - 1; }
  const std::vector<std::vector<Simplex>>& sets() const { return sets_; }

  std::span<const Simplex> simplices(int k) const {
    if (k < 0 || k > max_dim()) return {};
    return sets_[static_cast<std::size_t>(k)];
  }
  std::size_t count(int k) const { return simplices(k).size(); }

  /// Row index of s within S_{s.dim()}, or -1 when absent.
  std::ptrdiff_t index_of(const Simplex& s) const {
    auto list = simplices(s.dim());
    auto it = std::lower_bound(list.begin(), list.end(), s);
    if (it == list.end() || *it != s) return -1;
    return it - list.begin();
  }

  bool contains(const Simplex& s) const { return index_of(s) >= 0; }

  /// Simplex-wise inclusion.
  bool is_subcomplex_of(const SimplicialComplex& other) const {
    for (int k = 0; k <= max_dim(); ++k)
      for (const auto& s : simplices(k))
        if (!other.contains(s)) return false;
    return true;
  }

  bool operator==(const SimplicialComplex&) const = default;

 private:
  void validate() const {
    for (std::size_t k = 0; k < sets_.size(); ++k) {
      const auto& list = sets_[k];
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& s = list[i];
        if (s.size() != k + 1)
          throw InvalidInput("simplex of wrong size in S_" + std::to_string(k));
        if (s.back() >= n_) throw InvalidInput("vertex index out of range in S_" + std::to_string(k));
        if (i > 0 && !(list[i - 1] < s))
          throw InvalidInput("S_" + std::to_string(k) + " is not sorted and duplicate-free");
        if (k > 0)
          for (std::size_t l = 0; l <= k; ++l)
            if (!std::binary_search(sets_[k - 1].begin(), sets_[k - 1].end(), s.facet(l)))
              throw InvalidInput("complex is not downward closed at S_" + std::to_string(k));
      }
    }
  }

  std::size_t n_ = 0;
  std::vector<std::vector<Simplex>> sets_;
};

enum class Metric { euclidean, manhattan, chebyshev };

inline Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "manhattan") return Metric::manhattan;
  if (name == "chebyshev") return Metric::chebyshev;
  throw InvalidInput("unknown metric '" + std::string(name) + "'");
}

inline double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    switch (metric) {
      case Metric::euclidean: acc += d * d; break;
      case Metric::manhattan: acc += d; break;
      case Metric::chebyshev: acc = std::max(acc, d); break;
    }
  }
  return metric == Metric::euclidean ? std::sqrt(acc) : acc;
}

/// Symmetric adjacency of a simple graph, row-major n x n.
class Graph {
 public:
  explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0) {}
  std::size_t size() const { return n_; }
  void connect(std::size_t i, std::size_t j) { adj_[i * n_ + j] = adj_[j * n_ + i] = 1; }
  bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }

 private:
  std::size_t n_;
  std::vector<unsigned char> adj_;
};

/// Clique complex of a graph up to dimension max_dim. Each (k-1)-clique is
/// extended only by vertices greater than its last one, so every S_k comes
/// out lexicographically sorted.
inline SimplicialComplex clique_complex(const Graph& g, int max_dim) {
  const auto n = g.size();
  std::vector<std::vector<Simplex>> sets;
  if (n == 0) return {};
  sets.emplace_back();
  for (Vertex v = 0; v < n; ++v) sets[0].push_back(Simplex{v});
  for (int k = 1; k <= max_dim; ++k) {
    std::vector<Simplex> next;
    for (const auto& s : sets.back()) {
      for (Vertex v = s.back() + 1; v < n; ++v) {
        bool ok = true;
        for (Vertex u : s.vertices())
          if (!g.adjacent(u, v)) { ok = false; break; }
        if (ok) next.push_back(s.extended(v));
      }
    }
    if (next.empty()) break;
    sets.push_back(std::move(next));
  }
  return SimplicialComplex(n, std::move(sets));
}

/// Parses a header-less CSV with one point per row.
inline PointCloud parse_point_cloud(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> p;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(field, &used);
      } catch (const std::exception&) {
        throw InvalidInput("row " + std::to_string(row) + ": non-numeric field '" + field + "'");
      }
      if (field.find_first_not_of(" \t", used) != std::string::npos)
        throw InvalidInput("row " + std::to_string(row) + ": non-numeric field '" + field + "'");
      if (!std::isfinite(x)) throw InvalidInput("row " + std::to_string(row) + ": non-finite coordinate");
      p.push_back(x);
    }
    if (!line.empty() && line.back() == ',')
      throw InvalidInput("row " + std::to_string(row) + ": empty field");
    if (!cloud.points.empty() && p.size() != cloud.dim())
      throw InvalidInput("ragged row " + std::to_string(row) + ": expected " +
                         std::to_string(cloud.dim()) + " fields, got " + std::to_string(p.size()));
    cloud.points.push_back(std::move(p));
  }
  if (cloud.points.empty()) throw InvalidInput("point cloud is empty");
  return cloud;
}

inline PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open point cloud '" + path.string() + "'");
  return parse_point_cloud(in);
}

/// Vietoris-Rips complex: edge (i, j) iff dist(i, j) <= epsilon (closed ball).
inline SimplicialComplex build_clique_complex(const PointCloud& cloud, Metric metric, double epsilon,
                                              int max_dim) {
  if (!(epsilon >= 0.0)) throw InvalidInput("epsilon must be non-negative");
  const auto n = cloud.size();
  if (n == 0) throw InvalidInput("point cloud is empty");
  if (max_dim < 0 || static_cast<std::size_t>(max_dim) > n - 1)
    throw InvalidInput("max_dim must lie in [0, n-1]");
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distance(metric, cloud.points[i], cloud.points[j]) <= epsilon) g.connect(i, j);
  return clique_complex(g, max_dim);
}

/// Clique complex of G(n, p). Edges are drawn in lexicographic (i, j) order
/// from an mt19937_64 seeded with `seed`; max_dim is clamped to n-1.
inline SimplicialComplex random_complex(std::size_t n, double edge_prob, int max_dim,
                                        std::uint64_t seed) {
  if (n < 1) throw InvalidInput("random_complex needs n >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InvalidInput("edge_prob must lie in [0, 1]");
  if (max_dim < 0) throw InvalidInput("max_dim must be non-negative");
  std::mt19937_64 gen(seed);
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(gen) < edge_prob) g.connect(i, j);
  return clique_complex(g, std::min<int>(max_dim, static_cast<int>(n) - 1));
}

inline std::vector<Simplex> simplices(const SimplicialComplex& cx, int k) {
  auto s = cx.simplices(k);
  return {s.begin(), s.end()};
}

// JSON: {"n_vertices": N, "simplices": {"0": [[0], ...], "1": [[0,1], ...]}}

inline nlohmann::json to_json(const SimplicialComplex& cx) {
  nlohmann::json j;
  j["n_vertices"] = cx.n_vertices();
  nlohmann::json sets = nlohmann::json::object();
  for (int k = 0; k <= cx.max_dim(); ++k) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : cx.simplices(k)) list.push_back(s.vertices());
    sets[std::to_string(k)] = std::move(list);
  }
  j["simplices"] = std::move(sets);
  return j;
}

inline SimplicialComplex complex_from_json(const nlohmann::json& j) {
  try {
    auto n = j.at("n_vertices").get<std::size_t>();
    const auto& sets_json = j.at("simplices");
    if (!sets_json.is_object()) throw InvalidInput("'simplices' must be an object");
    std::vector<std::vector<Simplex>> sets;
    for (const auto& [key, list] : sets_json.items()) {
      std::size_t used = 0;
      int k = std::stoi(key, &used);
      if (used != key.size() || k < 0) throw InvalidInput("bad dimension key '" + key + "'");
      if (sets.size() <= static_cast<std::size_t>(k)) sets.resize(static_cast<std::size_t>(k) + 1);
      for (const auto& s : list) sets[static_cast<std::size_t>(k)].emplace_back(s.get<std::vector<Vertex>>());
    }
    return SimplicialComplex(n, std::move(sets));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed complex JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput(std::string("malformed complex JSON: ") + e.what());
  }
}

inline SimplicialComplex load_complex(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open complex '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return complex_from_json(j);
}

/// Closure of a list of top simplices under taking faces.
inline SimplicialComplex complex_from_maximal(std::size_t n_vertices,
                                              const std::vector<std::vector<Vertex>>& tops) {
  std::vector<std::vector<Simplex>> sets;
  std::vector<Simplex> frontier;
  for (const auto& t : tops) frontier.emplace_back(t);
  while (!frontier.empty()) {
    std::vector<Simplex> faces;
    for (auto& s : frontier) {
      auto k = static_cast<std::size_t>(s.dim());
      if (sets.size() <= k) sets.resize(k + 1);
      sets[k].push_back(s);
      if (k > 0)
        for (std::size_t l = 0; l <= k; ++l) faces.push_back(s.facet(l));
    }
    frontier = std::move(faces);
  }
  for (auto& list : sets) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return SimplicialComplex(n_vertices, std::move(sets));
}

}  // namespace tqtda
