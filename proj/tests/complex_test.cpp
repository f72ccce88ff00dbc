#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tqtda/complex.hpp"
#include "tqtda/corpus.hpp"

using namespace tqtda;

namespace {

PointCloud collinear() { return PointCloud{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}}; }

PointCloud random_cloud(std::mt19937_64& gen, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(d);
    for (auto& x : p) x = u(gen);
    c.points.push_back(p);
  }
  return c;
}

std::vector<std::vector<std::vector<Vertex>>> as_vectors(const SimplicialComplex& cx) {
  std::vector<std::vector<std::vector<Vertex>>> out;
  for (int k = 0; k <= cx.max_dim(); ++k) {
    out.emplace_back();
    for (const auto& s : cx.simplices(k)) out.back().push_back(s.vertices());
  }
  return out;
}

bool downward_closed(const SimplicialComplex& cx) {
  for (int k = 1; k <= cx.max_dim(); ++k)
    for (const auto& s : cx.simplices(k))
      for (std::size_t l = 0; l < s.size(); ++l)
        if (!cx.contains(s.facet(l))) return false;
  return true;
}

}  // namespace

TEST(PointCloud, ParsesRowsInOrder) {
  oracle::TempDir dir("cloud");
  auto cloud = load_point_cloud(dir.file("a.csv", "0,0\n1,0\n2,0"));
  ASSERT_EQ(cloud.size(), 3u);
  EXPECT_EQ(cloud.dim(), 2u);
  EXPECT_DOUBLE_EQ(cloud.points[2][0], 2.0);

  auto single = load_point_cloud(dir.file("b.csv", "1.5"));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.dim(), 1u);
  EXPECT_DOUBLE_EQ(single.points[0][0], 1.5);
}

TEST(PointCloud, ReportsRowNumbers) {
  std::istringstream ragged("0,0\n1");
  try {
    parse_point_cloud(ragged);
    FAIL() << "expected ragged-row error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("ragged row 2"), std::string::npos) << e.what();
  }
  std::istringstream bad("0,0\n1,x\n");
  try {
    parse_point_cloud(bad);
    FAIL() << "expected non-numeric error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_point_cloud("/nonexistent/points.csv"), InvalidInput);
}

TEST(CliqueComplex, PathGraphAtSmallEpsilon) {
  auto cx = build_clique_complex(collinear(), Metric::euclidean, 1.1, 2);
  EXPECT_EQ(simplices(cx, 1), (std::vector<Simplex>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(simplices(cx, 2).empty());
}

TEST(CliqueComplex, FilledTriangleAtLargeEpsilon) {
  auto cx = build_clique_complex(collinear(), Metric::euclidean, 2.5, 2);
  EXPECT_EQ(simplices(cx, 1), (std::vector<Simplex>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(simplices(cx, 2), (std::vector<Simplex>{{0, 1, 2}}));
  EXPECT_EQ(cx, corpus::filled_triangle());
}

TEST(CliqueComplex, ClosedBallAtExactDistance) {
  auto cx = build_clique_complex(collinear(), Metric::euclidean, 1.0, 1);
  EXPECT_EQ(cx.count(1), 2u);
}

TEST(CliqueComplex, ZeroEpsilonGivesVerticesOnly) {
  std::mt19937_64 gen(3);
  auto cloud = random_cloud(gen, 6, 3);
  auto cx = build_clique_complex(cloud, Metric::manhattan, 0.0, 3);
  EXPECT_EQ(cx.max_dim(), 0);
  EXPECT_EQ(cx.count(0), 6u);
}

TEST(CliqueComplex, RejectsBadArguments) {
  EXPECT_THROW(build_clique_complex(collinear(), Metric::euclidean, -0.1, 1), InvalidInput);
  EXPECT_THROW(build_clique_complex(collinear(), Metric::euclidean, 1.0, 3), InvalidInput);
  EXPECT_THROW(parse_metric("cosine"), InvalidInput);
}

TEST(CliqueComplex, MatchesBruteForceOnRandomClouds) {
  std::mt19937_64 gen(11);
  const Metric metrics[] = {Metric::euclidean, Metric::manhattan, Metric::chebyshev};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 8;
    auto cloud = random_cloud(gen, n, 1 + trial % 3);
    const double eps = 0.15 + 0.01 * (trial % 50);
    const Metric m = metrics[trial % 3];
    const int max_dim = static_cast<int>(std::min<std::size_t>(n - 1, 4));
    auto cx = build_clique_complex(cloud, m, eps, max_dim);
    EXPECT_TRUE(downward_closed(cx));
    EXPECT_EQ(as_vectors(cx), oracle::brute_force_cliques(cloud, m, eps, max_dim)) << "trial " << trial;
  }
}

TEST(CliqueComplex, MonotoneInEpsilon) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto cloud = random_cloud(gen, 8, 2);
    SimplicialComplex prev = build_clique_complex(cloud, Metric::euclidean, 0.0, 3);
    for (double eps = 0.1; eps <= 1.5; eps += 0.1) {
      auto cx = build_clique_complex(cloud, Metric::euclidean, eps, 3);
      EXPECT_TRUE(prev.is_subcomplex_of(cx));
      prev = cx;
    }
  }
}

TEST(RandomComplex, DeterministicPerSeed) {
  auto a = random_complex(10, 0.5, 4, 42);
  auto b = random_complex(10, 0.5, 4, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_NE(to_json(a).dump(), to_json(random_complex(10, 0.5, 4, 43)).dump());
}

TEST(RandomComplex, ExtremeProbabilities) {
  EXPECT_EQ(random_complex(3, 1.0, 2, 99), corpus::filled_triangle());
  auto empty = random_complex(5, 0.0, 3, 7);
  EXPECT_EQ(empty.max_dim(), 0);
  EXPECT_EQ(empty.count(0), 5u);
  EXPECT_THROW(random_complex(5, 1.5, 2, 0), InvalidInput);
  EXPECT_THROW(random_complex(5, -0.1, 2, 0), InvalidInput);
  EXPECT_THROW(random_complex(0, 0.5, 2, 0), InvalidInput);
}

TEST(RandomComplex, IsCliqueComplexOfItsGraph) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto cx = random_complex(8, 0.6, 7, seed);
    EXPECT_TRUE(downward_closed(cx));
    // every vertex set whose pairs are all edges must be present
    for (std::uint32_t mask = 1; mask < 256; ++mask) {
      std::vector<Vertex> v;
      for (Vertex i = 0; i < 8; ++i)
        if (mask & (1U << i)) v.push_back(i);
      bool clique = true;
      for (std::size_t a = 0; a < v.size() && clique; ++a)
        for (std::size_t b = a + 1; b < v.size() && clique; ++b) clique = cx.contains(Simplex{v[a], v[b]});
      EXPECT_EQ(clique, cx.contains(Simplex(v)));
    }
  }
}

TEST(Simplices, EnumerationAndOutOfRange) {
  auto cx = corpus::filled_triangle();
  EXPECT_EQ(simplices(cx, 1), (std::vector<Simplex>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(simplices(cx, 2), (std::vector<Simplex>{{0, 1, 2}}));
  EXPECT_TRUE(simplices(cx, 7).empty());
  EXPECT_TRUE(simplices(cx, -1).empty());
}

TEST(SimplexType, RejectsUnsortedVertices) {
  EXPECT_THROW(Simplex({2, 1}), InvalidInput);
  EXPECT_THROW(Simplex({1, 1}), InvalidInput);
  EXPECT_THROW(Simplex(std::vector<Vertex>{}), InvalidInput);
}

TEST(ComplexJson, RoundTripsRandomComplexes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cx = random_complex(7, 0.2 + 0.04 * static_cast<double>(seed), 6, seed);
    EXPECT_EQ(complex_from_json(nlohmann::json::parse(to_json(cx).dump())), cx);
  }
}

TEST(ComplexJson, SchemaShape) {
  auto j = to_json(corpus::hollow_triangle());
  EXPECT_EQ(j.dump(), R"({"n_vertices":3,"simplices":{"0":[[0],[1],[2]],"1":[[0,1],[0,2],[1,2]]}})");
}

TEST(ComplexJson, RejectsInvalidComplexes) {
  using nlohmann::json;
  // missing face (0,2) of the triangle
  EXPECT_THROW(complex_from_json(json::parse(R"({"n_vertices":3,"simplices":{"0":[[0],[1],[2]],"1":[[0,1],[1,2]],"2":[[0,1,2]]}})")),
               InvalidInput);
  // unsorted S_1
  EXPECT_THROW(complex_from_json(json::parse(R"({"n_vertices":3,"simplices":{"0":[[0],[1],[2]],"1":[[1,2],[0,1]]}})")),
               InvalidInput);
  // vertex out of range
  EXPECT_THROW(complex_from_json(json::parse(R"({"n_vertices":2,"simplices":{"0":[[0],[1],[2]]}})")), InvalidInput);
  // wrong simplex size for its key
  EXPECT_THROW(complex_from_json(json::parse(R"({"n_vertices":3,"simplices":{"0":[[0,1]]}})")), InvalidInput);
  EXPECT_THROW(complex_from_json(json::parse(R"({"simplices":{}})")), InvalidInput);
}

TEST(Corpus, BundledFilesMatchBuiltins) {
  for (const auto& e : corpus::all()) {
    auto path = std::filesystem::path(TQTDA_DATA_DIR) / "corpus" / (e.name + ".json");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(load_complex(path), e.complex) << e.name;
  }
}
