#include "oracles.hpp"

#include <absorb/io.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace absorb;

TEST(Cliques, CompleteGraphsCountBinomial) {
  auto k5 = Hypergraph::complete(5, 2);
  EXPECT_EQ(enumerate_cliques(k5, 3).size(), 10u);
  auto k73 = Hypergraph::complete(7, 3);
  EXPECT_EQ(enumerate_cliques(k73, 4).size(), 35u);
}

TEST(Cliques, K4MinusEdgeHasTwoTriangles) {
  Hypergraph g(4, 2, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
  auto cl = enumerate_cliques(g, 3);
  ASSERT_EQ(cl.size(), 2u);
  EXPECT_EQ(cl[0], (Clique{0, 1, 2}));
  EXPECT_EQ(cl[1], (Clique{1, 2, 3}));
}

TEST(Cliques, MatchBruteForceOnRandomGraphs) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Hypergraph g = oracle::random_graph(9, 0.55, s);
    for (int q : {3, 4}) {
      auto got = enumerate_cliques(g, q);
      auto want = oracle::cliques(g, q);
      ASSERT_EQ(got.size(), want.size()) << "seed " << s << " q " << q;
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(std::vector<Vertex>(got[i].begin(), got[i].end()), want[i]);
      for (const Clique& c : got) EXPECT_TRUE(is_clique_of(g, c));
    }
  }
}

TEST(Cliques, ThreeUniformMatchesBruteForce) {
  Rng rng(3);
  Hypergraph g(8, 3);
  auto k = Hypergraph::complete(8, 3);
  for (const Edge& e : k.edges())
    if (rng.uniform01() < 0.7) g.add(e);
  auto got = enumerate_cliques(g, 4);
  auto want = oracle::cliques(g, 4);
  EXPECT_EQ(got.size(), want.size());
}

TEST(Degrees, LevelDegrees) {
  auto kn = Hypergraph::complete(9, 2);
  EXPECT_EQ(level_degree(kn, SortedTuple{4}), 8);
  auto k73 = Hypergraph::complete(7, 3);
  EXPECT_EQ(level_degree(k73, SortedTuple{1, 2}), 5);
  Hypergraph empty(5, 2);
  EXPECT_EQ(level_degree(empty, SortedTuple{0}), 0);
}

TEST(Degrees, MaxLevelDegree) {
  auto kn = Hypergraph::complete(8, 2);
  EXPECT_EQ(max_level_degree(kn, 1), 7);
  Hypergraph single(5, 3, {{0, 1, 2}});
  EXPECT_EQ(max_level_degree(single, 2), 1);
  auto k6 = Hypergraph::complete(6, 2);
  EXPECT_EQ(max_level_degree(k6, 0), 15);
}

TEST(Hypergraph, RejectsBadEdges) {
  Hypergraph g(4, 2);
  EXPECT_THROW(g.add(Edge{0, 7}), ParameterError);
  EXPECT_THROW(g.add(Edge{0, 1, 2}), ParameterError);
  EXPECT_THROW(Edge({1, 1}), Error);
}

TEST(Multigraph, Multiplicities) {
  MultiHypergraph m(4, 2);
  m.add(Edge{0, 1}, 3);
  m.add(Edge{0, 1});
  EXPECT_EQ(m.multiplicity(Edge{0, 1}), 4);
  EXPECT_EQ(m.multiplicity(Edge{1, 2}), 0);
  EXPECT_EQ(m.simple().size(), 1u);
}

TEST(Packing, DecompositionChecks) {
  auto k4 = Hypergraph::complete(4, 2);
  Packing p{4, 3, 2, {{0, 1, 2}}};
  EXPECT_TRUE(is_packing_of(p, k4));
  p.cliques.push_back({0, 1, 3});
  EXPECT_FALSE(is_packing_of(p, k4));
  EXPECT_FALSE(decomposes({{0, 1, 2}}, 3, k4));
  EXPECT_THROW(Decomposition::make(k4, 3, {{0, 1, 2}}), ConstructionError);
  auto tri = Hypergraph::complete(3, 2);
  EXPECT_EQ(Decomposition::make(tri, 3, {{0, 1, 2}}).size(), 1u);
}

TEST(Io, ReadsTriangle) {
  std::istringstream in("2 3 3\n0 1\n0 2\n1 2\n");
  Hypergraph g = io::read_graph(in);
  EXPECT_EQ(g, Hypergraph::complete(3, 2));
}

TEST(Io, RoundTrip) {
  auto k = Hypergraph::complete(7, 3);
  std::ostringstream os;
  io::write_graph(os, k);
  std::istringstream in(os.str());
  EXPECT_EQ(io::read_graph(in), k);
}

TEST(Io, CommentsAndMultiplicity) {
  std::istringstream in("# header next\n2 3 2\n\n0 1 x 3\n1 2\n");
  MultiHypergraph m = io::read_multigraph(in);
  EXPECT_EQ(m.multiplicity(Edge{0, 1}), 3);
  EXPECT_EQ(m.multiplicity(Edge{1, 2}), 1);
}

TEST(Io, ParseErrors) {
  std::istringstream dup("2 3 2\n0 1\n1 0\n");
  EXPECT_THROW(io::read_graph(dup), ParseError);
  std::istringstream range("2 3 1\n0 5\n");
  EXPECT_THROW(io::read_graph(range), ParseError);
  std::istringstream shortf("2 3 2\n0 1\n");
  EXPECT_THROW(io::read_graph(shortf), ParseError);
  std::istringstream junk("2 3 1\n0 a\n");
  EXPECT_THROW(io::read_graph(junk), ParseError);
}

TEST(Io, PackingRoundTrip) {
  Packing p{7, 3, 2, {{0, 1, 2}, {0, 3, 4}}};
  std::ostringstream os;
  io::write_packing(os, p, "host.txt");
  std::istringstream in(os.str());
  auto f = io::read_packing(in, 2);
  EXPECT_EQ(f.packing, p);
  EXPECT_EQ(f.host, "host.txt");
}

TEST(Rng, Reproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(c.below(7), 7u);
  EXPECT_NE(derive_seed(5, 0), derive_seed(5, 1));
}
