#include "oracles.hpp"

#include <absorb/divide.hpp>

#include <gtest/gtest.h>

using namespace absorb;

TEST(Divisible, CompleteGraphs) {
  auto k7 = Hypergraph::complete(7, 2);
  auto k6 = Hypergraph::complete(6, 2);
  EXPECT_TRUE(is_divisible(k7, 3));
  EXPECT_FALSE(is_divisible(k6, 3));
  EXPECT_TRUE(is_divisible(Hypergraph(5, 2), 3));
  EXPECT_TRUE(is_divisible(Hypergraph(5, 3), 5));
}

TEST(Divisible, AgreesWithBruteForce) {
  int positives = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Hypergraph g = oracle::random_graph(7, 0.5 + 0.002 * static_cast<double>(s), s);
    bool want = oracle::divisible(g, 3);
    positives += want;
    ASSERT_EQ(is_divisible(g, 3), want) << "seed " << s;
    ASSERT_EQ(is_divisible(g, 4), oracle::divisible(g, 4)) << "seed " << s;
  }
  EXPECT_GT(positives, 0);
}

TEST(Divisible, Multigraph) {
  MultiHypergraph m(3, 2);
  m.add(Edge{0, 1}, 2);
  m.add(Edge{0, 2}, 2);
  m.add(Edge{1, 2}, 2);
  EXPECT_TRUE(is_divisible(m, 3));
  m.add(Edge{0, 1});
  EXPECT_FALSE(is_divisible(m, 3));
}

TEST(Params, Admissibility) {
  EXPECT_TRUE(params_admissible({7, 3, 2, 1}));
  EXPECT_FALSE(params_admissible({6, 3, 2, 1}));
  EXPECT_TRUE(params_admissible({13, 4, 2, 1}));
  for (std::int64_t q = 2; q < 6; ++q)
    for (std::int64_t n = 2; n < 6; ++n) EXPECT_TRUE(params_admissible({q * n, q, 1, 1}));
  EXPECT_TRUE(params_admissible({6, 3, 2, 2}));
  EXPECT_THROW(params_admissible({3, 3, 2, 1}), ParameterError);
}

TEST(Params, LevelsMatchArithmetic) {
  for (std::int64_t n = 4; n < 30; ++n) {
    auto lv = admissibility_by_level({n, 3, 2, 1});
    ASSERT_EQ(lv.size(), 2u);
    EXPECT_EQ(lv[0], (n * (n - 1) / 2) % 3 == 0);
    EXPECT_EQ(lv[1], (n - 1) % 2 == 0);
  }
}

TEST(Subgraphs, Enumeration) {
  Hypergraph tri(5, 2, {{0, 1}, {0, 2}, {1, 2}});
  auto ls = divisible_subgraphs(tri, 3);
  ASSERT_EQ(ls.size(), 2u);
  Hypergraph x1(6, 1, {{0}, {1}, {2}, {3}, {4}, {5}});
  auto l1 = divisible_subgraphs(x1, 3);
  EXPECT_EQ(l1.size(), 22u);
  for (const auto& l : l1) EXPECT_EQ(l.size() % 3, 0u);
  Hypergraph path(3, 2, {{0, 1}, {1, 2}});
  auto lp = divisible_subgraphs(path, 3);
  ASSERT_EQ(lp.size(), 1u);
  EXPECT_TRUE(lp[0].empty());
}

TEST(Subgraphs, Sampling) {
  Hypergraph x1(6, 1, {{0}, {1}, {2}, {3}, {4}, {5}});
  auto a = sample_divisible_subgraphs(x1, 3, 200, 9);
  auto b = sample_divisible_subgraphs(x1, 3, 200, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  for (const auto& l : a) EXPECT_TRUE(is_divisible(l, 3));
  // 22 of 64 subsets are divisible.
  EXPECT_NEAR(static_cast<double>(a.size()) / 200.0, 22.0 / 64.0, 0.1);
}
