#include "oracles.hpp"

#include <absorb/fraclp.hpp>
#include <absorb/nibble.hpp>

#include <gtest/gtest.h>

using namespace absorb;

namespace {

// Packing edges plus leftover edges reproduce E(G) exactly once each.
bool conserves(const Hypergraph& g, const PackResult& res) {
  std::map<std::vector<Vertex>, int> cov;
  for (const Clique& c : res.packing.cliques)
    for (const auto& e : oracle::subsets(c.to_vector(), 2)) ++cov[e];
  for (const Edge& e : res.leftover.edges()) ++cov[e.to_vector()];
  auto es = oracle::edge_set(g);
  if (cov.size() != es.size()) return false;
  for (const auto& [e, k] : cov)
    if (k != 1 || !es.count(e)) return false;
  return true;
}

// i-subsets of the packing whose union has at most j vertices.
long long configurations_oracle(const std::vector<Clique>& p, int i, int j) {
  long long count = 0;
  const std::size_t m = p.size();
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    if (__builtin_popcountll(mask) != i) continue;
    std::set<Vertex> span;
    for (std::size_t t = 0; t < m; ++t)
      if (mask >> t & 1) span.insert(p[t].begin(), p[t].end());
    if (static_cast<int>(span.size()) <= j) ++count;
  }
  return count;
}

const std::vector<Clique> kPasch{{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}};

}  // namespace

TEST(Pack, K7Conservation) {
  auto k7 = Hypergraph::complete(7, 2);
  for (auto policy : {NibblePolicy::greedy, NibblePolicy::fewest_options})
    for (std::uint64_t s = 0; s < 10; ++s) {
      NibbleParams p;
      p.seed = s;
      p.policy = policy;
      auto res = random_greedy_pack(k7, 3, p);
      EXPECT_LE(res.packing.cliques.size(), 7u);
      EXPECT_TRUE(is_packing_of(res.packing, k7));
      EXPECT_TRUE(conserves(k7, res));
    }
}

TEST(Pack, BiteRounds) {
  auto k20 = Hypergraph::complete(20, 2);
  NibbleParams p;
  p.policy = NibblePolicy::greedy;
  p.bite = 0.1;
  p.seed = 4;
  auto res = random_greedy_pack(k20, 3, p);
  EXPECT_GT(res.rounds, 1);
  EXPECT_TRUE(conserves(k20, res));
  p.bite = 0;
  EXPECT_THROW(random_greedy_pack(k20, 3, p), ParameterError);
}

TEST(Pack, SourceRestriction) {
  auto k12 = Hypergraph::complete(12, 2);
  auto lp = fractional_decomposition(k12, 3);
  ASSERT_TRUE(lp.weighting);
  auto fam = boost_sample(*lp.weighting, default_boost_multiplier(12, 3, 2), 2);
  NibbleParams p;
  p.source = &fam.cliques;
  auto res = random_greedy_pack(k12, 3, p);
  std::set<Clique> members(fam.cliques.begin(), fam.cliques.end());
  for (const Clique& c : res.packing.cliques) EXPECT_TRUE(members.count(c));
  EXPECT_TRUE(conserves(k12, res));
}

TEST(Pack, Deterministic) {
  auto k30 = Hypergraph::complete(30, 2);
  NibbleParams p;
  p.seed = 77;
  EXPECT_EQ(random_greedy_pack(k30, 3, p).packing, random_greedy_pack(k30, 3, p).packing);
}

TEST(Pack, LeftoverSmallAtModerateSize) {
  auto k51 = Hypergraph::complete(51, 2);
  NibbleParams p;
  p.seed = 1;
  auto res = random_greedy_pack(k51, 3, p);
  EXPECT_LT(static_cast<double>(res.leftover.size()) / static_cast<double>(k51.size()), 0.1);
}

TEST(Reserves, ZeroProbability) {
  auto rs = generate_reserves(12, 3, 2, 0.0, 1);
  EXPECT_TRUE(rs.x.empty());
  for (const auto& [e, k] : rs.counts) EXPECT_EQ(k, 0);
}

TEST(Reserves, CountsMatchBruteForce) {
  auto rs = generate_reserves(20, 3, 2, 0.3, 9);
  auto xe = oracle::edge_set(rs.x);
  auto k20 = Hypergraph::complete(20, 2);
  ASSERT_EQ(rs.counts.size(), k20.size());
  for (const Edge& e : k20.edges()) {
    long long want = 0;
    for (Vertex w = 0; w < 20; ++w) {
      if (w == e[0] || w == e[1]) continue;
      if (xe.count({std::min(e[0], w), std::max(e[0], w)}) && xe.count({std::min(e[1], w), std::max(e[1], w)})) ++want;
    }
    EXPECT_EQ(rs.counts.at(e), want) << e;
  }
  std::int64_t maxdeg = 0;
  for (Vertex v = 0; v < 20; ++v) {
    std::int64_t d = 0;
    for (const auto& x : xe) d += (x[0] == v || x[1] == v);
    maxdeg = std::max(maxdeg, d);
  }
  EXPECT_EQ(rs.max_degree, maxdeg);
  EXPECT_DOUBLE_EQ(rs.degree_bound, 2 * 0.3 * 20);
  EXPECT_EQ(rs.degree_ok, maxdeg <= 12);
}

TEST(Reserves, FourCliquesMatchBruteForce) {
  auto rs = generate_reserves(10, 4, 2, 0.5, 3);
  auto xe = oracle::edge_set(rs.x);
  auto k10 = Hypergraph::complete(10, 2);
  for (const Edge& e : k10.edges()) {
    long long want = 0;
    for (const auto& c : oracle::subsets(oracle::range(10), 4)) {
      if (!std::includes(c.begin(), c.end(), e.begin(), e.end())) continue;
      bool ok = true;
      for (const auto& t : oracle::subsets(c, 2))
        if (t != e.to_vector() && !xe.count(t)) ok = false;
      want += ok;
    }
    EXPECT_EQ(rs.counts.at(e), want);
  }
}

TEST(Reserves, HighMinimumDegreeHost) {
  // delta(G) >= (1 - 1/(q+1) + 0.05) n for q = 3.
  Hypergraph g = oracle::random_graph(40, 0.97, 8);
  auto rs = generate_reserves(40, 3, 2, 0.3, 2, &g);
  ASSERT_TRUE(rs.host_min_degree_ok.has_value());
  EXPECT_TRUE(*rs.host_min_degree_ok);
  EXPECT_TRUE(rs.high_min_degree_ok.has_value());
  EXPECT_TRUE(rs.high_min_degree_bound.has_value());
  for (const Edge& e : rs.x.edges()) EXPECT_TRUE(g.contains(e));
}

TEST(Complete, EmptyLeftover) {
  auto k7 = Hypergraph::complete(7, 2);
  Hypergraph g(7, 2, {{0, 1}, {0, 2}, {1, 2}});
  Hypergraph x = difference(k7, g);
  Packing partial{7, 3, 2, {{0, 1, 2}}};
  auto c = complete_with_reserves(g, x, partial, 3, 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->packing, partial);
  EXPECT_TRUE(c->added.empty());
}

TEST(Complete, SingleEdge) {
  Hypergraph g(5, 2, {{0, 1}});
  Hypergraph x(5, 2, {{0, 4}, {1, 4}});
  auto c = complete_with_reserves(g, x, Packing{5, 3, 2, {}}, 3, 1);
  ASSERT_TRUE(c);
  ASSERT_EQ(c->added.size(), 1u);
  EXPECT_EQ(c->added[0], (Clique{0, 1, 4}));
  Hypergraph none(5, 2, {{0, 4}});
  EXPECT_FALSE(complete_with_reserves(g, none, Packing{5, 3, 2, {}}, 3, 1));
}

TEST(Complete, AfterNibble) {
  const int n = 40;
  auto kn = Hypergraph::complete(n, 2);
  auto rs = generate_reserves(n, 3, 2, 0.3, 6);
  Hypergraph g = difference(kn, rs.x);
  NibbleParams p;
  p.seed = 6;
  auto scarce = scarce_reserve_edges(g, rs.x, 3, 1);
  p.priority = &scarce;
  auto res = random_greedy_pack(g, 3, p);
  auto c = complete_with_reserves(g, rs.x, res.packing, 3, 6);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->added.size(), res.leftover.size());
  // Each added clique has exactly one edge in G; X edges used at most once.
  std::map<std::vector<Vertex>, int> used;
  for (const Clique& k : c->added) {
    int in_g = 0;
    for (const auto& e : oracle::subsets(k.to_vector(), 2)) {
      if (g.contains(Edge(e))) ++in_g;
      else {
        EXPECT_TRUE(rs.x.contains(Edge(e)));
        ++used[e];
      }
    }
    EXPECT_EQ(in_g, 1);
  }
  for (const auto& [e, k] : used) EXPECT_EQ(k, 1);
  EXPECT_TRUE(is_packing_of(c->packing, union_of(g, rs.x)));
}

TEST(Configurations, SmallCases) {
  Packing bow{5, 3, 2, {{0, 1, 2}, {2, 3, 4}}};
  EXPECT_EQ(configurations(bow, 2, 5).count, 1);
  EXPECT_EQ(configurations(bow, 2, 4).count, 0);
  Packing pasch{6, 3, 2, kPasch};
  EXPECT_EQ(configurations(pasch, 4, 6).count, 1);
  EXPECT_EQ(girth(pasch, 3, 2, 6), 4);
  EXPECT_EQ(girth(Packing{6, 3, 2, {}}, 3, 2, 5), std::nullopt);
}

TEST(Configurations, MatchNaiveOracle) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Hypergraph g = Hypergraph::complete(10, 2);
    NibbleParams p;
    p.seed = 300 + s;
    p.policy = NibblePolicy::greedy;
    auto res = random_greedy_pack(g, 3, p);
    auto& cl = res.packing.cliques;
    if (cl.size() > 12) cl.resize(12);
    for (auto [i, j] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {3, 6}, {3, 7}, {4, 6}, {4, 7}, {5, 8}})
      EXPECT_EQ(configurations(res.packing, i, j).count, configurations_oracle(cl, i, j)) << s << " " << i << "," << j;
    auto gi = girth(res.packing, 3, 2, 5);
    EXPECT_NE(gi, 2);
  }
}

TEST(HighGirth, PaschFree) {
  auto k30 = Hypergraph::complete(30, 2);
  NibbleParams p;
  p.seed = 3;
  auto res = high_girth_pack(k30, 3, 4, p);
  EXPECT_EQ(configurations(res.packing, 4, 6).count, 0);
  EXPECT_EQ(configurations(res.packing, 3, 5).count, 0);
  EXPECT_EQ(girth(res.packing, 3, 2, 4), std::nullopt);
  EXPECT_TRUE(conserves(k30, res));
}

TEST(HighGirth, GirthTwoIsPlainGreedy) {
  auto k20 = Hypergraph::complete(20, 2);
  NibbleParams p;
  p.seed = 8;
  p.policy = NibblePolicy::greedy;
  EXPECT_EQ(high_girth_pack(k20, 3, 2, p).packing, random_greedy_pack(k20, 3, p).packing);
}

TEST(Spread, ExactSts7) {
  auto k7 = Hypergraph::complete(7, 2);
  ExactSpread ex = spread_exact(k7, 3, {1, 2});
  EXPECT_EQ(ex.decompositions, 30);
  EXPECT_EQ(ex.containment.size(), 35u);
  mpq_class fifth(1, 5);
  for (const auto& [c, pr] : ex.containment) EXPECT_EQ(pr, fifth) << c;
  ASSERT_EQ(ex.sigma.size(), 2u);
  EXPECT_NEAR(ex.sigma[0].second, 0.2, 1e-12);
}

TEST(Spread, DeterministicSampler) {
  auto k7 = Hypergraph::complete(7, 2);
  auto d = find_decomposition(k7, 3);
  ASSERT_TRUE(d);
  DecompositionSampler same = [&](std::uint64_t) { return std::optional<std::vector<Clique>>(d->cliques()); };
  auto rep = spread_estimate(same, {1, 2}, 20, 1);
  EXPECT_DOUBLE_EQ(rep.per_size[0].sigma_hat, 1.0);
  EXPECT_DOUBLE_EQ(rep.per_size[1].sigma_hat, 1.0);
  DecompositionSampler broken = [](std::uint64_t) { return std::optional<std::vector<Clique>>(); };
  EXPECT_THROW(spread_estimate(broken, {1}, 10, 1), ReliabilityError);
}

TEST(Spread, MonteCarloIsConsistent) {
  auto k7 = Hypergraph::complete(7, 2);
  auto all = all_decompositions(k7, 3, 100);
  DecompositionSampler uni = [&](std::uint64_t s) {
    Rng rng(s);
    return std::optional<std::vector<Clique>>(all[rng.below(all.size())].cliques());
  };
  auto a = spread_estimate(uni, {1}, 2000, 1);
  auto b = spread_estimate(uni, {1}, 4000, 2);
  const double se = std::sqrt(0.2 * 0.8 / 2000);
  EXPECT_GE(a.per_size[0].sigma_hat, 0.2 - 3 * se);
  EXPECT_NEAR(a.per_size[0].sigma_hat, b.per_size[0].sigma_hat, 6 * se);
}
