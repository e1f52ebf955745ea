#include "oracles.hpp"

#include <absorb/embed.hpp>
#include <absorb/exactcover.hpp>
#include <absorb/omni.hpp>

#include <gtest/gtest.h>

using namespace absorb;

namespace {

// Root-fixing injective maps of the non-root vertices, all images of W's
// edges in G, by trying every ordered tuple.
long long count_oracle(const RootedGadget& w, const Hypergraph& g) {
  std::set<Vertex> roots(w.roots.begin(), w.roots.end());
  std::vector<Vertex> free;
  for (Vertex v : w.w.touched_vertices())
    if (!roots.count(v)) free.push_back(v);
  auto es = oracle::edge_set(g);
  long long count = 0;
  std::vector<Vertex> img(free.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == free.size()) {
      std::map<Vertex, Vertex> phi;
      for (std::size_t k = 0; k < free.size(); ++k) phi[free[k]] = img[k];
      for (const Edge& e : w.w.edges()) {
        std::vector<Vertex> t;
        for (Vertex x : e) t.push_back(phi.count(x) ? phi[x] : x);
        std::sort(t.begin(), t.end());
        if (!es.count(t)) return;
      }
      ++count;
      return;
    }
    for (Vertex v = 0; v < static_cast<Vertex>(g.n()); ++v) {
      if (roots.count(v) || std::find(img.begin(), img.begin() + static_cast<long>(i), v) != img.begin() + static_cast<long>(i)) continue;
      img[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

}  // namespace

TEST(Count, AntiEdgeIntoComplete) {
  for (int n : {5, 8, 12}) {
    auto kn = Hypergraph::complete(n, 2);
    EXPECT_EQ(count_rooted_embeddings(anti_edge(Edge{0, 1}, 3), kn, {}, 1'000'000), n - 2);
  }
}

TEST(Count, AntiEdgeWithoutCandidates) {
  Hypergraph star(6, 2, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(count_rooted_embeddings(anti_edge(Edge{0, 1}, 3), star, {}, 1000), 0);
}

TEST(Count, FakeEdgeMatchesBruteForce) {
  RootedGadget f = fake_edge(Edge{0, 1}, 3);
  auto k10 = Hypergraph::complete(10, 2);
  EXPECT_EQ(count_rooted_embeddings(f, k10, {}, 1'000'000), count_oracle(f, k10));
  for (std::uint64_t s = 0; s < 5; ++s) {
    Hypergraph g = oracle::random_graph(10, 0.6, 70 + s);
    EXPECT_EQ(count_rooted_embeddings(f, g, {}, 1'000'000), count_oracle(f, g)) << "seed " << s;
  }
}

TEST(Embed, SingleAntiEdge) {
  SupergraphSystem s;
  s.j = MultiHypergraph(10, 2);
  s.j.add(Edge{0, 1});
  Hypergraph h(10, 2, {{0, 1}});
  RootedGadget w = anti_edge(Edge{0, 1}, 3);
  w.w.resize(10);
  w.w.add(Edge{0, 1});
  s.h = {h};
  s.w = {w};
  auto k10 = Hypergraph::complete(10, 2);
  auto emb = embed_system(s, k10, 1);
  ASSERT_TRUE(emb);
  EXPECT_EQ(emb->image.size(), 2u);
  EXPECT_TRUE(verify_embedding(s, k10, *emb, 8));
}

TEST(Embed, FakeEdgesOnSts7) {
  auto k7 = Hypergraph::complete(7, 2);
  auto sts = find_decomposition(k7, 3);
  ASSERT_TRUE(sts);
  SupergraphSystem s;
  s.j = MultiHypergraph::from_simple(k7);
  s.j.resize(30);
  FreshVertices fresh{7};
  for (const Clique& t : sts->cliques()) {
    Hypergraph h(30, 2);
    for (const auto& e : oracle::subsets(t.to_vector(), 2)) h.add(Edge(e));
    RootedGadget f = fake_edge(Edge{t[0], t[1]}, 3, fresh);
    Hypergraph w = h;
    for (const Edge& e : f.w.edges()) w.add(e);
    s.w.push_back({w, t.to_vector()});
    s.h.push_back(h);
  }
  auto k30 = Hypergraph::complete(30, 2);
  auto emb = embed_system(s, k30, 11);
  ASSERT_TRUE(emb);
  // 7 gadgets x 4 new edges, pairwise disjoint and off K_7.
  EXPECT_EQ(emb->image.size(), 28u);
  for (const Edge& e : emb->image.edges()) EXPECT_FALSE(e[1] < 7);
  EXPECT_TRUE(verify_embedding(s, k30, *emb, 8 * 6));
  auto again = embed_system(s, k30, 11);
  ASSERT_TRUE(again);
  EXPECT_EQ(again->image, emb->image);
}

TEST(Embed, TooFewVertices) {
  SupergraphSystem s;
  s.j = MultiHypergraph(4, 2);
  s.j.add(Edge{0, 1});
  Hypergraph h(4, 2, {{0, 1}});
  RootedGadget f = fake_edge(Edge{0, 1}, 3);
  Hypergraph w = h;
  w.resize(f.w.n());
  for (const Edge& e : f.w.edges()) w.add(e);
  s.h = {h};
  s.w = {{w, {0, 1}}};
  auto k4 = Hypergraph::complete(4, 2);
  EXPECT_FALSE(embed_system(s, k4, 1, EmbedOptions{0, 3, 10000}));
}

TEST(Embed, RejectsInvalidSystems) {
  SupergraphSystem s;
  s.j = MultiHypergraph(6, 2);
  s.j.add(Edge{0, 1});
  s.h = {Hypergraph(6, 2, {{0, 1}})};
  s.w = {{Hypergraph(6, 2, {{0, 2}}), {0, 1}}};
  EXPECT_FALSE(check_system(s).empty());
  EXPECT_THROW(embed_system(s, Hypergraph::complete(6, 2), 1), PreconditionError);
}

TEST(RefinedFamily, Cases) {
  auto k5 = Hypergraph::complete(5, 2);
  std::vector<Hypergraph> tris;
  for (const Clique& t : enumerate_cliques(k5, 3)) {
    Hypergraph h(5, 2);
    for (const auto& e : oracle::subsets(t.to_vector(), 2)) h.add(Edge(e));
    tris.push_back(h);
  }
  auto j = MultiHypergraph::from_simple(k5);
  EXPECT_FALSE(check_refined_family(tris, j, 2));
  EXPECT_TRUE(check_refined_family(tris, j, 3));
  EXPECT_TRUE(check_refined_family({}, j, 0));

  std::vector<Edge> xs;
  for (Vertex v = 0; v < 6; ++v) xs.push_back(Edge{v});
  auto omni = omni_1d(Hypergraph(6, 1, xs), 3);
  std::vector<Hypergraph> fam;
  for (const Clique& c : omni.family) {
    Hypergraph h(omni.a.n(), 1);
    for (Vertex v : c) h.add(Edge{v});
    fam.push_back(h);
  }
  MultiHypergraph ja = MultiHypergraph::from_simple(union_of(omni.x, omni.a));
  EXPECT_TRUE(check_refined_family(fam, ja, 6));
}
