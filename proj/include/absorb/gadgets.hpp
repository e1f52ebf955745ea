#pragma once

#include <absorb/divide.hpp>
#include <absorb/exactcover.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/integral.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace absorb {

/// Monotone fresh-vertex counter. Concurrent constructions use disjoint ranges.
struct FreshVertices {
  Vertex next = 0;
  Vertex take() { return next++; }
};

/// A gadget W together with the vertices it shares with its base.
struct RootedGadget {
  Hypergraph w;
  std::vector<Vertex> roots;  // ascending
};

struct Booster {
  Hypergraph b;
  int q = 0;
  std::vector<Clique> on, off;
};

inline bool is_booster(const Booster& bs) {
  std::unordered_set<Clique> on(bs.on.begin(), bs.on.end());
  for (const Clique& c : bs.off)
    if (on.count(c)) return false;
  return decomposes(bs.on, bs.q, bs.b) && decomposes(bs.off, bs.q, bs.b);
}

inline Booster swapped(Booster bs) {
  std::swap(bs.on, bs.off);
  return bs;
}

// ---------------------------------------------------------------------------
// Anti-edges and fake-edges

inline RootedGadget anti_edge(const Edge& e, int q, FreshVertices& fresh) {
  const int r = static_cast<int>(e.size());
  if (q <= r) throw ParameterError("anti-edge needs q > |e|");
  if (!e.empty() && e.back() >= fresh.next) fresh.next = e.back() + 1;
  std::vector<Vertex> vs = e.to_vector();
  for (int i = 0; i < q - r; ++i) vs.push_back(fresh.take());
  Clique k(vs);
  std::vector<Edge> es;
  for_each_subset(k, static_cast<std::size_t>(r), [&](const Edge& t) {
    if (t != e) es.push_back(t);
  });
  return {Hypergraph(static_cast<int>(fresh.next), r, std::move(es)), e.to_vector()};
}

inline RootedGadget anti_edge(const Edge& e, int q) {
  FreshVertices f{e.empty() ? 0 : e.back() + 1};
  return anti_edge(e, q, f);
}

inline RootedGadget fake_edge(const Edge& f, int q, FreshVertices& fresh) {
  const int r = static_cast<int>(f.size());
  if (q <= r) throw ParameterError("fake-edge needs q > |f|");
  if (!f.empty() && f.back() >= fresh.next) fresh.next = f.back() + 1;
  SortedTuple core = f;
  for (int i = 0; i < q - r; ++i) core = core.with(fresh.take());
  std::vector<Edge> es;
  for_each_subset(core, static_cast<std::size_t>(r), [&](const Edge& t) {
    if (t == f) return;
    RootedGadget a = anti_edge(t, q, fresh);
    es.insert(es.end(), a.w.edges().begin(), a.w.edges().end());
  });
  return {Hypergraph(static_cast<int>(fresh.next), r, std::move(es)), f.to_vector()};
}

inline RootedGadget fake_edge(const Edge& f, int q) {
  FreshVertices fr{f.empty() ? 0 : f.back() + 1};
  return fake_edge(f, q, fr);
}

/// Does replacing f by W keep the divisibility verdict of G?
inline bool is_divisibility_equivalent(const Hypergraph& g, const Edge& f, const RootedGadget& w, int q) {
  if (!g.contains(f)) throw ParameterError("edge {" + f.str() + "} is not in G");
  if (w.roots != f.to_vector()) throw ParameterError("gadget is not rooted at {" + f.str() + "}");
  if (w.w.r() != g.r()) throw ParameterError("uniformity mismatch");
  MultiHypergraph h(std::max(g.n(), w.w.n()), g.r());
  for (const Edge& e : g.edges())
    if (e != f) h.add(e);
  for (const Edge& e : w.w.edges()) h.add(e);
  return is_divisible(g, q) == is_divisible(h, q);
}

// ---------------------------------------------------------------------------
// Boosters

inline std::optional<Booster> find_booster(int q, int r, const Hypergraph& host,
                                           std::int64_t budget = kDefaultNodeBudget) {
  if (host.r() != r) throw ParameterError("host uniformity differs from r");
  auto two = find_two_disjoint_decompositions(host, q, nullptr, budget);
  if (!two) return std::nullopt;
  return Booster{host, q, two->first.cliques(), two->second.cliques()};
}

inline Booster trivial_booster_1d(int q) {
  if (q < 2) throw ParameterError("1-uniform booster needs q >= 2");
  const auto n = static_cast<Vertex>(2 * q);
  std::vector<Edge> es;
  for (Vertex v = 0; v < n; ++v) es.push_back({v});
  Booster bs{Hypergraph(static_cast<int>(n), 1, std::move(es)), q, {}, {}};
  if (q == 2) {
    bs.on = {{0, 1}, {2, 3}};
    bs.off = {{0, 2}, {1, 3}};
  } else {
    std::vector<Vertex> top, bottom, a, b;
    for (Vertex i = 0; i < static_cast<Vertex>(q); ++i) {
      top.push_back(i);
      bottom.push_back(static_cast<Vertex>(q) + i);
    }
    for (Vertex i = 0; i + 1 < static_cast<Vertex>(q); ++i) {
      a.push_back(i);
      b.push_back(static_cast<Vertex>(q) + i);
    }
    a.push_back(n - 1);
    b.push_back(static_cast<Vertex>(q) - 1);
    bs.on = {Clique(top), Clique(bottom)};
    bs.off = {Clique(a), Clique(b)};
  }
  ensure(is_booster(bs), "1-uniform booster failed verification");
  return bs;
}

/// k x k grid, rows against columns. Any two members share at most one
/// vertex, which is what booster_lift needs.
inline Booster grid_booster_1d(int k) {
  if (k < 2) throw ParameterError("grid booster needs k >= 2");
  std::vector<Edge> es;
  for (int v = 0; v < k * k; ++v) es.push_back({static_cast<Vertex>(v)});
  Booster bs{Hypergraph(k * k, 1, std::move(es)), k, {}, {}};
  for (int i = 0; i < k; ++i) {
    std::vector<Vertex> row, col;
    for (int j = 0; j < k; ++j) {
      row.push_back(static_cast<Vertex>(i * k + j));
      col.push_back(static_cast<Vertex>(j * k + i));
    }
    bs.on.emplace_back(row);
    bs.off.emplace_back(col);
  }
  ensure(is_booster(bs), "grid booster failed verification");
  return bs;
}

inline Booster booster_lift(const Booster& bp) {
  const int r = bp.b.r() + 1;
  const int q = bp.q + 1;
  const auto u = static_cast<Vertex>(bp.b.n());
  const Vertex v = u + 1;
  std::vector<Edge> es;
  for (const Edge& e : bp.b.edges()) {
    es.push_back(e.with(u));
    es.push_back(e.with(v));
  }
  auto add_subsets = [&](const std::vector<Clique>& fam) {
    for (const Clique& c : fam) for_each_subset(c, static_cast<std::size_t>(r), [&](const Edge& t) { es.push_back(t); });
  };
  add_subsets(bp.on);
  add_subsets(bp.off);
  std::sort(es.begin(), es.end());
  if (std::adjacent_find(es.begin(), es.end()) != es.end())
    throw ConstructionError("lifted booster has a repeated edge; the base cliques overlap in an r-set");
  Booster out{Hypergraph(static_cast<int>(v) + 1, r, std::move(es)), q, {}, {}};
  for (const Clique& c : bp.on) {
    out.on.push_back(c.with(u));
    out.off.push_back(c.with(v));
  }
  for (const Clique& c : bp.off) {
    out.on.push_back(c.with(v));
    out.off.push_back(c.with(u));
  }
  if (!is_booster(out)) throw ConstructionError("lifted booster failed verification");
  return out;
}

/// Lift chain from a 1-uniform grid booster up to uniformity r.
inline Booster default_booster(int q, int r) {
  if (r < 1 || q <= r) throw ParameterError("booster needs q > r >= 1");
  Booster b = grid_booster_1d(q - r + 1);
  for (int i = 1; i < r; ++i) b = booster_lift(b);
  return b;
}

// Copy of bs with `root` (a member of on or off) mapped onto `target` in
// sorted order and every other vertex fresh.
struct PlacedBooster {
  Booster bs;
  std::unordered_map<Vertex, Vertex> map;
};

inline PlacedBooster place_booster(const Booster& bs, const Clique& root, const Clique& target, FreshVertices& fresh) {
  if (root.size() != target.size()) throw ParameterError("root and target sizes differ");
  PlacedBooster p;
  for (std::size_t i = 0; i < root.size(); ++i) p.map[root[i]] = target[i];
  for (Vertex x = 0; x < static_cast<Vertex>(bs.b.n()); ++x)
    if (!p.map.count(x)) p.map[x] = fresh.take();
  std::vector<Edge> es;
  for (const Edge& e : bs.b.edges()) es.push_back(relabel(e, p.map));
  p.bs = Booster{Hypergraph(static_cast<int>(fresh.next), bs.b.r(), std::move(es)), bs.q, {}, {}};
  for (const Clique& c : bs.on) p.bs.on.push_back(relabel(c, p.map));
  for (const Clique& c : bs.off) p.bs.off.push_back(relabel(c, p.map));
  return p;
}

struct LayeredBooster {
  Booster bs;
  Clique root;    // in bs.off
  Clique mirror;  // in bs.off, vertex-disjoint from root on success
  int layers = 0;
};

/// Glues copies of `base` at the mirror clique until mirror and root share no
/// vertex. Each copy's on-clique is identified with the current mirror and
/// one of its off-cliques becomes the new mirror. Capped at binom(q, r) layers.
inline LayeredBooster orthogonal_booster(const Booster& base, const Clique& root, const Clique& mirror) {
  const auto in = [](const std::vector<Clique>& fam, const Clique& c) {
    return std::find(fam.begin(), fam.end(), c) != fam.end();
  };
  if (!in(base.off, root) || !in(base.off, mirror) || root == mirror)
    throw ParameterError("root and mirror must be distinct off-cliques");
  const int q = base.q, r = base.b.r();
  LayeredBooster cur{base, root, mirror, 0};
  const auto cap = static_cast<int>(binom(q, r));
  while (cur.mirror.intersection_size(cur.root) > 0) {
    if (cur.layers >= cap)
      throw ConstructionError("orthogonal layering did not separate mirror from root within binom(q, r) layers");
    // Pick the glue clique R2 in base.on and new mirror M2 in base.off with the
    // least forced overlap, mapping R2 ∩ M2 onto mirror vertices outside root.
    std::vector<Vertex> outside, inside;
    for (Vertex x : cur.mirror) (cur.root.contains(x) ? inside : outside).push_back(x);
    std::size_t best = SIZE_MAX;
    Clique r2, m2;
    for (const Clique& a : base.on)
      for (const Clique& b : base.off) {
        std::size_t ov = a.intersection_size(b);
        std::size_t forced = ov > outside.size() ? ov - outside.size() : 0;
        if (forced < best) {
          best = forced;
          r2 = a;
          m2 = b;
        }
      }
    std::vector<Vertex> shared, rest;
    for (Vertex x : r2) (m2.contains(x) ? shared : rest).push_back(x);
    std::vector<Vertex> pool = outside;
    pool.insert(pool.end(), inside.begin(), inside.end());
    FreshVertices fresh{static_cast<Vertex>(cur.bs.b.n())};
    std::unordered_map<Vertex, Vertex> map;
    std::size_t k = 0;
    for (Vertex x : shared) map[x] = pool[k++];
    for (Vertex x : rest) map[x] = pool[k++];
    for (Vertex x = 0; x < static_cast<Vertex>(base.b.n()); ++x)
      if (!map.count(x)) map[x] = fresh.take();
    std::vector<Edge> es = cur.bs.b.edges();
    const std::unordered_set<Edge> glue_edges = [&] {
      std::unordered_set<Edge> s;
      for_each_subset(cur.mirror, static_cast<std::size_t>(r), [&](const Edge& e) { s.insert(e); });
      return s;
    }();
    for (const Edge& e : base.b.edges()) {
      Edge t = relabel(e, map);
      if (!glue_edges.count(t)) es.push_back(t);
    }
    Booster next{Hypergraph(static_cast<int>(fresh.next), r, std::move(es)), q, cur.bs.on, {}};
    const Clique glued = relabel(r2, map);
    for (const Clique& c : base.on)
      if (c != r2) next.on.push_back(relabel(c, map));
    for (const Clique& c : cur.bs.off)
      if (c != cur.mirror) next.off.push_back(c);
    for (const Clique& c : base.off) next.off.push_back(relabel(c, map));
    ensure(glued == cur.mirror, "glue clique was not mapped onto the mirror");
    if (!is_booster(next)) throw ConstructionError("layered booster failed verification");
    cur = LayeredBooster{std::move(next), cur.root, relabel(m2, map), cur.layers + 1};
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Rooted girth and degeneracy

/// Smallest g with g members of P spanning fewer than (q-r)g vertices outside S;
/// nullopt means infinity.
inline std::optional<int> rooted_girth(const Packing& p, const std::vector<Vertex>& s, int q, int r) {
  if (p.cliques.empty()) throw ParameterError("rooted girth needs a nonempty packing");
  if (p.cliques.size() > 20) throw CapacityError("rooted girth brute force is capped at 20 cliques");
  const std::unordered_set<Vertex> roots(s.begin(), s.end());
  const std::size_t m = p.cliques.size();
  std::vector<Vertex> all;
  for (const Clique& c : p.cliques)
    for (Vertex v : c)
      if (!roots.count(v)) all.push_back(v);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() > 64 * 4) throw CapacityError("too many non-root vertices");
  // Non-root vertex sets as bitmasks over `all`.
  const std::size_t words = (all.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> mask(m, std::vector<std::uint64_t>(std::max<std::size_t>(words, 1), 0));
  for (std::size_t i = 0; i < m; ++i)
    for (Vertex v : p.cliques[i])
      if (!roots.count(v)) {
        auto idx = static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), v) - all.begin());
        mask[i][idx >> 6] |= 1ULL << (idx & 63);
      }
  for (int g = 1; g <= static_cast<int>(m); ++g) {
    bool found = false;
    for_each_combination(m, static_cast<std::size_t>(g), [&](const SortedTuple& sub) {
      if (found) return;
      std::vector<std::uint64_t> u(mask[0].size(), 0);
      for (Vertex i : sub)
        for (std::size_t w = 0; w < u.size(); ++w) u[w] |= mask[i][w];
      std::int64_t cnt = 0;
      for (auto w : u) cnt += __builtin_popcountll(w);
      if (cnt < static_cast<std::int64_t>(q - r) * g) found = true;
    });
    if (found) return g;
  }
  return std::nullopt;
}

/// Smallest-last peeling of non-root vertices; neighbours count among roots
/// and not-yet-removed vertices.
inline int rooted_degeneracy(const RootedGadget& g) {
  if (g.w.r() != 2) throw UnsupportedError("rooted degeneracy is defined for graphs (r = 2) only");
  std::unordered_map<Vertex, std::vector<Vertex>> adj;
  for (const Edge& e : g.w.edges()) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  const std::unordered_set<Vertex> roots(g.roots.begin(), g.roots.end());
  std::unordered_map<Vertex, int> deg;
  for (const auto& [v, ns] : adj)
    if (!roots.count(v)) deg[v] = static_cast<int>(ns.size());
  int best = 0;
  while (!deg.empty()) {
    auto it = std::min_element(deg.begin(), deg.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    Vertex v = it->first;
    best = std::max(best, it->second);
    deg.erase(it);
    for (Vertex w : adj[v]) {
      auto jt = deg.find(w);
      if (jt != deg.end()) --jt->second;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Absorbers

struct AbsorberCertificate {
  Hypergraph a;
  Hypergraph l;
  int q = 0;
  Decomposition d1;  // of A ∪ L
  Decomposition d2;  // of A
  std::string method;

  RootedGadget gadget() const { return {a, l.touched_vertices()}; }
};

/// Independence of V(L) in A plus both decompositions, checked from scratch.
inline bool verify_absorber(const AbsorberCertificate& c) {
  const auto vl = c.l.touched_vertices();
  const std::unordered_set<Vertex> vs(vl.begin(), vl.end());
  for (const Edge& e : c.a.edges())
    if (std::all_of(e.begin(), e.end(), [&](Vertex x) { return vs.count(x) != 0; })) return false;
  Hypergraph al = union_of(c.a, c.l);
  if (al.size() != c.a.size() + c.l.size()) return false;
  return decomposes(c.d1.cliques(), c.q, al) && decomposes(c.d2.cliques(), c.q, c.a);
}

/// Every edge's trace on V(L) lies inside a single edge of L.
inline bool is_edge_intersecting(const RootedGadget& w, const Hypergraph& l) {
  const auto vl = l.touched_vertices();
  const std::unordered_set<Vertex> vs(vl.begin(), vl.end());
  for (const Edge& e : w.w.edges()) {
    std::vector<Vertex> tr;
    for (Vertex x : e)
      if (vs.count(x)) tr.push_back(x);
    if (tr.empty()) continue;
    SortedTuple t = SortedTuple::from_sorted(tr);
    bool ok = false;
    for (const Edge& f : l.edges())
      if (t.is_subset_of(f)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

struct AbsorberOptions {
  Vertex fresh_start = 0;       // first fresh id is max(fresh_start, L.n())
  std::size_t max_edges = 12;   // 6 when r >= 3
  bool search_boosters = false;
  std::int64_t budget = kDefaultNodeBudget;
};

namespace detail {

inline Booster absorber_booster(int q, int r, const AbsorberOptions& opt) {
  if (!opt.search_boosters) return default_booster(q, r);
  const int n = std::max(q + r + 2, 2 * q + 1);
  auto b = find_booster(q, r, Hypergraph::complete(n, r), opt.budget);
  if (!b) throw ConstructionError("booster search found no booster on K_" + std::to_string(n));
  return *b;
}

inline AbsorberCertificate finish(Hypergraph l, int q, int n, std::vector<Edge> a_edges, std::vector<Clique> d1,
                                  std::vector<Clique> d2, std::string method) {
  Hypergraph a(n, l.r(), std::move(a_edges));
  l.resize(n);
  Hypergraph al = union_of(a, l);
  AbsorberCertificate c{a, l, q, Decomposition::make(al, q, std::move(d1)), Decomposition::make(a, q, std::move(d2)),
                        std::move(method)};
  if (!verify_absorber(c)) throw ConstructionError("absorber failed verification");
  return c;
}

// A = union over cliques Q of L's decomposition of (B_Q minus its root Q).
inline AbsorberCertificate booster_minus_root(const Hypergraph& l, int q, const std::vector<Clique>& parts,
                                              const AbsorberOptions& opt, FreshVertices& fresh, const char* method) {
  Booster base = absorber_booster(q, l.r(), opt);
  const Clique root = base.off.front();
  std::vector<Edge> a;
  std::vector<Clique> d1, d2;
  for (const Clique& part : parts) {
    PlacedBooster pb = place_booster(base, root, part, fresh);
    std::unordered_set<Edge> root_edges;
    for_each_subset(part, static_cast<std::size_t>(l.r()), [&](const Edge& e) { root_edges.insert(e); });
    for (const Edge& e : pb.bs.b.edges())
      if (!root_edges.count(e)) a.push_back(e);
    d1.insert(d1.end(), pb.bs.on.begin(), pb.bs.on.end());
    for (const Clique& c : pb.bs.off)
      if (c != part) d2.push_back(c);
  }
  return finish(l, q, static_cast<int>(fresh.next), std::move(a), std::move(d1), std::move(d2), method);
}

}  // namespace detail

/// Absorber for L. Single cliques get a booster minus its root; other
/// triangle targets go through an integral decomposition whose cliques become
/// anti-cliques discharged by boosters; anything else falls back to
/// decomposing L directly and attaching one booster per clique.
inline AbsorberCertificate build_absorber(const Hypergraph& l, int q, const AbsorberOptions& opt = {}) {
  const int r = l.r();
  if (q <= r) throw ParameterError("clique size q must exceed uniformity r");
  const std::size_t cap = r >= 3 ? std::min<std::size_t>(opt.max_edges, 6) : opt.max_edges;
  if (l.size() > cap) throw CapacityError("absorber target has more than " + std::to_string(cap) + " edges");
  if (!is_divisible(l, q)) throw PreconditionError("absorber target is not divisible");
  FreshVertices fresh{std::max<Vertex>(opt.fresh_start, static_cast<Vertex>(l.n()))};
  if (l.empty()) return detail::finish(l, q, static_cast<int>(fresh.next), {}, {}, {}, "empty");

  const auto vl = l.touched_vertices();
  if (vl.size() == static_cast<std::size_t>(q) && l.size() == binom(q, r))
    return detail::booster_minus_root(l, q, {Clique(vl)}, opt, fresh, "booster-minus-root");

  if (q == 3 && r == 2) {
    // Integral decomposition on V(L), padded to q + r vertices.
    const int k = static_cast<int>(vl.size());
    const int nloc = std::max(k, q + r);
    std::unordered_map<Vertex, Vertex> to_local;
    for (int i = 0; i < k; ++i) to_local[vl[static_cast<std::size_t>(i)]] = static_cast<Vertex>(i);
    Hypergraph lloc = relabel(l, to_local, nloc);
    auto phi = integral_decomposition(lloc, q, true);
    if (!phi) throw ConstructionError("divisible target has no integral decomposition");
    MultiAbsorber ma = multi_absorber(lloc, *phi);

    std::vector<Vertex> global(static_cast<std::size_t>(nloc), 0);
    for (int i = 0; i < k; ++i) global[static_cast<std::size_t>(i)] = vl[static_cast<std::size_t>(i)];
    for (int i = k; i < nloc; ++i) global[static_cast<std::size_t>(i)] = fresh.take();
    auto g = [&](Vertex x) { return global[x]; };

    std::vector<Edge> a;
    std::vector<Clique> d1, d2;
    // One anti-edge (fresh apex) per occurrence of an edge in L ⊎ A.
    std::map<Edge, std::vector<Vertex>> pool1, pool2;
    std::map<Edge, Vertex> l_apex;
    auto new_occurrence = [&](const Edge& e) {
      Vertex x = fresh.take();
      a.push_back({g(e[0]), x});
      a.push_back({g(e[1]), x});
      return x;
    };
    for (const Edge& e : lloc.edges()) {
      Vertex x = new_occurrence(e);
      l_apex[e] = x;
      pool1[e].push_back(x);
      d1.push_back({g(e[0]), g(e[1]), x});
    }
    for (const auto& [e, mult] : ma.a.multiplicities())
      for (std::int64_t t = 0; t < mult; ++t) {
        Vertex x = new_occurrence(e);
        pool1[e].push_back(x);
        pool2[e].push_back(x);
      }

    Booster base = detail::absorber_booster(q, r, opt);
    const Clique root = base.off.front();
    // side 1: clique of Q1 (A ∪ L side), side 2: clique of Q2 (A side).
    auto discharge = [&](const Clique& qc, std::map<Edge, std::vector<Vertex>>& pool, bool side1) {
      std::map<Edge, Vertex> apex;
      for_each_subset(qc, 2, [&](const Edge& e) {
        auto& p = pool.at(e);
        ensure(!p.empty(), "occurrence pool exhausted");
        apex[e] = p.back();
        p.pop_back();
      });
      std::vector<Vertex> dual;
      for (const auto& [e, x] : apex) dual.push_back(x);
      Clique s(dual);
      std::vector<Clique> tris;
      for (Vertex v : qc) {
        std::vector<Vertex> t{g(v)};
        for (const auto& [e, x] : apex)
          if (e.contains(v)) t.push_back(x);
        tris.emplace_back(t);
      }
      PlacedBooster pb = place_booster(base, root, s, fresh);
      a.insert(a.end(), pb.bs.b.edges().begin(), pb.bs.b.edges().end());
      auto& via_on = side1 ? d1 : d2;
      auto& via_tri = side1 ? d2 : d1;
      via_on.insert(via_on.end(), pb.bs.on.begin(), pb.bs.on.end());
      via_tri.insert(via_tri.end(), tris.begin(), tris.end());
      for (const Clique& c : pb.bs.off)
        if (c != s) via_tri.push_back(c);
    };
    for (const Clique& c : ma.q1) discharge(c, pool1, true);
    for (const Clique& c : ma.q2) discharge(c, pool2, false);
    return detail::finish(l, q, static_cast<int>(fresh.next), std::move(a), std::move(d1), std::move(d2),
                          "integral+anti-cliques");
  }

  auto dec = find_decomposition(l, q, nullptr, opt.budget);
  if (!dec) throw ConstructionError("no absorber construction applies: target is not a clique-decomposable graph");
  return detail::booster_minus_root(l, q, dec->cliques(), opt, fresh, "search");
}

}  // namespace absorb
