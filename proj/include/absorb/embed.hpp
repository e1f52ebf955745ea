#pragma once

#include <absorb/gadgets.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/rng.hpp>

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace absorb {

/// Gadgets W_H over subgraphs H of a base J. Each W_H contains H, is rooted at
/// V(H), and its other vertices are fresh (off V(J), private to the gadget).
struct SupergraphSystem {
  MultiHypergraph j;
  std::vector<Hypergraph> h;
  std::vector<RootedGadget> w;
  std::int64_t c_bound = 0;  // 0: not declared
};

/// Checks the structural invariants; returns an empty string when valid.
inline std::string check_system(const SupergraphSystem& s) {
  if (s.h.size() != s.w.size()) return "family and gadget counts differ";
  const int r = s.j.r();
  std::unordered_set<Vertex> vj;
  for (const auto& [e, k] : s.j.multiplicities()) vj.insert(e.begin(), e.end());
  std::unordered_map<Vertex, std::size_t> owner;
  for (std::size_t i = 0; i < s.w.size(); ++i) {
    const auto& g = s.w[i];
    if (g.w.r() != r || s.h[i].r() != r) return "uniformity mismatch in gadget " + std::to_string(i);
    for (const Edge& e : s.h[i].edges()) {
      if (s.j.multiplicity(e) == 0) return "family member " + std::to_string(i) + " is not a subgraph of J";
      if (!g.w.contains(e)) return "gadget " + std::to_string(i) + " does not contain its base";
    }
    const std::unordered_set<Vertex> roots(g.roots.begin(), g.roots.end());
    for (Vertex v : g.w.touched_vertices()) {
      if (roots.count(v)) continue;
      if (vj.count(v)) return "gadget " + std::to_string(i) + " has a non-root vertex in V(J)";
      auto [it, ins] = owner.emplace(v, i);
      if (!ins && it->second != i) return "gadgets " + std::to_string(it->second) + " and " + std::to_string(i) + " share fresh vertex " + std::to_string(v);
    }
    if (s.c_bound > 0) {
      auto vcount = static_cast<std::int64_t>(g.w.touched_vertices().size());
      if (static_cast<std::int64_t>(g.w.size()) > s.c_bound || vcount > s.c_bound)
        return "gadget " + std::to_string(i) + " exceeds the boundedness parameter";
    }
  }
  return {};
}

/// Every edge of J lies in at most C members of the family.
inline bool check_refined_family(const std::vector<Hypergraph>& family, const MultiHypergraph& j, std::int64_t c) {
  std::unordered_map<Edge, std::int64_t> cnt;
  for (const Hypergraph& h : family)
    for (const Edge& e : h.edges()) ++cnt[e];
  for (const auto& [e, k] : j.multiplicities()) {
    auto it = cnt.find(e);
    if (it != cnt.end() && it->second > c) return false;
  }
  return true;
}

namespace detail {

// Non-root vertices of w, ordered so each has as many placed neighbours as possible.
inline std::vector<Vertex> placement_order(const RootedGadget& g) {
  const std::unordered_set<Vertex> roots(g.roots.begin(), g.roots.end());
  std::vector<Vertex> free;
  for (Vertex v : g.w.touched_vertices())
    if (!roots.count(v)) free.push_back(v);
  std::unordered_set<Vertex> placed(roots);
  std::vector<Vertex> order;
  while (!free.empty()) {
    std::size_t best = 0;
    std::int64_t best_score = -1;
    for (std::size_t i = 0; i < free.size(); ++i) {
      std::int64_t score = 0;
      for (const Edge& e : g.w.edges())
        if (e.contains(free[i]))
          for (Vertex x : e)
            if (placed.count(x)) ++score;
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    order.push_back(free[best]);
    placed.insert(free[best]);
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return order;
}

// For each position in `order`, the gadget edges that become fully placed there.
inline std::vector<std::vector<Edge>> closing_edges(const RootedGadget& g, const std::vector<Vertex>& order) {
  std::unordered_map<Vertex, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::vector<Edge>> out(order.size());
  for (const Edge& e : g.w.edges()) {
    std::size_t last = 0;
    bool any = false;
    for (Vertex x : e) {
      auto it = pos.find(x);
      if (it != pos.end()) {
        last = std::max(last, it->second);
        any = true;
      }
    }
    if (any) out[last].push_back(e);
  }
  return out;
}

inline Edge map_edge(const Edge& e, const std::unordered_map<Vertex, Vertex>& phi) {
  std::vector<Vertex> vs;
  for (Vertex x : e) {
    auto it = phi.find(x);
    vs.push_back(it == phi.end() ? x : it->second);
  }
  return Edge(vs);
}

}  // namespace detail

/// Root-fixing injective embeddings of W into G avoiding `forbidden`.
inline std::int64_t count_rooted_embeddings(const RootedGadget& w, const Hypergraph& g,
                                            const std::unordered_set<Edge>& forbidden, std::int64_t cap) {
  if (w.w.r() != g.r()) throw ParameterError("uniformity mismatch");
  auto order = detail::placement_order(w);
  if (order.size() > 6) throw CapacityError("exact embedding counts are capped at 6 non-root vertices");
  auto closing = detail::closing_edges(w, order);
  for (const Edge& e : w.w.edges()) {
    bool all_roots = std::all_of(e.begin(), e.end(), [&](Vertex x) {
      return std::find(order.begin(), order.end(), x) == order.end();
    });
    if (all_roots && (!g.contains(e) || forbidden.count(e))) return 0;
  }
  std::unordered_map<Vertex, Vertex> phi;
  std::unordered_set<Vertex> used(w.roots.begin(), w.roots.end());
  std::int64_t count = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (count >= cap) return;
    if (i == order.size()) {
      ++count;
      return;
    }
    for (Vertex y = 0; y < static_cast<Vertex>(g.n()); ++y) {
      if (used.count(y)) continue;
      phi[order[i]] = y;
      bool ok = true;
      for (const Edge& e : closing[i]) {
        Edge t = detail::map_edge(e, phi);
        if (!g.contains(t) || forbidden.count(t)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        used.insert(y);
        self(self, i + 1);
        used.erase(y);
      }
      phi.erase(order[i]);
      if (count >= cap) return;
    }
  };
  rec(rec, 0);
  return count;
}

struct Embedding {
  std::vector<std::unordered_map<Vertex, Vertex>> phi;  // per gadget, non-root vertices only
  Hypergraph image;                                      // union of images of the new (non-base) edges
  std::int64_t max_degree = 0;                           // Δ_{r-1} of the whole image system
  int restarts = 0;
};

struct EmbedOptions {
  std::int64_t degree_budget = 0;  // 0: 8 * max(Δ_{r-1}(J), 1)
  int max_restarts = 50;
  std::int64_t node_limit = 200000;  // per gadget attempt
};

namespace detail {

inline std::int64_t image_max_degree(const SupergraphSystem& s, const Hypergraph& image) {
  Hypergraph all(image.n(), image.r(), image.edges());
  for (const Hypergraph& h : s.h)
    for (const Edge& e : h.edges()) all.add(e);
  return all.empty() ? 0 : max_level_degree(all, all.r() - 1);
}

}  // namespace detail

/// Re-derives (a)-(c) of an embedding from scratch.
inline bool verify_embedding(const SupergraphSystem& s, const Hypergraph& g, const Embedding& emb,
                             std::int64_t degree_budget) {
  if (emb.phi.size() != s.w.size()) return false;
  std::unordered_set<Edge> seen;
  std::vector<Edge> all_new;
  for (std::size_t i = 0; i < s.w.size(); ++i) {
    const auto& w = s.w[i];
    const auto& phi = emb.phi[i];
    std::unordered_set<Vertex> roots(w.roots.begin(), w.roots.end());
    std::unordered_set<Vertex> imgs(w.roots.begin(), w.roots.end());
    for (Vertex v : w.w.touched_vertices()) {
      if (roots.count(v)) {
        if (phi.count(v)) return false;
        continue;
      }
      auto it = phi.find(v);
      if (it == phi.end() || !imgs.insert(it->second).second) return false;
    }
    for (const Edge& e : w.w.edges()) {
      Edge t = detail::map_edge(e, phi);
      if (!g.contains(t)) return false;
      if (s.h[i].contains(e)) continue;
      if (s.j.multiplicity(t) > 0) return false;
      if (!seen.insert(t).second) return false;
      all_new.push_back(t);
    }
  }
  Hypergraph image(g.n(), g.r(), all_new);
  if (image != emb.image) return false;
  return detail::image_max_degree(s, image) <= degree_budget && emb.max_degree == detail::image_max_degree(s, image);
}

/// Randomized sequential embedding with restarts. Gadgets are processed in a
/// random order; each is placed by a depth-first search over candidate images
/// tried in random order, honouring edge-disjointness, avoidance of J and the
/// degree budget on (r-1)-sets.
inline std::optional<Embedding> embed_system(const SupergraphSystem& s, const Hypergraph& g, std::uint64_t seed,
                                             EmbedOptions opt = {}) {
  if (auto why = check_system(s); !why.empty()) throw PreconditionError(why);
  if (g.r() != s.j.r()) throw ParameterError("uniformity mismatch");
  for (const auto& [e, k] : s.j.multiplicities())
    if (!g.contains(e)) throw PreconditionError("Simple(J) is not contained in the host");
  for (std::size_t i = 0; i < s.w.size(); ++i)
    if (!is_edge_intersecting(s.w[i], s.h[i]))
      throw PreconditionError("gadget " + std::to_string(i) + " is not edge-intersecting");
  const int r = g.r();
  if (opt.degree_budget <= 0) {
    std::int64_t dj = s.j.empty() ? 0 : max_level_degree(s.j, r - 1);
    opt.degree_budget = 8 * std::max<std::int64_t>(dj, 1);
  }
  const auto n = static_cast<Vertex>(g.n());
  Rng rng(seed);

  std::vector<std::vector<Vertex>> orders;
  std::vector<std::vector<std::vector<Edge>>> closing;
  for (const auto& w : s.w) {
    orders.push_back(detail::placement_order(w));
    closing.push_back(detail::closing_edges(w, orders.back()));
  }

  for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
    std::unordered_set<Edge> used;
    std::unordered_map<SortedTuple, std::int64_t> deg;
    for (const Hypergraph& h : s.h)
      for (const Edge& e : h.edges())
        if (used.insert(e).second) for_each_subset(e, static_cast<std::size_t>(r - 1), [&](const SortedTuple& t) { ++deg[t]; });
    used.clear();  // base edges are shared between gadgets; only new edges are exclusive
    std::vector<std::size_t> gorder(s.w.size());
    for (std::size_t i = 0; i < gorder.size(); ++i) gorder[i] = i;
    rng.shuffle(gorder);
    Embedding emb;
    emb.phi.assign(s.w.size(), {});
    emb.restarts = attempt;
    bool failed = false;
    std::vector<Edge> new_edges;
    for (std::size_t gi : gorder) {
      const auto& w = s.w[gi];
      const auto& order = orders[gi];
      const auto& close = closing[gi];
      auto& phi = emb.phi[gi];
      std::unordered_set<Vertex> taken(w.roots.begin(), w.roots.end());
      std::int64_t nodes = 0;
      std::vector<Edge> placed_edges;
      bool base_ok = true;
      // Edges among roots only: must be base edges or already valid new edges.
      for (const Edge& e : w.w.edges()) {
        bool all_roots = std::all_of(e.begin(), e.end(), [&](Vertex x) {
          return std::find(order.begin(), order.end(), x) == order.end();
        });
        if (all_roots && !s.h[gi].contains(e)) base_ok = false;
      }
      if (!base_ok) throw PreconditionError("gadget has a non-base edge inside its roots");
      auto admissible = [&](const Edge& t) {
        if (!g.contains(t) || used.count(t) || s.j.multiplicity(t) > 0) return false;
        bool ok = true;
        for_each_subset(t, static_cast<std::size_t>(r - 1), [&](const SortedTuple& x) {
          auto it = deg.find(x);
          if (it != deg.end() && it->second >= opt.degree_budget) ok = false;
        });
        return ok;
      };
      auto commit = [&](const Edge& t, int sign) {
        if (sign > 0) used.insert(t);
        else used.erase(t);
        for_each_subset(t, static_cast<std::size_t>(r - 1), [&](const SortedTuple& x) { deg[x] += sign; });
      };
      auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == order.size()) return true;
        if (++nodes > opt.node_limit) return false;
        std::vector<Vertex> cand;
        for (Vertex y = 0; y < n; ++y)
          if (!taken.count(y)) cand.push_back(y);
        rng.shuffle(cand);
        for (Vertex y : cand) {
          phi[order[i]] = y;
          std::vector<Edge> added;
          bool ok = true;
          for (const Edge& e : close[i]) {
            Edge t = detail::map_edge(e, phi);
            if (s.h[gi].contains(e)) continue;
            if (!admissible(t)) {
              ok = false;
              break;
            }
            commit(t, +1);
            added.push_back(t);
          }
          if (ok) {
            taken.insert(y);
            if (self(self, i + 1)) {
              placed_edges.insert(placed_edges.end(), added.begin(), added.end());
              return true;
            }
            taken.erase(y);
          }
          for (auto it = added.rbegin(); it != added.rend(); ++it) commit(*it, -1);
          phi.erase(order[i]);
          if (nodes > opt.node_limit) return false;
        }
        return false;
      };
      if (!rec(rec, 0)) {
        failed = true;
        break;
      }
      new_edges.insert(new_edges.end(), placed_edges.begin(), placed_edges.end());
    }
    if (failed) continue;
    emb.image = Hypergraph(g.n(), r, new_edges);
    emb.max_degree = detail::image_max_degree(s, emb.image);
    ensure(verify_embedding(s, g, emb, opt.degree_budget), "embedding failed its recount");
    return emb;
  }
  return std::nullopt;
}

}  // namespace absorb
