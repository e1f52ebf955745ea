#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/exactcover.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/rng.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace absorb {

enum class NibblePolicy {
  greedy,          // random clique order; bite < 1 switches to rounds
  fewest_options,  // cover a random edge among those with fewest live cliques
};

struct NibbleParams {
  double bite = 1.0;
  std::uint64_t seed = 0;
  std::int64_t max_rounds = 1'000'000;
  const std::vector<Clique>* source = nullptr;  // default: all q-cliques of G
  NibblePolicy policy = NibblePolicy::fewest_options;
  // fewest_options covers these edges first (e.g. edges with few reserve cliques).
  const std::vector<Edge>* priority = nullptr;
  std::map<std::string, double> lemma;  // alpha, beta, gamma, eps, rho, D, p, ...

  void validate() const {
    if (!(bite > 0.0 && bite <= 1.0)) throw ParameterError("bite must lie in (0, 1]");
    if (max_rounds < 1) throw ParameterError("max rounds must be positive");
  }
};

struct PackResult {
  Packing packing;
  Hypergraph leftover;
  std::int64_t rounds = 0;
};

namespace detail {

// Edges and cliques of a packing instance, indexed.
struct CliqueIndex {
  std::vector<Edge> edges;
  std::unordered_map<Edge, int> edge_id;
  std::vector<Clique> cliques;
  std::size_t k = 0;                 // edges per clique
  std::vector<int> clique_edges;     // k per clique
  std::vector<int> edge_start;       // CSR: cliques through an edge
  std::vector<int> edge_cliques;

  CliqueIndex(const Hypergraph& g, int q, std::vector<Clique> cs) : edges(g.edges()), cliques(std::move(cs)) {
    k = static_cast<std::size_t>(binom(q, g.r()));
    edge_id.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) edge_id.emplace(edges[i], static_cast<int>(i));
    clique_edges.reserve(cliques.size() * k);
    std::vector<int> deg(edges.size(), 0);
    for (const Clique& c : cliques) {
      if (static_cast<int>(c.size()) != q) throw ParameterError("source clique {" + c.str() + "} has the wrong size");
      for_each_subset(c, static_cast<std::size_t>(g.r()), [&](const Edge& e) {
        auto it = edge_id.find(e);
        if (it == edge_id.end()) throw ParameterError("source clique {" + c.str() + "} is not a clique of G");
        clique_edges.push_back(it->second);
        ++deg[static_cast<std::size_t>(it->second)];
      });
    }
    edge_start.assign(edges.size() + 1, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) edge_start[i + 1] = edge_start[i] + deg[i];
    edge_cliques.assign(static_cast<std::size_t>(edge_start.back()), 0);
    std::vector<int> fill(edge_start.begin(), edge_start.end() - 1);
    for (std::size_t c = 0; c < cliques.size(); ++c)
      for (std::size_t t = 0; t < k; ++t) {
        int e = clique_edges[c * k + t];
        edge_cliques[static_cast<std::size_t>(fill[static_cast<std::size_t>(e)]++)] = static_cast<int>(c);
      }
  }

  const int* through_begin(int e) const { return edge_cliques.data() + edge_start[static_cast<std::size_t>(e)]; }
  const int* through_end(int e) const { return edge_cliques.data() + edge_start[static_cast<std::size_t>(e) + 1]; }
};

inline PackResult finish_pack(const Hypergraph& g, int q, const CliqueIndex& ix, const std::vector<int>& chosen,
                              const std::vector<char>& covered, std::int64_t rounds) {
  PackResult res{Packing{g.n(), q, g.r(), {}}, Hypergraph(g.n(), g.r()), rounds};
  for (int c : chosen) res.packing.cliques.push_back(ix.cliques[static_cast<std::size_t>(c)]);
  std::vector<Edge> left;
  for (std::size_t e = 0; e < ix.edges.size(); ++e)
    if (!covered[e]) left.push_back(ix.edges[e]);
  res.leftover = Hypergraph(g.n(), g.r(), std::move(left));
  // Conservation: packing edges and leftover partition E(G).
  ensure(is_packing_of(res.packing, g), "nibble output is not a packing of G");
  ensure(res.packing.cliques.size() * ix.k + res.leftover.size() == g.size(), "nibble output does not conserve edges");
  return res;
}

inline std::vector<Clique> source_cliques(const Hypergraph& g, int q, const NibbleParams& p) {
  return p.source ? *p.source : enumerate_cliques(g, q);
}

}  // namespace detail

inline PackResult random_greedy_pack(const Hypergraph& g, int q, const NibbleParams& params = {}) {
  params.validate();
  if (q <= g.r()) throw ParameterError("need q > r");
  detail::CliqueIndex ix(g, q, detail::source_cliques(g, q, params));
  const std::size_t k = ix.k;
  const std::size_t nc = ix.cliques.size();
  std::vector<char> covered(ix.edges.size(), 0);
  std::vector<int> chosen;
  Rng rng(params.seed);
  auto free_clique = [&](std::size_t c) {
    for (std::size_t t = 0; t < k; ++t)
      if (covered[static_cast<std::size_t>(ix.clique_edges[c * k + t])]) return false;
    return true;
  };
  auto take = [&](std::size_t c) {
    for (std::size_t t = 0; t < k; ++t) covered[static_cast<std::size_t>(ix.clique_edges[c * k + t])] = 1;
    chosen.push_back(static_cast<int>(c));
  };
  std::int64_t rounds = 0;

  if (params.policy == NibblePolicy::greedy && params.bite >= 1.0) {
    std::vector<int> order(nc);
    for (std::size_t c = 0; c < nc; ++c) order[c] = static_cast<int>(c);
    rng.shuffle(order);
    for (int c : order)
      if (free_clique(static_cast<std::size_t>(c))) take(static_cast<std::size_t>(c));
    return detail::finish_pack(g, q, ix, chosen, covered, 1);
  }

  if (params.policy == NibblePolicy::greedy) {
    // Rounds: sample a bite of live cliques, keep those not colliding with a
    // higher-priority sampled clique.
    std::vector<int> live(nc);
    for (std::size_t c = 0; c < nc; ++c) live[c] = static_cast<int>(c);
    std::size_t uncovered = ix.edges.size();
    std::vector<int> owner(ix.edges.size(), -1);
    while (!live.empty() && rounds < params.max_rounds) {
      ++rounds;
      auto want = static_cast<std::size_t>(
          std::ceil(params.bite * static_cast<double>(uncovered) / static_cast<double>(k)));
      want = std::clamp<std::size_t>(want, 1, live.size());
      for (std::size_t i = 0; i < want; ++i) std::swap(live[i], live[i + rng.below(live.size() - i)]);
      std::vector<int> bite(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(want));
      // bite order is the random priority
      std::vector<char> drop(want, 0);
      for (std::size_t i = 0; i < want; ++i) {
        auto c = static_cast<std::size_t>(bite[i]);
        for (std::size_t t = 0; t < k; ++t) {
          int& o = owner[static_cast<std::size_t>(ix.clique_edges[c * k + t])];
          if (o >= 0) drop[i] = 1;
          else o = static_cast<int>(i);
        }
      }
      for (std::size_t i = 0; i < want; ++i) {
        auto c = static_cast<std::size_t>(bite[i]);
        if (!drop[i]) {
          take(c);
          uncovered -= k;
        }
        for (std::size_t t = 0; t < k; ++t) owner[static_cast<std::size_t>(ix.clique_edges[c * k + t])] = -1;
      }
      std::vector<int> next;
      for (int c : live)
        if (free_clique(static_cast<std::size_t>(c))) next.push_back(c);
      live.swap(next);
    }
    return detail::finish_pack(g, q, ix, chosen, covered, rounds);
  }

  // fewest_options: bucket queue over live-clique counts per uncovered edge.
  const std::size_t ne = ix.edges.size();
  std::vector<int> cnt(ne, 0);
  for (std::size_t e = 0; e < ne; ++e) cnt[e] = static_cast<int>(ix.through_end(static_cast<int>(e)) - ix.through_begin(static_cast<int>(e)));
  std::vector<char> dead(nc, 0);
  int maxc = 0;
  for (int c : cnt) maxc = std::max(maxc, c);
  std::vector<char> prio(ne, 0);
  if (params.priority)
    for (const Edge& e : *params.priority) {
      auto it = ix.edge_id.find(e);
      if (it != ix.edge_id.end()) prio[static_cast<std::size_t>(it->second)] = 1;
    }
  auto key = [&](int e) {
    auto eu = static_cast<std::size_t>(e);
    return static_cast<std::size_t>(cnt[eu]) + (prio[eu] ? 0 : static_cast<std::size_t>(maxc) + 1);
  };
  std::vector<std::vector<int>> bucket(2 * static_cast<std::size_t>(maxc) + 2);
  std::vector<int> pos(ne, -1);
  auto insert = [&](int e) {
    auto& b = bucket[key(e)];
    pos[static_cast<std::size_t>(e)] = static_cast<int>(b.size());
    b.push_back(e);
  };
  auto erase = [&](int e) {
    auto& b = bucket[key(e)];
    int p = pos[static_cast<std::size_t>(e)];
    b[static_cast<std::size_t>(p)] = b.back();
    pos[static_cast<std::size_t>(b.back())] = p;
    b.pop_back();
    pos[static_cast<std::size_t>(e)] = -1;
  };
  for (std::size_t e = 0; e < ne; ++e)
    if (cnt[e] > 0) insert(static_cast<int>(e));
  std::size_t lo = 1;
  while (rounds < params.max_rounds) {
    while (lo < bucket.size() && bucket[lo].empty()) ++lo;
    if (lo >= bucket.size()) break;
    ++rounds;
    auto& b = bucket[lo];
    int e = b[rng.below(b.size())];
    // Uniform live clique through e.
    auto pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cnt[static_cast<std::size_t>(e)])));
    int c = -1;
    for (const int* it = ix.through_begin(e); it != ix.through_end(e); ++it)
      if (!dead[static_cast<std::size_t>(*it)] && pick-- == 0) {
        c = *it;
        break;
      }
    ensure(c >= 0, "live clique count out of sync");
    take(static_cast<std::size_t>(c));
    for (std::size_t t = 0; t < k; ++t) {
      int f = ix.clique_edges[static_cast<std::size_t>(c) * k + t];
      if (pos[static_cast<std::size_t>(f)] >= 0) erase(f);
    }
    for (std::size_t t = 0; t < k; ++t) {
      int f = ix.clique_edges[static_cast<std::size_t>(c) * k + t];
      for (const int* it = ix.through_begin(f); it != ix.through_end(f); ++it) {
        auto d = static_cast<std::size_t>(*it);
        if (dead[d]) continue;
        dead[d] = 1;
        for (std::size_t s = 0; s < k; ++s) {
          int h = ix.clique_edges[d * k + s];
          auto hu = static_cast<std::size_t>(h);
          if (covered[hu]) continue;
          erase(h);
          --cnt[hu];
          if (cnt[hu] > 0) {
            insert(h);
            lo = std::min(lo, key(h));
          }
        }
      }
    }
  }
  return detail::finish_pack(g, q, ix, chosen, covered, rounds);
}

// ---------------------------------------------------------------------------
// Reserves

struct ReserveSet {
  Hypergraph x;
  double p = 0;
  std::unordered_map<Edge, std::int64_t> counts;  // per host edge: cliques whose other edges lie in X
  std::int64_t max_degree = 0;
  std::int64_t min_count = 0;
  double degree_bound = 0;
  double count_bound = 0;
  bool degree_ok = true;
  bool count_ok = true;
  // Only when a host graph is given.
  std::optional<double> high_min_degree_bound;
  std::optional<bool> high_min_degree_ok;
  std::optional<bool> host_min_degree_ok;
};

namespace detail {

// Cliques K ⊇ e of size q whose r-subsets other than e all lie in X.
inline std::int64_t reserve_clique_count(const Hypergraph& x, const Edge& e, int q,
                                         const std::vector<std::vector<std::uint64_t>>* adj) {
  const int r = x.r();
  const int n = x.n();
  if (r == 2 && q == 3 && adj) {
    const auto& a = (*adj)[e[0]];
    const auto& b = (*adj)[e[1]];
    std::int64_t s = 0;
    for (std::size_t w = 0; w < a.size(); ++w) s += __builtin_popcountll(a[w] & b[w]);
    return s;
  }
  std::vector<Vertex> others;
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
    if (!e.contains(v)) others.push_back(v);
  std::int64_t s = 0;
  for_each_combination(others.size(), static_cast<std::size_t>(q - r), [&](const SortedTuple& idx) {
    Clique k = e;
    for (std::size_t i = 0; i < idx.size(); ++i) k = k.with(others[idx[i]]);
    bool ok = true;
    for_each_subset(k, static_cast<std::size_t>(r), [&](const Edge& f) {
      if (ok && f != e && !x.contains(f)) ok = false;
    });
    if (ok) ++s;
  });
  return s;
}

inline std::vector<std::vector<std::uint64_t>> adjacency_bits(const Hypergraph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>((n + 63) / 64, 0));
  for (const Edge& e : g.edges()) {
    adj[e[0]][e[1] >> 6] |= 1ULL << (e[1] & 63);
    adj[e[1]][e[0] >> 6] |= 1ULL << (e[0] & 63);
  }
  return adj;
}

}  // namespace detail

/// X = each host edge independently with probability p, with exact
/// reserve-clique counts and the verdicts of the two reserve lemmas.
inline ReserveSet generate_reserves(int n, int q, int r, double p, std::uint64_t seed,
                                    const Hypergraph* host = nullptr) {
  if (!(p >= 0.0 && p < 1.0)) throw ParameterError("reserve probability must lie in [0, 1)");
  if (!(1 <= r && r < q && q <= n)) throw ParameterError("need 1 <= r < q <= n");
  Hypergraph full;
  if (!host) full = Hypergraph::complete(n, r);
  const Hypergraph& h = host ? *host : full;
  if (h.n() != n || h.r() != r) throw ParameterError("host does not match n and r");
  Rng rng(seed);
  ReserveSet rs;
  rs.p = p;
  std::vector<Edge> xe;
  for (const Edge& e : h.edges())
    if (rng.bernoulli(p)) xe.push_back(e);
  rs.x = Hypergraph(n, r, std::move(xe));
  std::optional<std::vector<std::vector<std::uint64_t>>> adj;
  if (r == 2) adj = detail::adjacency_bits(rs.x);
  rs.min_count = std::numeric_limits<std::int64_t>::max();
  for (const Edge& e : h.edges()) {
    std::int64_t c = detail::reserve_clique_count(rs.x, e, q, adj ? &*adj : nullptr);
    rs.counts.emplace(e, c);
    rs.min_count = std::min(rs.min_count, c);
  }
  if (h.empty()) rs.min_count = 0;
  rs.max_degree = rs.x.empty() ? 0 : max_level_degree(rs.x, r - 1);
  rs.degree_bound = 2.0 * p * n;
  rs.count_bound = 0.5 * std::pow(p, static_cast<double>(binom(q, r)) - 1.0) * static_cast<double>(binom(n - r, q - r));
  rs.degree_ok = static_cast<double>(rs.max_degree) <= rs.degree_bound;
  rs.count_ok = static_cast<double>(rs.min_count) >= rs.count_bound;
  if (host && r == 2) {
    const double bound = std::pow(static_cast<double>(q + 1), -q) *
                         std::pow(p, static_cast<double>(binom(q, 2)) - 1.0) * static_cast<double>(binom(n, q - 2));
    rs.high_min_degree_bound = bound;
    bool ok = true;
    for (const Edge& e : h.edges())
      if (!rs.x.contains(e) && static_cast<double>(rs.counts.at(e)) < bound) ok = false;
    rs.high_min_degree_ok = ok;
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
    for (const Edge& e : h.edges()) {
      ++deg[e[0]];
      ++deg[e[1]];
    }
    const std::int64_t delta = n ? *std::min_element(deg.begin(), deg.end()) : 0;
    rs.host_min_degree_ok = static_cast<double>(delta) >= (1.0 - 1.0 / (q + 1)) * n;
  }
  return rs;
}

/// Edges of G lying in at most `threshold` cliques whose other edges are in X.
inline std::vector<Edge> scarce_reserve_edges(const Hypergraph& g, const Hypergraph& x, int q, std::int64_t threshold) {
  std::optional<std::vector<std::vector<std::uint64_t>>> adj;
  if (x.r() == 2) adj = detail::adjacency_bits(x);
  std::vector<Edge> out;
  for (const Edge& e : g.edges())
    if (detail::reserve_clique_count(x, e, q, adj ? &*adj : nullptr) <= threshold) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// Completion into the reserves

struct Completion {
  Packing packing;             // partial plus the added cliques
  std::vector<Clique> added;   // one per leftover edge of G
  std::int64_t retries = 0;
  std::string fallback = "none";  // "none", "residual" or "full"
  std::int64_t max_reserve_load = 0;  // max candidate cliques through one X edge
};

inline std::optional<Completion> complete_with_reserves(const Hypergraph& g, const Hypergraph& x, const Packing& partial,
                                                         int q, std::uint64_t seed, std::int64_t max_retries = -1,
                                                         std::int64_t budget = kDefaultNodeBudget) {
  const int r = g.r();
  if (x.r() != r || x.n() != g.n()) throw ParameterError("G and X must share n and r");
  if (!edge_disjoint(g, x)) throw PreconditionError("X must be edge-disjoint from G");
  if (partial.q != q || !is_packing_of(partial, g)) throw PreconditionError("partial is not a K_q packing of G");

  Completion out;
  out.packing = partial;
  MultiHypergraph cov = covered_edges(g.n(), r, partial.cliques);
  std::vector<Edge> left;
  for (const Edge& e : g.edges())
    if (cov.multiplicity(e) == 0) left.push_back(e);
  if (left.empty()) return out;

  std::unordered_map<Edge, int> xid;
  for (std::size_t i = 0; i < x.edges().size(); ++i) xid.emplace(x.edges()[i], static_cast<int>(i));
  std::optional<std::vector<std::vector<std::uint64_t>>> adj;
  if (r == 2 && q == 3) adj = detail::adjacency_bits(x);

  // Candidates: cliques on a leftover edge whose other edges all lie in X.
  struct Cand {
    Clique c;
    std::vector<int> xs;
  };
  std::vector<std::vector<Cand>> cands(left.size());
  std::vector<std::int64_t> load(x.size(), 0);
  for (std::size_t i = 0; i < left.size(); ++i) {
    const Edge& e = left[i];
    auto add = [&](const Clique& k) {
      Cand cd{k, {}};
      for_each_subset(k, static_cast<std::size_t>(r), [&](const Edge& f) {
        if (f != e) cd.xs.push_back(xid.at(f));
      });
      for (int xi : cd.xs) ++load[static_cast<std::size_t>(xi)];
      cands[i].push_back(std::move(cd));
    };
    if (adj) {
      const auto& a = (*adj)[e[0]];
      const auto& b = (*adj)[e[1]];
      for (std::size_t w = 0; w < a.size(); ++w) {
        std::uint64_t m = a[w] & b[w];
        while (m) {
          auto v = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(m)));
          m &= m - 1;
          add(e.with(v));
        }
      }
    } else {
      std::vector<Vertex> others;
      for (Vertex v = 0; v < static_cast<Vertex>(g.n()); ++v)
        if (!e.contains(v)) others.push_back(v);
      for_each_combination(others.size(), static_cast<std::size_t>(q - r), [&](const SortedTuple& idx) {
        Clique k = e;
        for (std::size_t t = 0; t < idx.size(); ++t) k = k.with(others[idx[t]]);
        bool ok = true;
        for_each_subset(k, static_cast<std::size_t>(r), [&](const Edge& f) {
          if (ok && f != e && !x.contains(f)) ok = false;
        });
        if (ok) add(k);
      });
    }
    if (cands[i].empty()) return std::nullopt;
  }
  for (auto l : load) out.max_reserve_load = std::max(out.max_reserve_load, l);

  // Random greedy with conflict-driven resampling.
  Rng rng(seed);
  if (max_retries < 0) max_retries = 20 * static_cast<std::int64_t>(left.size()) + 100;
  std::vector<int> owner(x.size(), -1);
  std::vector<int> sel(left.size(), -1);
  std::vector<int> queue(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) queue[i] = static_cast<int>(i);
  rng.shuffle(queue);
  std::size_t head = 0;
  auto assign = [&](int i, int ci) {
    sel[static_cast<std::size_t>(i)] = ci;
    for (int xi : cands[static_cast<std::size_t>(i)][static_cast<std::size_t>(ci)].xs) owner[static_cast<std::size_t>(xi)] = i;
  };
  auto unassign = [&](int i) {
    for (int xi : cands[static_cast<std::size_t>(i)][static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].xs)
      owner[static_cast<std::size_t>(xi)] = -1;
    sel[static_cast<std::size_t>(i)] = -1;
  };
  while (head < queue.size()) {
    int i = queue[head++];
    if (sel[static_cast<std::size_t>(i)] >= 0) continue;
    const auto& cs = cands[static_cast<std::size_t>(i)];
    std::vector<int> free;
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      bool ok = true;
      for (int xi : cs[ci].xs)
        if (owner[static_cast<std::size_t>(xi)] >= 0) ok = false;
      if (ok) free.push_back(static_cast<int>(ci));
    }
    if (!free.empty()) {
      assign(i, free[rng.below(free.size())]);
      continue;
    }
    if (out.retries >= max_retries) {
      queue.push_back(i);
      break;
    }
    ++out.retries;
    int ci = static_cast<int>(rng.below(cs.size()));
    for (int xi : cs[static_cast<std::size_t>(ci)].xs) {
      int o = owner[static_cast<std::size_t>(xi)];
      if (o >= 0) {
        unassign(o);
        queue.push_back(o);
      }
    }
    assign(i, ci);
  }

  auto run_cover = [&](const std::vector<int>& todo, const std::vector<char>& blocked) -> bool {
    // Items: leftover edges (exactly once), X edges (at most once).
    std::vector<std::int64_t> need(todo.size() + x.size(), 1);
    std::vector<char> primary(todo.size() + x.size(), 0);
    for (std::size_t t = 0; t < todo.size(); ++t) primary[t] = 1;
    std::vector<std::vector<int>> opts;
    std::vector<std::pair<int, int>> back;
    for (std::size_t t = 0; t < todo.size(); ++t) {
      const auto& cs = cands[static_cast<std::size_t>(todo[t])];
      for (std::size_t ci = 0; ci < cs.size(); ++ci) {
        bool ok = true;
        for (int xi : cs[ci].xs)
          if (blocked[static_cast<std::size_t>(xi)]) ok = false;
        if (!ok) continue;
        std::vector<int> items{static_cast<int>(t)};
        for (int xi : cs[ci].xs) items.push_back(static_cast<int>(todo.size()) + xi);
        opts.push_back(std::move(items));
        back.emplace_back(todo[t], static_cast<int>(ci));
      }
    }
    CoverEngine eng(std::move(need), std::move(primary), std::move(opts));
    std::vector<int> found;
    try {
      eng.search(
          [&](const std::vector<int>& chosen) {
            found = chosen;
            return false;
          },
          budget);
    } catch (const BudgetError&) {
      return false;
    }
    if (found.empty()) return false;
    for (int o : found) assign(back[static_cast<std::size_t>(o)].first, back[static_cast<std::size_t>(o)].second);
    return true;
  };

  std::vector<int> todo;
  for (std::size_t i = 0; i < left.size(); ++i)
    if (sel[i] < 0) todo.push_back(static_cast<int>(i));
  if (!todo.empty()) {
    std::vector<char> blocked(x.size(), 0);
    for (std::size_t xi = 0; xi < x.size(); ++xi) blocked[xi] = owner[xi] >= 0;
    if (run_cover(todo, blocked)) {
      out.fallback = "residual";
    } else {
      for (std::size_t i = 0; i < left.size(); ++i)
        if (sel[i] >= 0) unassign(static_cast<int>(i));
      todo.clear();
      for (std::size_t i = 0; i < left.size(); ++i) todo.push_back(static_cast<int>(i));
      if (!run_cover(todo, std::vector<char>(x.size(), 0))) return std::nullopt;
      out.fallback = "full";
    }
  }
  for (std::size_t i = 0; i < left.size(); ++i) {
    const Clique& k = cands[i][static_cast<std::size_t>(sel[i])].c;
    std::int64_t in_g = 0;
    for_each_subset(k, static_cast<std::size_t>(r), [&](const Edge& f) { in_g += g.contains(f) ? 1 : 0; });
    ensure(in_g == 1, "completion clique has more than one edge in G");
    out.added.push_back(k);
    out.packing.cliques.push_back(k);
  }
  ensure(is_packing_of(out.packing, union_of(g, x)), "completion is not a packing of G + X");
  return out;
}

// ---------------------------------------------------------------------------
// Configurations and girth

struct Configuration {
  std::vector<Clique> cliques;
};

struct ConfigurationCount {
  std::int64_t count = 0;
  std::vector<Configuration> witnesses;
};

/// Exact number of i-subsets of P spanning at most j vertices.
inline ConfigurationCount configurations(const Packing& p, int i, int j, std::size_t witness_cap = 8) {
  if (i < 1) throw ParameterError("configuration size must be positive");
  if (i > 6) throw CapacityError("configuration counting is capped at i <= 6");
  ConfigurationCount res;
  const auto& cs = p.cliques;
  int n = p.n;
  for (const Clique& c : cs)
    for (Vertex v : c) n = std::max(n, static_cast<int>(v) + 1);
  std::vector<int> mult(static_cast<std::size_t>(n), 0);
  std::vector<int> chosen;
  int span = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(chosen.size()) == i) {
      ++res.count;
      if (res.witnesses.size() < witness_cap) {
        Configuration cf;
        for (int t : chosen) cf.cliques.push_back(cs[static_cast<std::size_t>(t)]);
        res.witnesses.push_back(std::move(cf));
      }
      return;
    }
    const std::size_t need = static_cast<std::size_t>(i) - chosen.size();
    for (std::size_t t = from; t + need <= cs.size(); ++t) {
      int added = 0;
      for (Vertex v : cs[t]) added += mult[v] == 0 ? 1 : 0;
      if (span + added > j) continue;
      for (Vertex v : cs[t]) ++mult[v];
      span += added;
      chosen.push_back(static_cast<int>(t));
      rec(t + 1);
      chosen.pop_back();
      span -= added;
      for (Vertex v : cs[t]) --mult[v];
    }
  };
  rec(0);
  return res;
}

namespace detail {

// Vertex-connected growth from a seed clique: is there a set of `size`
// cliques containing `seed`, connected through shared vertices, spanning at
// most `span_cap` vertices? With `min_index`, other members must have larger
// index than the seed (used when scanning all seeds).
class ConfigSearch {
 public:
  ConfigSearch(int n, const std::vector<Clique>* cliques) : cliques_(cliques), mult_(static_cast<std::size_t>(n), 0), by_vertex_(static_cast<std::size_t>(n)) {
    for (std::size_t t = 0; t < cliques_->size(); ++t)
      for (Vertex v : (*cliques_)[t]) by_vertex_[v].push_back(static_cast<int>(t));
  }

  void add_clique(int t) {
    for (Vertex v : (*cliques_)[static_cast<std::size_t>(t)]) by_vertex_[v].push_back(t);
  }

  bool exists(const Clique& seed, int seed_index, int size, int span_cap, bool min_index) {
    members_.clear();
    span_ = 0;
    seed_ = &seed;
    for (Vertex v : seed) bump(v, 1);
    seed_index_ = seed_index;
    min_index_ = min_index;
    bool found = span_ <= span_cap && grow(size - 1, span_cap);
    for (Vertex v : seed) bump(v, -1);
    return found;
  }

 private:
  void bump(Vertex v, int d) {
    if (d > 0 && mult_[v]++ == 0) {
      ++span_;
    } else if (d < 0 && --mult_[v] == 0) {
      --span_;
    }
  }

  bool grow(int remaining, int cap) {
    if (remaining == 0) return true;
    std::vector<int> cand;
    std::vector<Vertex> verts(seed_->begin(), seed_->end());
    for (int m : members_)
      for (Vertex v : (*cliques_)[static_cast<std::size_t>(m)]) verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (Vertex v : verts) {
      for (int t : by_vertex_[v]) {
        if (t == seed_index_ || (min_index_ && t < seed_index_)) continue;
        if (std::find(members_.begin(), members_.end(), t) != members_.end()) continue;
        cand.push_back(t);
      }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (int t : cand) {
      const Clique& c = (*cliques_)[static_cast<std::size_t>(t)];
      int added = 0;
      for (Vertex v : c) added += mult_[v] == 0 ? 1 : 0;
      if (span_ + added > cap) continue;
      for (Vertex v : c) bump(v, 1);
      members_.push_back(t);
      bool ok = grow(remaining - 1, cap);
      members_.pop_back();
      for (Vertex v : c) bump(v, -1);
      if (ok) return true;
    }
    return false;
  }

  const std::vector<Clique>* cliques_;
  std::vector<int> mult_;
  std::vector<std::vector<int>> by_vertex_;
  std::vector<int> members_;
  const Clique* seed_ = nullptr;
  int span_ = 0;
  int seed_index_ = -1;
  bool min_index_ = false;
};

inline int packing_vertex_count(const Packing& p) {
  int n = p.n;
  for (const Clique& c : p.cliques)
    for (Vertex v : c) n = std::max(n, static_cast<int>(v) + 1);
  return n;
}

}  // namespace detail

/// Smallest g in [2, g_max] with a ((q-r)g + r, g)-configuration; nothing
/// means girth >= g_max + 1.
inline std::optional<int> girth(const Packing& p, int q, int r, int g_max) {
  if (g_max > 6) throw CapacityError("girth search is capped at g_max <= 6");
  if (g_max < 2) throw ParameterError("g_max must be at least 2");
  detail::ConfigSearch s(detail::packing_vertex_count(p), &p.cliques);
  for (int g = 2; g <= g_max; ++g) {
    const int cap = (q - r) * g + r;
    for (std::size_t t = 0; t < p.cliques.size(); ++t)
      if (s.exists(p.cliques[t], static_cast<int>(t), g, cap, true)) return g;
  }
  return std::nullopt;
}

/// Random greedy accepting a clique only if the packing keeps girth > g.
inline PackResult high_girth_pack(const Hypergraph& g, int q, int gmax, const NibbleParams& params = {}) {
  params.validate();
  if (gmax > 6) throw CapacityError("high-girth packing is capped at g <= 6");
  if (gmax < 2) throw ParameterError("g must be at least 2");
  const int r = g.r();
  detail::CliqueIndex ix(g, q, detail::source_cliques(g, q, params));
  const std::size_t k = ix.k;
  const std::size_t nc = ix.cliques.size();
  std::vector<char> covered(ix.edges.size(), 0);
  std::vector<int> chosen;
  std::vector<Clique> accepted;
  detail::ConfigSearch search(g.n(), &accepted);
  Rng rng(params.seed);
  std::vector<int> order(nc);
  for (std::size_t c = 0; c < nc; ++c) order[c] = static_cast<int>(c);
  rng.shuffle(order);
  for (int c : order) {
    auto cu = static_cast<std::size_t>(c);
    bool ok = true;
    for (std::size_t t = 0; t < k && ok; ++t)
      if (covered[static_cast<std::size_t>(ix.clique_edges[cu * k + t])]) ok = false;
    if (!ok) continue;
    for (int gp = 3; gp <= gmax && ok; ++gp)
      if (search.exists(ix.cliques[cu], -1, gp, (q - r) * gp + r, false)) ok = false;
    if (!ok) continue;
    for (std::size_t t = 0; t < k; ++t) covered[static_cast<std::size_t>(ix.clique_edges[cu * k + t])] = 1;
    chosen.push_back(c);
    accepted.push_back(ix.cliques[cu]);
    search.add_clique(static_cast<int>(accepted.size()) - 1);
  }
  PackResult res = detail::finish_pack(g, q, ix, chosen, covered, 1);
  ensure(!girth(res.packing, q, r, gmax).has_value(), "high-girth packing has a forbidden configuration");
  return res;
}

// ---------------------------------------------------------------------------
// Spread

using DecompositionSampler = std::function<std::optional<std::vector<Clique>>(std::uint64_t seed)>;

struct SpreadEstimate {
  int size = 0;
  double sigma_hat = 0;
  double prob_hat = 0;  // max containment frequency over candidate packings
  double sigma_lo = 0, sigma_hi = 0;  // from a 95% normal interval on prob_hat
  std::vector<Clique> argmax;
};

struct SpreadReport {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::vector<SpreadEstimate> per_size;
};

inline SpreadReport spread_estimate(const DecompositionSampler& sampler, const std::vector<int>& sizes,
                                    std::int64_t trials, std::uint64_t seed, std::int64_t candidates_per_size = 200) {
  if (trials <= 0) throw ParameterError("trials must be positive");
  SpreadReport rep;
  rep.trials = trials;
  std::vector<std::vector<Clique>> samples;
  for (std::int64_t t = 0; t < trials; ++t) {
    auto d = sampler(derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (!d) {
      ++rep.failures;
      continue;
    }
    std::sort(d->begin(), d->end());
    samples.push_back(std::move(*d));
  }
  if (2 * rep.failures > trials) throw ReliabilityError("sampler failed in more than half of the trials");
  const double m = static_cast<double>(samples.size());
  Rng rng(derive_seed(seed, 0xC0FFEEULL));
  for (int s : sizes) {
    if (s < 1) throw ParameterError("packing sizes must be positive");
    SpreadEstimate est;
    est.size = s;
    std::vector<std::vector<Clique>> cands;
    if (s == 1) {
      std::map<Clique, int> seen;
      for (const auto& d : samples)
        for (const Clique& c : d) seen.emplace(c, 0);
      for (const auto& [c, z] : seen) cands.push_back({c});
    } else {
      for (std::int64_t t = 0; t < candidates_per_size && !samples.empty(); ++t) {
        const auto& d = samples[static_cast<std::size_t>(t) % samples.size()];
        if (d.size() < static_cast<std::size_t>(s)) continue;
        std::vector<Clique> pick = d;
        for (std::size_t i = 0; i < static_cast<std::size_t>(s); ++i)
          std::swap(pick[i], pick[i + rng.below(pick.size() - i)]);
        pick.resize(static_cast<std::size_t>(s));
        std::sort(pick.begin(), pick.end());
        cands.push_back(std::move(pick));
      }
    }
    for (const auto& sub : cands) {
      std::int64_t hits = 0;
      for (const auto& d : samples)
        if (std::all_of(sub.begin(), sub.end(), [&](const Clique& c) { return std::binary_search(d.begin(), d.end(), c); }))
          ++hits;
      double ph = m > 0 ? static_cast<double>(hits) / m : 0.0;
      if (est.argmax.empty() || ph > est.prob_hat) {
        est.prob_hat = ph;
        est.argmax = sub;
      }
    }
    const double se = m > 0 ? std::sqrt(est.prob_hat * (1 - est.prob_hat) / m) : 0.0;
    est.sigma_hat = std::pow(est.prob_hat, 1.0 / s);
    est.sigma_lo = std::pow(std::max(0.0, est.prob_hat - 1.96 * se), 1.0 / s);
    est.sigma_hi = std::pow(std::min(1.0, est.prob_hat + 1.96 * se), 1.0 / s);
    rep.per_size.push_back(std::move(est));
  }
  return rep;
}

struct ExactSpread {
  std::int64_t decompositions = 0;
  std::map<Clique, mpq_class> containment;  // exact Prob[clique ∈ 𝓗] under the uniform law
  std::vector<std::pair<int, double>> sigma;  // per size, max over packings of Prob^(1/s)
};

/// Uniform distribution over all decompositions of G (enumerated).
inline ExactSpread spread_exact(const Hypergraph& g, int q, const std::vector<int>& sizes, std::int64_t max_count = 10000) {
  auto all = all_decompositions(g, q, max_count + 1);
  if (static_cast<std::int64_t>(all.size()) > max_count) throw CapacityError("too many decompositions for exact spread");
  if (all.empty()) throw PreconditionError("G has no decomposition");
  ExactSpread ex;
  ex.decompositions = static_cast<std::int64_t>(all.size());
  std::vector<std::vector<Clique>> ds;
  for (const auto& d : all) {
    auto cs = d.cliques();
    std::sort(cs.begin(), cs.end());
    ds.push_back(std::move(cs));
  }
  for (const auto& d : ds)
    for (const Clique& c : d) ex.containment[c] += 1;
  for (auto& [c, v] : ex.containment) {
    v /= ex.decompositions;
    v.canonicalize();
  }
  for (int s : sizes) {
    if (s < 1) throw ParameterError("packing sizes must be positive");
    std::map<std::vector<Clique>, std::int64_t> hits;
    for (const auto& d : ds) {
      if (d.size() < static_cast<std::size_t>(s)) continue;
      for_each_combination(d.size(), static_cast<std::size_t>(s), [&](const SortedTuple& idx) {
        std::vector<Clique> sub;
        for (std::size_t i = 0; i < idx.size(); ++i) sub.push_back(d[idx[i]]);
        ++hits[sub];
      });
    }
    std::int64_t best = 0;
    for (const auto& [sub, h] : hits) best = std::max(best, h);
    ex.sigma.emplace_back(s, std::pow(static_cast<double>(best) / static_cast<double>(ex.decompositions), 1.0 / s));
  }
  return ex;
}

}  // namespace absorb
