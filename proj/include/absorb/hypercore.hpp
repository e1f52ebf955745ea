#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/errors.hpp>
#include <absorb/tuple.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace absorb {

/// Simple r-uniform hypergraph on vertices {0, ..., n-1}.
///
/// Edges are kept sorted lexicographically with a hash index for membership.
/// Mutation is single-writer; a constructed graph shared read-only is safe
/// across threads.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(int n, int r) : n_(n), r_(r) {
    if (n < 0) throw ParameterError("negative vertex count");
    if (r < 1) throw ParameterError("uniformity must be at least 1");
  }

  Hypergraph(int n, int r, std::vector<Edge> edges) : Hypergraph(n, r) {
    for (const Edge& e : edges) validate(e);
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw ParameterError("duplicate edge in simple hypergraph");
    edges_ = std::move(edges);
    index_.reserve(edges_.size());
    for (const Edge& e : edges_) index_.insert(e);
  }

  static Hypergraph complete(int n, int r) {
    std::vector<Edge> es;
    for_each_combination(static_cast<std::size_t>(n), static_cast<std::size_t>(r),
                         [&](const SortedTuple& t) { es.push_back(t); });
    return Hypergraph(n, r, std::move(es));
  }

  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool contains(const Edge& e) const { return index_.count(e) != 0; }

  // Returns false if the edge was already present.
  bool add(const Edge& e) {
    validate(e);
    if (!index_.insert(e).second) return false;
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
    return true;
  }

  bool remove(const Edge& e) {
    if (!index_.erase(e)) return false;
    edges_.erase(std::lower_bound(edges_.begin(), edges_.end(), e));
    return true;
  }

  // Grows the vertex range; existing ids are unchanged.
  void resize(int n) {
    if (n < n_) throw ParameterError("cannot shrink vertex range");
    n_ = n;
  }

  // Vertices lying in at least one edge, ascending.
  std::vector<Vertex> touched_vertices() const {
    std::vector<Vertex> vs;
    for (const Edge& e : edges_) vs.insert(vs.end(), e.begin(), e.end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  void validate(const Edge& e) const {
    if (static_cast<int>(e.size()) != r_)
      throw ParameterError("edge {" + e.str() + "} has size " + std::to_string(e.size()) + ", expected " +
                           std::to_string(r_));
    if (!e.empty() && e.back() >= static_cast<Vertex>(n_))
      throw ParameterError("edge {" + e.str() + "} has vertex out of range (n = " + std::to_string(n_) + ")");
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  int r_ = 1;
  std::vector<Edge> edges_;
  std::unordered_set<Edge> index_;
};

/// r-uniform multihypergraph: edge -> multiplicity >= 1.
class MultiHypergraph {
 public:
  MultiHypergraph() = default;
  MultiHypergraph(int n, int r) : n_(n), r_(r) {
    if (n < 0) throw ParameterError("negative vertex count");
    if (r < 1) throw ParameterError("uniformity must be at least 1");
  }

  static MultiHypergraph from_simple(const Hypergraph& g) {
    MultiHypergraph m(g.n(), g.r());
    for (const Edge& e : g.edges()) m.mult_.emplace(e, 1);
    m.total_ = g.size();
    return m;
  }

  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  const std::map<Edge, std::int64_t>& multiplicities() const noexcept { return mult_; }
  std::size_t support_size() const noexcept { return mult_.size(); }
  std::int64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return mult_.empty(); }

  std::int64_t multiplicity(const Edge& e) const {
    auto it = mult_.find(e);
    return it == mult_.end() ? 0 : it->second;
  }

  void add(const Edge& e, std::int64_t k = 1) {
    if (static_cast<int>(e.size()) != r_) throw ParameterError("edge {" + e.str() + "} has wrong size");
    if (!e.empty() && e.back() >= static_cast<Vertex>(n_))
      throw ParameterError("edge {" + e.str() + "} has vertex out of range");
    if (k < 1) throw ParameterError("multiplicity must be positive");
    mult_[e] += k;
    total_ += k;
  }

  // Removes k copies; throws if fewer are present.
  void remove(const Edge& e, std::int64_t k = 1) {
    auto it = mult_.find(e);
    if (it == mult_.end() || it->second < k) throw ParameterError("removing absent edge copy {" + e.str() + "}");
    it->second -= k;
    total_ -= k;
    if (it->second == 0) mult_.erase(it);
  }

  void resize(int n) {
    if (n < n_) throw ParameterError("cannot shrink vertex range");
    n_ = n;
  }

  // Simple(J): the support as a simple hypergraph.
  Hypergraph simple() const {
    std::vector<Edge> es;
    es.reserve(mult_.size());
    for (const auto& [e, k] : mult_) es.push_back(e);
    return Hypergraph(n_, r_, std::move(es));
  }

  friend bool operator==(const MultiHypergraph& a, const MultiHypergraph& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.mult_ == b.mult_;
  }

 private:
  int n_ = 0;
  int r_ = 1;
  std::map<Edge, std::int64_t> mult_;
  std::int64_t total_ = 0;
};

// ---------------------------------------------------------------------------
// Degrees

inline void check_vertex_set(int n, const SortedTuple& s) {
  if (!s.empty() && s.back() >= static_cast<Vertex>(n))
    throw ParameterError("vertex set {" + s.str() + "} has invalid vertex id");
}

inline std::int64_t level_degree(const Hypergraph& g, const SortedTuple& s) {
  check_vertex_set(g.n(), s);
  if (static_cast<int>(s.size()) > g.r()) throw ParameterError("|S| exceeds uniformity");
  std::int64_t d = 0;
  for (const Edge& e : g.edges())
    if (s.is_subset_of(e)) ++d;
  return d;
}

inline std::int64_t level_degree(const MultiHypergraph& g, const SortedTuple& s) {
  check_vertex_set(g.n(), s);
  if (static_cast<int>(s.size()) > g.r()) throw ParameterError("|S| exceeds uniformity");
  std::int64_t d = 0;
  for (const auto& [e, k] : g.multiplicities())
    if (s.is_subset_of(e)) d += k;
  return d;
}

/// Degree of every j-set that lies in some edge (multiplicity-weighted).
template <class EdgeWeightRange>
std::unordered_map<SortedTuple, std::int64_t> level_degrees_from(const EdgeWeightRange& weighted, int j) {
  std::unordered_map<SortedTuple, std::int64_t> deg;
  for (const auto& [e, k] : weighted)
    for_each_subset(e, static_cast<std::size_t>(j), [&](const SortedTuple& s) { deg[s] += k; });
  return deg;
}

inline std::unordered_map<SortedTuple, std::int64_t> level_degrees(const Hypergraph& g, int j) {
  std::vector<std::pair<Edge, std::int64_t>> w;
  w.reserve(g.size());
  for (const Edge& e : g.edges()) w.emplace_back(e, 1);
  return level_degrees_from(w, j);
}

inline std::unordered_map<SortedTuple, std::int64_t> level_degrees(const MultiHypergraph& g, int j) {
  return level_degrees_from(g.multiplicities(), j);
}

template <class G>
std::int64_t max_level_degree(const G& g, int j) {
  if (j < 0 || j > g.r() - 1) throw ParameterError("level j out of range [0, r-1]");
  std::int64_t best = 0;
  for (const auto& [s, d] : level_degrees(g, j)) best = std::max(best, d);
  return best;
}

// ---------------------------------------------------------------------------
// Clique enumeration

namespace detail {

class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t bits) : words_((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i >> 6] |= (1ULL << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  void and_with(const DynBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  }
  void clear_below_or_equal(std::size_t v) {
    std::size_t w = v >> 6;
    for (std::size_t i = 0; i < w && i < words_.size(); ++i) words_[i] = 0;
    if (w < words_.size()) {
      std::size_t b = v & 63;
      words_[w] &= (b == 63) ? 0ULL : ~((2ULL << b) - 1);
    }
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = __builtin_ctzll(w);
        f(i * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// All q-sets whose every r-subset is an edge of g, in lexicographic order.
///
/// Candidate extensions are intersected from per-(r-1)-set neighbour bitsets.
template <class F>
void for_each_clique(const Hypergraph& g, int q, F&& f) {
  const int r = g.r();
  if (q <= r) throw ParameterError("clique size q must exceed uniformity r");
  if (q > static_cast<int>(SortedTuple::kCapacity)) throw CapacityError("clique size exceeds tuple capacity");
  if (g.n() < q || g.empty()) return;
  const auto n = static_cast<std::size_t>(g.n());

  std::unordered_map<SortedTuple, detail::DynBitset> nbr;
  for (const Edge& e : g.edges())
    for (Vertex v : e) {
      auto [it, ins] = nbr.try_emplace(e.without(v), n);
      it->second.set(v);
    }
  const detail::DynBitset empty_bits(n);

  std::vector<Vertex> cur;
  cur.reserve(static_cast<std::size_t>(q));

  // Candidates for extending `cur` (|cur| >= r-1): common neighbours of all
  // (r-1)-subsets of cur that contain the newest vertex, intersected with the
  // parent's candidate set.
  auto recurse = [&](auto&& self, const detail::DynBitset& cand) -> void {
    if (static_cast<int>(cur.size()) == q) {
      f(SortedTuple::from_sorted(cur));
      return;
    }
    cand.for_each([&](std::size_t v) {
      cur.push_back(static_cast<Vertex>(v));
      detail::DynBitset next = cand;
      next.clear_below_or_equal(v);
      if (static_cast<int>(cur.size()) < q) {
        SortedTuple t = SortedTuple::from_sorted(cur);
        bool dead = false;
        if (r == 1) {
          // (r-1)-sets are empty; cand already restricted to edge vertices.
        } else {
          for_each_subset(t.without(static_cast<Vertex>(v)), static_cast<std::size_t>(r - 2),
                          [&](const SortedTuple& s) {
                            if (dead) return;
                            auto it = nbr.find(s.with(static_cast<Vertex>(v)));
                            if (it == nbr.end()) dead = true;
                            else next.and_with(it->second);
                          });
        }
        if (!dead) self(self, next);
      } else {
        self(self, next);
      }
      cur.pop_back();
    });
  };

  // Seed: all (r-1)-prefix tuples that are (r-1)-sets with neighbours.
  if (r == 1) {
    auto it = nbr.find(SortedTuple{});
    if (it != nbr.end()) recurse(recurse, it->second);
    return;
  }
  std::vector<SortedTuple> seeds;
  seeds.reserve(nbr.size());
  for (const auto& [s, bits] : nbr) seeds.push_back(s);
  std::sort(seeds.begin(), seeds.end());
  for (const SortedTuple& s : seeds) {
    // Seed sets are only the lexicographically-first (r-1)-prefix of a clique;
    // candidates must exceed its largest vertex and be adjacent to s.
    detail::DynBitset cand = nbr.at(s);
    cand.clear_below_or_equal(s.back());
    // Every (r-1)-subset of the prefix must itself be a neighbourhood key, which
    // holds automatically once a candidate v gives s+v as an edge.
    cur.assign(s.begin(), s.end());
    bool any = false;
    cand.for_each([&](std::size_t) { any = true; });
    if (any) recurse(recurse, cand);
  }
  (void)empty_bits;
}

inline std::vector<Clique> enumerate_cliques(const Hypergraph& g, int q) {
  std::vector<Clique> out;
  for_each_clique(g, q, [&](const Clique& c) { out.push_back(c); });
  return out;
}

inline bool is_clique_of(const Hypergraph& g, const Clique& c) {
  bool ok = true;
  for_each_subset(c, static_cast<std::size_t>(g.r()), [&](const SortedTuple& e) {
    if (ok && !g.contains(e)) ok = false;
  });
  return ok;
}

// ---------------------------------------------------------------------------
// Packings and decompositions

/// Clique family over an n-vertex r-graph (validity is checked separately).
struct Packing {
  int n = 0;
  int q = 0;
  int r = 0;
  std::vector<Clique> cliques;

  friend bool operator==(const Packing&, const Packing&) = default;
};

// Multiset of r-subsets covered by the cliques.
inline MultiHypergraph covered_edges(int n, int r, const std::vector<Clique>& cliques) {
  MultiHypergraph m(n, r);
  for (const Clique& c : cliques) for_each_subset(c, static_cast<std::size_t>(r), [&](const Edge& e) { m.add(e); });
  return m;
}

/// Pairwise edge-disjoint and every member is a q-clique of host.
inline bool is_packing_of(const Packing& p, const Hypergraph& host) {
  std::unordered_set<Edge> used;
  for (const Clique& c : p.cliques) {
    if (static_cast<int>(c.size()) != p.q) return false;
    bool ok = true;
    for_each_subset(c, static_cast<std::size_t>(host.r()), [&](const Edge& e) {
      if (!ok) return;
      if (!host.contains(e) || !used.insert(e).second) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

inline bool decomposes(const std::vector<Clique>& cliques, int q, const MultiHypergraph& target) {
  for (const Clique& c : cliques)
    if (static_cast<int>(c.size()) != q) return false;
  for (const Clique& c : cliques)
    if (!c.empty() && c.back() >= static_cast<Vertex>(target.n())) return false;
  return covered_edges(target.n(), target.r(), cliques) == target;
}

inline bool decomposes(const std::vector<Clique>& cliques, int q, const Hypergraph& target) {
  return decomposes(cliques, q, MultiHypergraph::from_simple(target));
}

/// A clique family whose r-subsets partition a target edge multiset exactly.
/// Every constructor verifies this.
class Decomposition {
 public:
  Decomposition() = default;

  static Decomposition make(const MultiHypergraph& target, int q, std::vector<Clique> cliques) {
    if (!decomposes(cliques, q, target)) throw ConstructionError("clique family is not a decomposition of the target");
    Decomposition d;
    d.p_ = Packing{target.n(), q, target.r(), std::move(cliques)};
    return d;
  }

  static Decomposition make(const Hypergraph& target, int q, std::vector<Clique> cliques) {
    return make(MultiHypergraph::from_simple(target), q, std::move(cliques));
  }

  int n() const noexcept { return p_.n; }
  int q() const noexcept { return p_.q; }
  int r() const noexcept { return p_.r; }
  std::size_t size() const noexcept { return p_.cliques.size(); }
  const std::vector<Clique>& cliques() const noexcept { return p_.cliques; }
  const Packing& packing() const noexcept { return p_; }

 private:
  Packing p_;
};

// ---------------------------------------------------------------------------
// Misc graph algebra

inline Hypergraph union_of(const Hypergraph& a, const Hypergraph& b) {
  if (a.r() != b.r()) throw ParameterError("uniformity mismatch");
  Hypergraph u(std::max(a.n(), b.n()), a.r(), a.edges());
  for (const Edge& e : b.edges()) u.add(e);
  return u;
}

inline Hypergraph difference(const Hypergraph& a, const Hypergraph& b) {
  std::vector<Edge> es;
  for (const Edge& e : a.edges())
    if (!b.contains(e)) es.push_back(e);
  return Hypergraph(a.n(), a.r(), std::move(es));
}

inline bool edge_disjoint(const Hypergraph& a, const Hypergraph& b) {
  const Hypergraph& small = a.size() < b.size() ? a : b;
  const Hypergraph& large = a.size() < b.size() ? b : a;
  for (const Edge& e : small.edges())
    if (large.contains(e)) return false;
  return true;
}

inline MultiHypergraph multi_union(const MultiHypergraph& a, const MultiHypergraph& b) {
  MultiHypergraph u(std::max(a.n(), b.n()), a.r());
  for (const auto& [e, k] : a.multiplicities()) u.add(e, k);
  for (const auto& [e, k] : b.multiplicities()) u.add(e, k);
  return u;
}

// Relabels vertices by `map` (must cover every vertex of every edge).
inline Hypergraph relabel(const Hypergraph& g, const std::unordered_map<Vertex, Vertex>& map, int new_n) {
  std::vector<Edge> es;
  es.reserve(g.size());
  for (const Edge& e : g.edges()) {
    std::vector<Vertex> vs;
    for (Vertex v : e) vs.push_back(map.at(v));
    es.emplace_back(vs);
  }
  return Hypergraph(new_n, g.r(), std::move(es));
}

inline Clique relabel(const Clique& c, const std::unordered_map<Vertex, Vertex>& map) {
  std::vector<Vertex> vs;
  for (Vertex v : c) vs.push_back(map.at(v));
  return Clique(vs);
}

}  // namespace absorb
