#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/rng.hpp>

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace absorb {

struct DesignParams {
  std::int64_t n = 0, q = 0, r = 0, lambda = 1;

  void validate() const {
    if (!(n > q && q > r && r >= 1 && lambda >= 1))
      throw ParameterError("design parameters need n > q > r >= 1 and lambda >= 1");
  }
};

// Per-level verdicts: entry i says whether binom(q-i, r-i) | lambda * binom(n-i, r-i).
inline std::vector<bool> admissibility_by_level(const DesignParams& p) {
  p.validate();
  std::vector<bool> out;
  for (std::int64_t i = 0; i < p.r; ++i) {
    auto d = binom(p.q - i, p.r - i);
    auto num = static_cast<unsigned __int128>(p.lambda) * binom(p.n - i, p.r - i);
    out.push_back(num % d == 0);
  }
  return out;
}

inline bool params_admissible(const DesignParams& p) {
  for (bool b : admissibility_by_level(p))
    if (!b) return false;
  return true;
}

namespace detail {

template <class WeightedEdges>
bool divisible_weighted(const WeightedEdges& edges, int r, int q) {
  if (q <= r) throw ParameterError("clique size q must exceed uniformity r");
  for (int i = 0; i < r; ++i) {
    auto d = static_cast<std::int64_t>(binom(q - i, r - i));
    for (const auto& [s, deg] : level_degrees_from(edges, i))
      if (deg % d != 0) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_divisible(const Hypergraph& g, int q) {
  std::vector<std::pair<Edge, std::int64_t>> w;
  w.reserve(g.size());
  for (const Edge& e : g.edges()) w.emplace_back(e, 1);
  return detail::divisible_weighted(w, g.r(), q);
}

inline bool is_divisible(const MultiHypergraph& g, int q) {
  return detail::divisible_weighted(g.multiplicities(), g.r(), q);
}

constexpr std::size_t kExhaustiveDivisibleCap = 24;

/// Calls f(L) for every divisible edge-subset L of X (exhaustive) in the
/// order of a depth-first include/exclude walk over X's sorted edges.
/// Stops early once `limit` subgraphs were produced (limit <= 0: no limit).
/// Returns the number produced.
template <class F>
std::int64_t for_each_divisible_subgraph(const Hypergraph& x, int q, F&& f, std::int64_t limit = 0) {
  const int r = x.r();
  if (q <= r) throw ParameterError("clique size q must exceed uniformity r");
  if (x.size() > kExhaustiveDivisibleCap)
    throw CapacityError("exhaustive divisible-subgraph enumeration is capped at " +
                        std::to_string(kExhaustiveDivisibleCap) + " edges");
  const auto& es = x.edges();
  const std::size_t m = es.size();

  // Index every i-set (i < r) that occurs in an edge; remember the last edge
  // containing it so its degree can be checked as soon as it is final.
  std::unordered_map<SortedTuple, int> id;
  std::vector<std::int64_t> modulus;
  std::vector<std::vector<int>> sets_of_edge(m), closing(m);
  for (std::size_t k = 0; k < m; ++k)
    for (int i = 0; i < r; ++i)
      for_each_subset(es[k], static_cast<std::size_t>(i), [&](const SortedTuple& s) {
        auto [it, ins] = id.try_emplace(s, static_cast<int>(modulus.size()));
        if (ins) modulus.push_back(static_cast<std::int64_t>(binom(q - i, r - i)));
        sets_of_edge[k].push_back(it->second);
      });
  std::vector<int> last(modulus.size(), -1);
  for (std::size_t k = 0; k < m; ++k)
    for (int s : sets_of_edge[k]) last[static_cast<std::size_t>(s)] = static_cast<int>(k);
  for (std::size_t s = 0; s < last.size(); ++s) closing[static_cast<std::size_t>(last[s])].push_back(static_cast<int>(s));

  std::vector<std::int64_t> deg(modulus.size(), 0);
  std::vector<char> chosen(m, 0);
  std::int64_t produced = 0;
  bool stop = false;

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (stop) return;
    if (k == m) {
      std::vector<Edge> sel;
      for (std::size_t j = 0; j < m; ++j)
        if (chosen[j]) sel.push_back(es[j]);
      f(Hypergraph(x.n(), r, std::move(sel)));
      ++produced;
      if (limit > 0 && produced >= limit) stop = true;
      return;
    }
    for (int take = 0; take <= 1 && !stop; ++take) {
      chosen[k] = static_cast<char>(take);
      if (take)
        for (int s : sets_of_edge[k]) ++deg[static_cast<std::size_t>(s)];
      bool ok = true;
      for (int s : closing[k])
        if (deg[static_cast<std::size_t>(s)] % modulus[static_cast<std::size_t>(s)] != 0) ok = false;
      if (ok) self(self, k + 1);
      if (take)
        for (int s : sets_of_edge[k]) --deg[static_cast<std::size_t>(s)];
    }
    chosen[k] = 0;
  };
  rec(rec, 0);
  return produced;
}

inline std::vector<Hypergraph> divisible_subgraphs(const Hypergraph& x, int q, std::int64_t limit = 0) {
  std::vector<Hypergraph> out;
  for_each_divisible_subgraph(x, q, [&](Hypergraph&& l) { out.push_back(std::move(l)); }, limit);
  return out;
}

/// Sampling mode: `trials` uniformly random edge-subsets of X, keeping the
/// divisible ones (the empty set counts like any other draw).
inline std::vector<Hypergraph> sample_divisible_subgraphs(const Hypergraph& x, int q, std::int64_t trials,
                                                          std::uint64_t seed) {
  if (q <= x.r()) throw ParameterError("clique size q must exceed uniformity r");
  Rng rng(seed);
  std::vector<Hypergraph> out;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::vector<Edge> sel;
    for (const Edge& e : x.edges())
      if (rng.next() & 1ULL) sel.push_back(e);
    Hypergraph l(x.n(), x.r(), std::move(sel));
    if (is_divisible(l, q)) out.push_back(std::move(l));
  }
  return out;
}

}  // namespace absorb
