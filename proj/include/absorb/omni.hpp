#pragma once

#include <absorb/divide.hpp>
#include <absorb/exactcover.hpp>
#include <absorb/gadgets.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/rng.hpp>

#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace absorb {

/// X, A, the decomposition family F_A, the decomposition procedure Q_A and
/// the claimed refinedness bound C.
struct OmniAbsorberCertificate {
  Hypergraph x;
  Hypergraph a;
  int q = 0;
  std::vector<Clique> family;
  std::function<std::vector<Clique>(const Hypergraph&)> decompose;
  std::int64_t c_bound = 0;
  std::string kind;
  std::vector<AbsorberCertificate> parts;  // private absorbers (small kind only)
};

// ---------------------------------------------------------------------------
// 1-uniform construction from two tight paths.

inline OmniAbsorberCertificate omni_1d(const Hypergraph& x, int q) {
  if (x.r() != 1) throw ParameterError("omni_1d needs a 1-uniform X");
  if (q < 2) throw ParameterError("omni_1d needs q >= 2");
  std::vector<Vertex> xs;
  for (const Edge& e : x.edges()) xs.push_back(e[0]);
  const std::size_t m = xs.size();
  const auto first = static_cast<Vertex>(x.n());
  const std::size_t na = static_cast<std::size_t>(q) * m;

  std::vector<Vertex> h1, h2;
  for (std::size_t i = 0; i < na; ++i) h1.push_back(first + static_cast<Vertex>(i));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(q); ++j) h2.push_back(h1[k * static_cast<std::size_t>(q) + j]);
    h2.push_back(xs[k]);
  }
  std::vector<Clique> fam;
  std::unordered_set<Clique> seen;
  auto windows = [&](const std::vector<Vertex>& order) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(q) <= order.size(); ++i) {
      Clique c(std::span<const Vertex>(order.data() + i, static_cast<std::size_t>(q)));
      if (seen.insert(c).second) fam.push_back(c);
    }
  };
  windows(h1);
  windows(h2);

  std::vector<Edge> aes;
  for (Vertex v : h1) aes.push_back({v});
  OmniAbsorberCertificate cert;
  cert.x = x;
  cert.x.resize(static_cast<int>(first + na));
  cert.a = Hypergraph(static_cast<int>(first + na), 1, std::move(aes));
  cert.q = q;
  cert.family = fam;
  cert.c_bound = 2 * q;
  cert.kind = "1d";
  const std::unordered_set<Vertex> xset(xs.begin(), xs.end());
  cert.decompose = [h2, q, xset, members = std::move(seen)](const Hypergraph& l) {
    if (l.r() != 1) throw ParameterError("L must be 1-uniform");
    if (l.size() % static_cast<std::size_t>(q) != 0)
      throw PreconditionError("|L| = " + std::to_string(l.size()) + " is not divisible by q = " + std::to_string(q));
    std::unordered_set<Vertex> in_l;
    for (const Edge& e : l.edges()) {
      if (!xset.count(e[0])) throw PreconditionError("L is not a subgraph of X");
      in_l.insert(e[0]);
    }
    std::vector<Vertex> seq;
    for (Vertex v : h2)
      if (!xset.count(v) || in_l.count(v)) seq.push_back(v);
    std::vector<Clique> out;
    for (std::size_t i = 0; i < seq.size(); i += static_cast<std::size_t>(q)) {
      Clique blk(std::span<const Vertex>(seq.data() + i, static_cast<std::size_t>(q)));
      ensure(members.count(blk) != 0, "block of the H2 order is not a window of either path");
      out.push_back(blk);
    }
    return out;
  };
  return cert;
}

// ---------------------------------------------------------------------------
// Union of private absorbers, one per divisible L ⊆ X.

struct OmniSmallStats {
  std::size_t divisible_subgraphs = 0;
  std::int64_t max_codegree_a = 0;
};

inline OmniAbsorberCertificate omni_small(const Hypergraph& x, int q, OmniSmallStats* stats = nullptr,
                                          const AbsorberOptions& base_opt = {}) {
  if (x.r() != 2) throw UnsupportedError("omni_small is implemented for r = 2");
  if (x.size() > 12) throw CapacityError("omni_small is capped at e(X) <= 12");
  std::vector<Hypergraph> ls = divisible_subgraphs(x, q);
  std::vector<AbsorberCertificate> abs;
  Vertex next = std::max<Vertex>(base_opt.fresh_start, static_cast<Vertex>(x.n()));
  for (const Hypergraph& l : ls) {
    AbsorberOptions opt = base_opt;
    opt.fresh_start = next;
    abs.push_back(build_absorber(l, q, opt));
    next = std::max<Vertex>(next, static_cast<Vertex>(abs.back().a.n()));
  }
  const int n = static_cast<int>(next);
  Hypergraph a(n, 2);
  for (const auto& c : abs)
    for (const Edge& e : c.a.edges())
      if (!a.add(e)) throw ConstructionError("private absorbers share an edge");
  for (const Edge& e : x.edges())
    if (a.contains(e)) throw ConstructionError("absorber edge lies in X");

  std::vector<Clique> fam;
  std::unordered_set<Clique> seen;
  for (const auto& c : abs) {
    for (const Clique& k : c.d1.cliques())
      if (seen.insert(k).second) fam.push_back(k);
    for (const Clique& k : c.d2.cliques())
      if (seen.insert(k).second) fam.push_back(k);
  }
  std::map<std::vector<Edge>, std::size_t> index;
  for (std::size_t i = 0; i < ls.size(); ++i) index.emplace(ls[i].edges(), i);

  OmniAbsorberCertificate cert;
  cert.x = x;
  cert.x.resize(n);
  cert.a = a;
  cert.q = q;
  cert.family = std::move(fam);
  cert.c_bound = static_cast<std::int64_t>(ls.size());
  cert.kind = "small";
  cert.parts = abs;
  cert.decompose = [abs = std::move(abs), index = std::move(index)](const Hypergraph& l) {
    auto it = index.find(l.edges());
    if (it == index.end()) throw PreconditionError("L is not a divisible subgraph of X");
    std::vector<Clique> out = abs[it->second].d1.cliques();
    for (std::size_t i = 0; i < abs.size(); ++i)
      if (i != it->second) out.insert(out.end(), abs[i].d2.cliques().begin(), abs[i].d2.cliques().end());
    return out;
  };
  if (stats) {
    stats->divisible_subgraphs = ls.size();
    stats->max_codegree_a = a.empty() ? 0 : max_level_degree(a, 1);
  }
  return cert;
}

/// A certificate read back from files: Q_A is replaced by an exact-cover
/// search restricted to the family, so the omni property is re-derived
/// independently of the construction.
inline OmniAbsorberCertificate certificate_from_family(const Hypergraph& x, const Hypergraph& a, int q,
                                                       std::vector<Clique> family, std::int64_t c_bound,
                                                       std::string kind) {
  OmniAbsorberCertificate cert;
  const int n = std::max(x.n(), a.n());
  cert.x = x;
  cert.x.resize(n);
  cert.a = a;
  cert.a.resize(n);
  cert.q = q;
  cert.family = std::move(family);
  cert.c_bound = c_bound;
  cert.kind = std::move(kind);
  cert.decompose = [x = cert.x, a = cert.a, q, fam = cert.family](const Hypergraph& l) {
    for (const Edge& e : l.edges())
      if (!x.contains(e)) throw PreconditionError("L is not a subgraph of X");
    Hypergraph t = a;
    for (const Edge& e : l.edges()) t.add(e);
    std::vector<Clique> inside;
    for (const Clique& c : fam)
      if (is_clique_of(t, c)) inside.push_back(c);
    auto d = find_decomposition(t, q, &inside);
    if (!d) throw ConstructionError("no decomposition of A + L inside the family");
    return d->cliques();
  };
  return cert;
}

// ---------------------------------------------------------------------------
// Verification

struct OmniReport {
  std::size_t tested = 0;
  std::size_t passed = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Checks Q_A(L) ⊆ F_A and that Q_A(L) decomposes A ∪ L exactly.
inline bool check_omni_one(const OmniAbsorberCertificate& c, const Hypergraph& l, const std::unordered_set<Clique>& fam,
                           std::string& why) {
  std::vector<Clique> qs;
  try {
    qs = c.decompose(l);
  } catch (const Error& e) {
    why = e.what();
    return false;
  }
  for (const Clique& k : qs)
    if (!fam.count(k)) {
      why = "clique {" + k.str() + "} is not in the family";
      return false;
    }
  Hypergraph ll = l;
  ll.resize(std::max(l.n(), c.a.n()));
  MultiHypergraph target = MultiHypergraph::from_simple(c.a);
  for (const Edge& e : ll.edges()) target.add(e);
  if (!decomposes(qs, c.q, target)) {
    why = "cliques do not decompose A + L exactly";
    return false;
  }
  return true;
}

// Exactly `count` divisible subgraphs of X drawn by rejection sampling.
inline std::vector<Hypergraph> draw_divisible_subgraphs(const Hypergraph& x, int q, std::int64_t count,
                                                        std::uint64_t seed, std::int64_t max_attempts = 0) {
  if (max_attempts <= 0) max_attempts = 10000 * std::max<std::int64_t>(count, 1);
  Rng rng(seed);
  std::vector<Hypergraph> out;
  for (std::int64_t t = 0; t < max_attempts && static_cast<std::int64_t>(out.size()) < count; ++t) {
    std::vector<Edge> sel;
    for (const Edge& e : x.edges())
      if (rng.next() & 1ULL) sel.push_back(e);
    Hypergraph l(x.n(), x.r(), std::move(sel));
    if (is_divisible(l, q)) out.push_back(std::move(l));
  }
  if (static_cast<std::int64_t>(out.size()) < count)
    throw BudgetError("could not draw enough divisible subgraphs");
  return out;
}

enum class OmniMode { exhaustive, sample };

inline OmniReport verify_omni(const OmniAbsorberCertificate& c, OmniMode mode = OmniMode::exhaustive,
                              std::int64_t trials = 100, std::uint64_t seed = 0) {
  OmniReport rep;
  const std::unordered_set<Clique> fam(c.family.begin(), c.family.end());
  for (const Edge& e : c.x.edges())
    if (c.a.contains(e)) rep.failures.push_back("X and A share edge {" + e.str() + "}");
  auto run = [&](const Hypergraph& l) {
    ++rep.tested;
    std::string why;
    if (check_omni_one(c, l, fam, why)) ++rep.passed;
    else {
      std::string name;
      for (const Edge& e : l.edges()) name += (name.empty() ? "" : ",") + e.str();
      rep.failures.push_back("L = {" + name + "}: " + why);
    }
  };
  if (mode == OmniMode::exhaustive) for_each_divisible_subgraph(c.x, c.q, run);
  else
    for (const Hypergraph& l : draw_divisible_subgraphs(c.x, c.q, trials, seed)) run(l);
  return rep;
}

/// Max number of family members containing an edge of X ∪ A.
inline std::int64_t refinedness(const OmniAbsorberCertificate& c) {
  const int r = c.x.r();
  std::unordered_map<Edge, std::int64_t> cnt;
  for (const Edge& e : c.x.edges()) cnt[e] = 0;
  for (const Edge& e : c.a.edges()) cnt[e] = 0;
  for (const Clique& k : c.family)
    for_each_subset(k, static_cast<std::size_t>(r), [&](const Edge& e) {
      auto it = cnt.find(e);
      if (it != cnt.end()) ++it->second;
    });
  std::int64_t best = 0;
  for (const auto& [e, k] : cnt) best = std::max(best, k);
  return best;
}

}  // namespace absorb
