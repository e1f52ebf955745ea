#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/divide.hpp>
#include <absorb/hypercore.hpp>

#include <map>
#include <string>
#include <vector>

namespace absorb {

struct DesignReport {
  bool pass = false;
  std::int64_t lambda = 1;
  std::map<std::int64_t, std::int64_t> histogram;  // coverage count -> number of r-subsets
  std::int64_t malformed = 0;                      // cliques of the wrong size or out of range
  std::vector<std::pair<Edge, std::int64_t>> off_target;  // first few r-subsets with count != lambda
};

/// Exact per-r-subset coverage of {0..n-1}; passes iff every count equals lambda.
inline DesignReport verify_design(const std::vector<Clique>& cliques, const DesignParams& p, std::size_t examples = 10) {
  p.validate();
  DesignReport rep;
  rep.lambda = p.lambda;
  std::unordered_map<Edge, std::int64_t> cov;
  for (const Clique& c : cliques) {
    bool ok = static_cast<std::int64_t>(c.size()) == p.q;
    for (Vertex v : c)
      if (static_cast<std::int64_t>(v) >= p.n) ok = false;
    if (!ok) {
      ++rep.malformed;
      continue;
    }
    for_each_subset(c, static_cast<std::size_t>(p.r), [&](const Edge& e) { ++cov[e]; });
  }
  for_each_combination(static_cast<std::size_t>(p.n), static_cast<std::size_t>(p.r), [&](const Edge& e) {
    auto it = cov.find(e);
    std::int64_t k = it == cov.end() ? 0 : it->second;
    ++rep.histogram[k];
    if (k != p.lambda && rep.off_target.size() < examples) rep.off_target.emplace_back(e, k);
  });
  rep.pass = rep.malformed == 0 && rep.histogram.size() == 1 && rep.histogram.begin()->first == p.lambda;
  return rep;
}

inline DesignReport verify_design(const Decomposition& d, const DesignParams& p) { return verify_design(d.cliques(), p); }

/// Bose (n = 3 mod 6) and Skolem (n = 1 mod 6) triple systems.
inline Decomposition oracle_steiner(int n) {
  if (n < 1 || (n % 6 != 1 && n % 6 != 3)) throw ParameterError("STS(" + std::to_string(n) + ") needs n = 1, 3 mod 6");
  std::vector<Clique> t;
  auto add = [&](Vertex a, Vertex b, Vertex c) { t.push_back(Clique{a, b, c}); };
  if (n % 6 == 3) {
    const int m = n / 3;  // odd
    auto id = [&](int x, int i) { return static_cast<Vertex>(3 * x + i); };
    auto op = [&](int x, int y) { return ((x + y) * ((m + 1) / 2)) % m; };
    for (int x = 0; x < m; ++x) add(id(x, 0), id(x, 1), id(x, 2));
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y)
        for (int i = 0; i < 3; ++i) add(id(x, i), id(y, i), id(op(x, y), (i + 1) % 3));
  } else if (n > 1) {
    const int k = (n - 1) / 6;
    const int m = 2 * k;
    auto id = [&](int x, int i) { return static_cast<Vertex>(3 * x + i); };
    const auto inf = static_cast<Vertex>(n - 1);
    auto op = [&](int x, int y) {
      int s = (x + y) % m;
      return s % 2 == 0 ? s / 2 : (s + m - 1) / 2;
    };
    for (int x = 0; x < k; ++x) add(id(x, 0), id(x, 1), id(x, 2));
    for (int x = 0; x < k; ++x)
      for (int i = 0; i < 3; ++i) add(inf, id(x + k, i), id(x, (i + 1) % 3));
    for (int x = 0; x < m; ++x)
      for (int y = x + 1; y < m; ++y)
        for (int i = 0; i < 3; ++i) add(id(x, i), id(y, i), id(op(x, y), (i + 1) % 3));
  }
  return Decomposition::make(Hypergraph::complete(n, 2), 3, std::move(t));
}

}  // namespace absorb
