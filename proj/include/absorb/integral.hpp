#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/hypercore.hpp>

#include <gmpxx.h>

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace absorb {

constexpr std::uint64_t kIntegralColumnCap = 3000;

/// 0/1 incidence of r-subsets (rows) in q-subsets (columns) of {0..v-1}.
struct InclusionMatrix {
  int v = 0, q = 0, r = 0;
  std::vector<SortedTuple> rows;  // lexicographic
  std::vector<SortedTuple> cols;  // lexicographic
  std::unordered_map<SortedTuple, int> row_index;

  bool entry(std::size_t i, std::size_t j) const { return rows[i].is_subset_of(cols[j]); }

  // Row indices of the nonzero entries of column j.
  std::vector<int> column_support(std::size_t j) const {
    std::vector<int> out;
    for_each_subset(cols[j], static_cast<std::size_t>(r),
                    [&](const SortedTuple& e) { out.push_back(row_index.at(e)); });
    return out;
  }
};

inline InclusionMatrix inclusion_matrix(int v, int q, int r) {
  if (r < 1 || q <= r) throw ParameterError("need q > r >= 1");
  if (v < q) throw ParameterError("vertex set smaller than clique size");
  InclusionMatrix m{v, q, r, {}, {}, {}};
  for_each_combination(static_cast<std::size_t>(v), static_cast<std::size_t>(r), [&](const SortedTuple& t) {
    m.row_index.emplace(t, static_cast<int>(m.rows.size()));
    m.rows.push_back(t);
  });
  for_each_combination(static_cast<std::size_t>(v), static_cast<std::size_t>(q),
                       [&](const SortedTuple& t) { m.cols.push_back(t); });
  return m;
}

/// Sparse integer clique weights over K_v^r (unlisted cliques weigh 0).
struct IntegralWeighting {
  int n = 0, q = 0, r = 0;
  std::map<Clique, mpz_class> phi;

  mpz_class at(const Clique& c) const {
    auto it = phi.find(c);
    return it == phi.end() ? mpz_class(0) : it->second;
  }
  std::size_t support() const { return phi.size(); }
  mpz_class l1() const {
    mpz_class s = 0;
    for (const auto& [c, w] : phi) s += abs(w);
    return s;
  }
};

inline bool verify_integral(const Hypergraph& l, const IntegralWeighting& w) {
  if (w.r != l.r()) return false;
  std::unordered_map<Edge, mpz_class> sums;
  for (const auto& [c, k] : w.phi) {
    if (static_cast<int>(c.size()) != w.q) return false;
    if (!c.empty() && c.back() >= static_cast<Vertex>(l.n())) return false;
    if (k == 0) continue;
    for_each_subset(c, static_cast<std::size_t>(l.r()), [&](const Edge& e) { sums[e] += k; });
  }
  for (const Edge& e : l.edges())
    if (sums[e] != 1) return false;
  for (const auto& [e, s] : sums)
    if (s != (l.contains(e) ? 1 : 0)) return false;
  return true;
}

namespace detail {

// Column-style echelon reduction of A (stored by columns) with a unimodular
// transform U such that A_original * U = A_reduced.
struct ColumnEchelon {
  std::vector<std::vector<mpz_class>> a;  // a[j][i]
  std::vector<std::vector<mpz_class>> u;  // u[j][k]
  std::vector<int> pivot_row;             // pivot_row[k] = row of column k's leading entry
  std::size_t rows = 0, cols = 0;

  void col_sub(std::size_t dst, std::size_t src, const mpz_class& f, std::size_t from_row) {
    for (std::size_t i = from_row; i < rows; ++i)
      if (a[src][i] != 0) a[dst][i] -= f * a[src][i];
    for (std::size_t k = 0; k < cols; ++k)
      if (u[src][k] != 0) u[dst][k] -= f * u[src][k];
  }

  void run() {
    u.assign(cols, std::vector<mpz_class>(cols, 0));
    for (std::size_t j = 0; j < cols; ++j) u[j][j] = 1;
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows && k < cols; ++i) {
      while (true) {
        // Smallest nonzero |a[j][i]| among j >= k moves to column k.
        std::size_t best = cols;
        for (std::size_t j = k; j < cols; ++j)
          if (a[j][i] != 0 && (best == cols || mpz_cmpabs(a[j][i].get_mpz_t(), a[best][i].get_mpz_t()) < 0)) best = j;
        if (best == cols) break;
        if (best != k) {
          std::swap(a[best], a[k]);
          std::swap(u[best], u[k]);
        }
        bool clean = true;
        for (std::size_t j = k + 1; j < cols; ++j) {
          if (a[j][i] == 0) continue;
          mpz_class f;
          mpz_fdiv_q(f.get_mpz_t(), a[j][i].get_mpz_t(), a[k][i].get_mpz_t());
          col_sub(j, k, f, i);
          if (a[j][i] != 0) clean = false;
        }
        if (clean) break;
      }
      if (a[k][i] != 0) {
        pivot_row.push_back(static_cast<int>(i));
        ++k;
      }
    }
  }

  std::size_t rank() const { return pivot_row.size(); }
};

}  // namespace detail

struct IntegralSolve {
  std::optional<IntegralWeighting> weighting;
  std::vector<std::vector<mpz_class>> kernel;  // integer kernel basis, indexed like InclusionMatrix::cols
};

/// Solves M phi = chi_L over the integers on the ambient set {0..n-1}.
/// `reduce` applies greedy kernel-vector subtraction to shrink (support, L1).
inline IntegralSolve integral_solve(const Hypergraph& l, int q, bool reduce = false) {
  const int r = l.r();
  const int v = l.n();
  if (q <= r) throw ParameterError("clique size q must exceed uniformity r");
  IntegralSolve out;
  if (v < q) {
    if (l.empty()) out.weighting = IntegralWeighting{v, q, r, {}};
    return out;
  }
  if (binom(v, q) > kIntegralColumnCap)
    throw CapacityError("integral solve needs binom(n, q) <= " + std::to_string(kIntegralColumnCap));
  InclusionMatrix m = inclusion_matrix(v, q, r);
  detail::ColumnEchelon ce;
  ce.rows = m.rows.size();
  ce.cols = m.cols.size();
  ce.a.assign(ce.cols, std::vector<mpz_class>(ce.rows, 0));
  for (std::size_t j = 0; j < ce.cols; ++j)
    for (int i : m.column_support(j)) ce.a[j][static_cast<std::size_t>(i)] = 1;
  ce.run();

  std::vector<mpz_class> b(ce.rows, 0);
  for (const Edge& e : l.edges()) b[static_cast<std::size_t>(m.row_index.at(e))] = 1;

  // Forward substitution: H y = b with H lower-echelon.
  const std::size_t rank = ce.rank();
  std::vector<mpz_class> y(ce.cols, 0);
  std::size_t k = 0;
  bool feasible = true;
  for (std::size_t i = 0; i < ce.rows && feasible; ++i) {
    mpz_class acc = b[i];
    for (std::size_t t = 0; t < k; ++t)
      if (ce.a[t][i] != 0) acc -= ce.a[t][i] * y[t];
    if (k < rank && ce.pivot_row[k] == static_cast<int>(i)) {
      if (!mpz_divisible_p(acc.get_mpz_t(), ce.a[k][i].get_mpz_t())) feasible = false;
      else mpz_divexact(y[k].get_mpz_t(), acc.get_mpz_t(), ce.a[k][i].get_mpz_t());
      ++k;
    } else if (acc != 0) {
      feasible = false;
    }
  }

  for (std::size_t j = rank; j < ce.cols; ++j) out.kernel.push_back(ce.u[j]);
  if (!feasible) return out;

  std::vector<mpz_class> phi(ce.cols, 0);
  for (std::size_t t = 0; t < rank; ++t)
    if (y[t] != 0)
      for (std::size_t c = 0; c < ce.cols; ++c)
        if (ce.u[t][c] != 0) phi[c] += y[t] * ce.u[t][c];

  if (reduce && !out.kernel.empty()) {
    auto cost = [](const std::vector<mpz_class>& x) {
      std::size_t s = 0;
      mpz_class n1 = 0;
      for (const auto& z : x)
        if (z != 0) {
          ++s;
          n1 += abs(z);
        }
      return std::make_pair(s, n1);
    };
    auto l1 = [](const std::vector<mpz_class>& x) {
      mpz_class n1 = 0;
      for (const auto& z : x) n1 += abs(z);
      return n1;
    };
    auto& ker = out.kernel;
    // Pairwise size reduction of the kernel basis in L1.
    for (int round = 0; round < 8; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < ker.size(); ++a)
        for (std::size_t bidx = 0; bidx < ker.size(); ++bidx) {
          if (a == bidx) continue;
          for (int s : {1, -1}) {
            std::vector<mpz_class> t = ker[a];
            for (std::size_t c = 0; c < t.size(); ++c) t[c] -= s * ker[bidx][c];
            if (l1(t) < l1(ker[a])) {
              ker[a] = std::move(t);
              changed = true;
            }
          }
        }
      if (!changed) break;
    }
    for (int round = 0; round < 1000; ++round) {
      bool changed = false;
      for (const auto& w : ker)
        for (int s : {1, -1}) {
          std::vector<mpz_class> t = phi;
          for (std::size_t c = 0; c < t.size(); ++c) t[c] -= s * w[c];
          if (cost(t) < cost(phi)) {
            phi = std::move(t);
            changed = true;
          }
        }
      if (!changed) break;
    }
  }

  IntegralWeighting w{v, q, r, {}};
  for (std::size_t c = 0; c < ce.cols; ++c)
    if (phi[c] != 0) w.phi.emplace(m.cols[c], phi[c]);
  ensure(verify_integral(l, w), "integral solve produced an invalid weighting");
  out.weighting = std::move(w);
  return out;
}

inline std::optional<IntegralWeighting> integral_decomposition(const Hypergraph& l, int q, bool reduce = false) {
  return integral_solve(l, q, reduce).weighting;
}

/// Positive cliques decompose L + A, negative cliques decompose A.
struct MultiAbsorber {
  MultiHypergraph a;
  std::vector<Clique> q1;  // with repeats
  std::vector<Clique> q2;  // with repeats
};

inline MultiAbsorber multi_absorber(const Hypergraph& l, const IntegralWeighting& w) {
  if (!verify_integral(l, w)) throw PreconditionError("weighting is not an integral decomposition of L");
  MultiAbsorber out{MultiHypergraph(l.n(), l.r()), {}, {}};
  for (const auto& [c, k] : w.phi) {
    if (!k.fits_slong_p()) throw CapacityError("clique weight too large for a multi-absorber");
    long mult = k.get_si();
    if (mult > 0) {
      for (long t = 0; t < mult; ++t) out.q1.push_back(c);
    } else {
      for (long t = 0; t < -mult; ++t) {
        out.q2.push_back(c);
        for_each_subset(c, static_cast<std::size_t>(l.r()), [&](const Edge& e) { out.a.add(e); });
      }
    }
  }
  MultiHypergraph la = multi_union(MultiHypergraph::from_simple(l), out.a);
  ensure(decomposes(out.q1, w.q, la), "positive cliques do not decompose L + A");
  ensure(out.q2.empty() ? out.a.empty() : decomposes(out.q2, w.q, out.a), "negative cliques do not decompose A");
  return out;
}

inline void write_weighting(std::ostream& os, const IntegralWeighting& w) {
  for (const auto& [c, k] : w.phi) os << (k > 0 ? "+" : "") << k.get_str() << ' ' << c.str() << '\n';
}

}  // namespace absorb
