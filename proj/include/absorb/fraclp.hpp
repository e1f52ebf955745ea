#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/rng.hpp>

#include <gmpxx.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <limits>
#include <string>
#include <unordered_set>
#include <optional>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace absorb {

constexpr std::size_t kLpVariableCap = 20000;

/// Nonnegative rational clique weights on a host graph.
struct FractionalWeighting {
  Hypergraph host;
  int q = 0;
  std::vector<std::pair<Clique, mpq_class>> weights;  // positive entries only
};

/// Per-edge sums equal 1 exactly and every weighted clique is a clique of the host.
inline bool is_fractional_decomposition(const FractionalWeighting& w) {
  const int r = w.host.r();
  std::unordered_map<Edge, mpq_class> sums;
  for (const auto& [c, x] : w.weights) {
    if (x < 0 || static_cast<int>(c.size()) != w.q) return false;
    if (x == 0) continue;
    bool ok = true;
    for_each_subset(c, static_cast<std::size_t>(r), [&](const Edge& e) {
      if (!w.host.contains(e)) ok = false;
      else sums[e] += x;
    });
    if (!ok) return false;
  }
  for (const Edge& e : w.host.edges()) {
    auto it = sums.find(e);
    if (it == sums.end() || it->second != 1) return false;
  }
  return true;
}

inline FractionalWeighting from_decomposition(const Hypergraph& host, const Decomposition& d) {
  FractionalWeighting w{host, d.q(), {}};
  for (const Clique& c : d.cliques()) w.weights.emplace_back(c, mpq_class(1));
  return w;
}

/// Every positive weight is at most C / n^(q-2).
inline bool low_weight_check(const FractionalWeighting& w, const mpq_class& c) {
  mpz_class npow;
  mpz_ui_pow_ui(npow.get_mpz_t(), static_cast<unsigned long>(w.host.n()), static_cast<unsigned long>(w.q - 2));
  mpq_class cc(c);
  cc.canonicalize();
  mpq_class cap(cc / mpq_class(npow));
  for (const auto& [k, x] : w.weights)
    if (x > 0 && x > cap) return false;
  return true;
}

struct LpResult {
  std::optional<FractionalWeighting> weighting;
  // Infeasibility certificate y over the edge rows: y.b > sum_j u_j max(0, y.M_j).
  std::vector<mpq_class> farkas;
  std::vector<Edge> rows;
  std::vector<Clique> columns;
  std::int64_t pivots = 0;
  std::string method;  // "float-basis" or "exact-simplex"
};

namespace detail {

template <class Num>
struct NumTraits;

template <>
struct NumTraits<mpq_class> {
  static int sign(const mpq_class& x) { return sgn(x); }
  static mpq_class from(const mpq_class& x) { return x; }
};

template <>
struct NumTraits<double> {
  static constexpr double eps = 1e-9;
  static int sign(double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); }
  static double from(const mpq_class& x) { return x.get_d(); }
};

/// Phase-one bounded revised simplex for {M x = b, 0 <= x <= u}, M a 0/1
/// matrix given by column supports, b >= 0, starting from the artificial
/// basis. The basis inverse is kept explicitly. Largest-coefficient pricing,
/// switching to Bland's rule after a run of degenerate pivots.
template <class Num>
class PhaseOne {
  using T = NumTraits<Num>;

 public:
  PhaseOne(std::size_t rows, const std::vector<std::vector<int>>& cols, const std::vector<mpq_class>& b,
           const std::optional<mpq_class>& cap)
      : m_(rows), cols_(cols) {
    for (const auto& v : b) b_.push_back(T::from(v));
    if (cap) cap_ = T::from(*cap);
  }

  struct Outcome {
    bool feasible = false;
    std::vector<Num> x;  // structural values
    std::vector<Num> y;  // phase-one duals at optimum
    std::vector<std::size_t> basis;
    std::vector<char> at_upper;
    std::int64_t pivots = 0;
  };

  Outcome run(std::int64_t max_pivots = std::numeric_limits<std::int64_t>::max()) {
    const std::size_t n = cols_.size();
    const std::size_t total = n + m_;
    at_upper_.assign(total, 0);
    basic_pos_.assign(total, -1);
    basis_.resize(m_);
    binv_.assign(m_, std::vector<Num>(m_, Num(0)));
    xb_ = b_;
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n + i;
      basic_pos_[n + i] = static_cast<int>(i);
      binv_[i][i] = 1;
    }
    retired_.assign(total, 0);
    Outcome out;
    int degenerate_run = 0;
    const int bland_after = 50;
    std::vector<Num> y(m_);
    while (true) {
      for (auto& v : y) v = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= n)
          for (std::size_t k = 0; k < m_; ++k)
            if (T::sign(binv_[i][k]) != 0) y[k] += binv_[i][k];
      if (out.pivots >= max_pivots) throw BudgetError("simplex pivot budget exhausted");
      const bool bland = degenerate_run >= bland_after;
      std::size_t enter = total;
      Num best = 0;
      bool increase = true;
      for (std::size_t j = 0; j < total; ++j) {
        if (basic_pos_[j] >= 0 || retired_[j]) continue;
        Num d = reduced_cost(j, y, n);
        const int s = T::sign(d);
        const bool up = at_upper_[j] != 0;
        if ((!up && s < 0) || (up && s > 0)) {
          if (bland) {
            enter = j;
            increase = !up;
            break;
          }
          Num mag = s < 0 ? Num(-d) : d;
          if (enter == total || mag > best) {
            best = mag;
            enter = j;
            increase = !up;
          }
        }
      }
      if (enter == total) break;

      std::vector<Num> alpha = ftran(enter, n);
      const int dir = increase ? 1 : -1;
      std::optional<Num> tmax;
      std::size_t leave = m_;
      bool leave_to_upper = false;
      if (enter < n && cap_) tmax = *cap_;
      for (std::size_t i = 0; i < m_; ++i) {
        const int sa = T::sign(alpha[i]);
        if (sa == 0) continue;
        Num da = dir * alpha[i];
        Num t;
        bool to_upper;
        if (dir * sa > 0) {
          t = xb_[i] / da;
          to_upper = false;
        } else {
          if (basis_[i] >= n || !cap_) continue;
          t = (*cap_ - xb_[i]) / Num(-da);
          to_upper = true;
        }
        if (T::sign(t) < 0) t = 0;
        if (!tmax || t < *tmax || (t == *tmax && leave < m_ && basis_[i] < basis_[leave])) {
          tmax = t;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      if (!tmax) throw ConstructionError("phase-one LP reported unbounded");
      const Num t = *tmax;
      degenerate_run = (T::sign(t) == 0) ? degenerate_run + 1 : 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (T::sign(alpha[i]) != 0) xb_[i] -= dir * t * alpha[i];
      ++out.pivots;
      if (leave == m_) {
        at_upper_[enter] = increase ? 1 : 0;
        continue;
      }
      Num enter_value = increase ? t : Num(*cap_ - t);
      std::size_t old = basis_[leave];
      basic_pos_[old] = -1;
      at_upper_[old] = leave_to_upper ? 1 : 0;
      if (old >= n) retired_[old] = 1;
      basis_[leave] = enter;
      basic_pos_[enter] = static_cast<int>(leave);
      at_upper_[enter] = 0;
      xb_[leave] = enter_value;
      pivot(leave, alpha);
    }
    Num obj = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n) obj += xb_[i];
    out.feasible = T::sign(obj) == 0;
    out.x.assign(n, Num(0));
    for (std::size_t j = 0; j < n; ++j)
      if (at_upper_[j]) out.x[j] = *cap_;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n) out.x[basis_[i]] = xb_[i];
    out.y = std::move(y);
    out.basis = basis_;
    out.at_upper = at_upper_;
    return out;
  }

 private:
  Num reduced_cost(std::size_t j, const std::vector<Num>& y, std::size_t n) const {
    if (j >= n) return Num(1 - y[j - n]);
    Num s = 0;
    for (int i : cols_[j]) s += y[static_cast<std::size_t>(i)];
    return Num(-s);
  }

  std::vector<Num> ftran(std::size_t j, std::size_t n) const {
    std::vector<Num> a(m_, Num(0));
    if (j >= n) {
      for (std::size_t i = 0; i < m_; ++i) a[i] = binv_[i][j - n];
      return a;
    }
    for (std::size_t i = 0; i < m_; ++i)
      for (int k : cols_[j]) a[i] += binv_[i][static_cast<std::size_t>(k)];
    return a;
  }

  void pivot(std::size_t r, const std::vector<Num>& alpha) {
    const Num piv = alpha[r];
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < m_; ++k)
      if (T::sign(binv_[r][k]) != 0) {
        binv_[r][k] /= piv;
        nz.push_back(k);
      } else {
        binv_[r][k] = 0;
      }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || T::sign(alpha[i]) == 0) continue;
      const Num f = alpha[i];
      for (std::size_t k : nz) binv_[i][k] -= f * binv_[r][k];
    }
  }

  std::size_t m_;
  const std::vector<std::vector<int>>& cols_;
  std::vector<Num> b_;
  std::optional<Num> cap_;
  std::vector<std::size_t> basis_;
  std::vector<int> basic_pos_;
  std::vector<char> at_upper_, retired_;
  std::vector<std::vector<Num>> binv_;
  std::vector<Num> xb_;
};

/// Exact solve of a square sparse system by Gaussian elimination with a
/// fewest-nonzeros pivot rule. Returns nothing if the system is singular.
inline std::optional<std::vector<mpq_class>> sparse_solve(std::vector<std::map<int, mpq_class>> rows,
                                                          std::vector<mpq_class> rhs) {
  const std::size_t m = rows.size();
  std::vector<std::set<int>> col_rows(m);
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [c, v] : rows[i]) col_rows[static_cast<std::size_t>(c)].insert(static_cast<int>(i));
  std::vector<char> active(m, 1);
  std::vector<std::pair<std::size_t, int>> order;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t p = m;
    for (std::size_t i = 0; i < m; ++i)
      if (active[i] && (p == m || rows[i].size() < rows[p].size())) p = i;
    if (rows[p].empty()) return std::nullopt;
    int c = -1;
    for (const auto& [k, v] : rows[p])
      if (c < 0 || col_rows[static_cast<std::size_t>(k)].size() < col_rows[static_cast<std::size_t>(c)].size()) c = k;
    active[p] = 0;
    for (const auto& [k, v] : rows[p]) col_rows[static_cast<std::size_t>(k)].erase(static_cast<int>(p));
    const mpq_class piv = rows[p].at(c);
    std::vector<int> targets(col_rows[static_cast<std::size_t>(c)].begin(), col_rows[static_cast<std::size_t>(c)].end());
    for (int i2 : targets) {
      auto& row = rows[static_cast<std::size_t>(i2)];
      const mpq_class f = row.at(c) / piv;
      for (const auto& [k, v] : rows[p]) {
        mpq_class nv = row[k] - f * v;
        if (nv == 0) {
          row.erase(k);
          col_rows[static_cast<std::size_t>(k)].erase(i2);
        } else {
          row[k] = nv;
          col_rows[static_cast<std::size_t>(k)].insert(i2);
        }
      }
      rhs[static_cast<std::size_t>(i2)] -= f * rhs[p];
    }
    order.emplace_back(p, c);
  }
  std::vector<mpq_class> z(m, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& [p, c] = *it;
    mpq_class s = rhs[p];
    for (const auto& [k, v] : rows[p])
      if (k != c) s -= v * z[static_cast<std::size_t>(k)];
    z[static_cast<std::size_t>(c)] = s / rows[p].at(c);
  }
  return z;
}

}  // namespace detail

/// Checks y.b > sum_j u_j max(0, y.M_j) exactly (uncapped: y.M_j <= 0 for all j and y.b > 0).
inline bool check_farkas(const LpResult& res, int r, const std::optional<mpq_class>& cap) {
  if (res.farkas.size() != res.rows.size()) return false;
  std::unordered_map<Edge, std::size_t> row;
  for (std::size_t i = 0; i < res.rows.size(); ++i) row[res.rows[i]] = i;
  mpq_class yb = 0;
  for (const auto& v : res.farkas) yb += v;
  mpq_class rhs = 0;
  for (const Clique& c : res.columns) {
    mpq_class s = 0;
    for_each_subset(c, static_cast<std::size_t>(r), [&](const Edge& e) { s += res.farkas[row.at(e)]; });
    if (s > 0) {
      if (!cap) return false;
      rhs += *cap * s;
    }
  }
  return yb > rhs;
}

/// Exact feasibility of {sum over cliques through e of psi = 1 for all e in G, 0 <= psi <= cap}.
inline LpResult fractional_decomposition(const Hypergraph& g, int q, std::optional<mpq_class> cap = std::nullopt,
                                         const std::vector<Clique>* columns = nullptr) {
  if (cap) cap->canonicalize();
  if (cap && *cap < 0) throw ParameterError("weight cap must be nonnegative");
  LpResult res;
  res.rows = g.edges();
  res.columns = columns ? *columns : enumerate_cliques(g, q);
  if (res.columns.size() > kLpVariableCap) throw CapacityError("LP exceeds the variable cap");
  std::unordered_map<Edge, int> row;
  for (std::size_t i = 0; i < res.rows.size(); ++i) row[res.rows[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> cols;
  for (const Clique& c : res.columns) {
    std::vector<int> s;
    for_each_subset(c, static_cast<std::size_t>(g.r()), [&](const Edge& e) {
      auto it = row.find(e);
      if (it == row.end()) throw ParameterError("column {" + c.str() + "} is not a clique of G");
      s.push_back(it->second);
    });
    cols.push_back(std::move(s));
  }
  if (res.rows.empty()) {
    res.weighting = FractionalWeighting{g, q, {}};
    return res;
  }
  const std::vector<mpq_class> ones(res.rows.size(), 1);
  const std::size_t m = res.rows.size(), nc = cols.size();
  auto accept_primal = [&](const std::vector<mpq_class>& x) {
    FractionalWeighting w{g, q, {}};
    for (std::size_t j = 0; j < nc; ++j)
      if (x[j] != 0) w.weights.emplace_back(res.columns[j], x[j]);
    if (!is_fractional_decomposition(w)) return false;
    if (cap)
      for (const auto& [c, v] : w.weights)
        if (v > *cap) return false;
    res.weighting = std::move(w);
    return true;
  };

  // Floating-point pass to find a basis, then exact reconstruction.
  auto fl = detail::PhaseOne<double>(m, cols, ones, cap).run(200 * static_cast<std::int64_t>(m + nc));
  res.pivots = fl.pivots;
  if (fl.feasible) {
    std::vector<mpq_class> rhs = ones;
    for (std::size_t j = 0; j < nc; ++j)
      if (fl.at_upper[j])
        for (int i : cols[j]) rhs[static_cast<std::size_t>(i)] -= *cap;
    std::vector<std::map<int, mpq_class>> eq(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
      std::size_t v = fl.basis[pos];
      if (v < nc)
        for (int i : cols[v]) eq[static_cast<std::size_t>(i)][static_cast<int>(pos)] = 1;
      else
        eq[v - nc][static_cast<int>(pos)] = 1;
    }
    if (auto xb = detail::sparse_solve(std::move(eq), rhs)) {
      std::vector<mpq_class> x(nc, 0);
      bool ok = true;
      for (std::size_t j = 0; j < nc; ++j)
        if (fl.at_upper[j]) x[j] = *cap;
      for (std::size_t pos = 0; pos < m; ++pos) {
        std::size_t v = fl.basis[pos];
        if (v < nc) x[v] = (*xb)[pos];
        else if ((*xb)[pos] != 0) ok = false;
      }
      if (ok && accept_primal(x)) {
        res.method = "float-basis";
        return res;
      }
    }
  } else {
    std::vector<std::map<int, mpq_class>> eq(m);
    std::vector<mpq_class> cb(m, 0);
    for (std::size_t pos = 0; pos < m; ++pos) {
      std::size_t v = fl.basis[pos];
      if (v < nc)
        for (int i : cols[v]) eq[pos][i] = 1;
      else {
        eq[pos][static_cast<int>(v - nc)] = 1;
        cb[pos] = 1;
      }
    }
    if (auto y = detail::sparse_solve(std::move(eq), cb)) {
      res.farkas = std::move(*y);
      if (check_farkas(res, g.r(), cap)) {
        res.method = "float-basis";
        return res;
      }
      res.farkas.clear();
    }
  }

  auto out = detail::PhaseOne<mpq_class>(m, cols, ones, cap).run();
  res.pivots += out.pivots;
  res.method = "exact-simplex";
  if (out.feasible) {
    ensure(accept_primal(out.x), "LP solution fails the per-edge check");
  } else {
    res.farkas = std::move(out.y);
    ensure(check_farkas(res, g.r(), cap), "infeasibility certificate failed its check");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Independent oracle for tiny instances: some basic solution exists iff the
// LP (uncapped) is feasible; try every column subset.

inline bool lp_feasible_by_enumeration(const Hypergraph& g, int q) {
  auto cols = enumerate_cliques(g, q);
  if (cols.size() > 16) throw CapacityError("enumeration oracle is capped at 16 cliques");
  const auto& rows = g.edges();
  if (rows.empty()) return true;
  std::unordered_map<Edge, std::size_t> row;
  for (std::size_t i = 0; i < rows.size(); ++i) row[rows[i]] = i;
  const std::size_t k = cols.size();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> sel;
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1u) sel.push_back(j);
    // Augmented matrix [M_S | 1], Gauss-Jordan over Q.
    const std::size_t m = rows.size(), c = sel.size();
    std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(c + 1, 0));
    for (std::size_t t = 0; t < c; ++t)
      for_each_subset(cols[sel[t]], static_cast<std::size_t>(g.r()), [&](const Edge& e) { a[row.at(e)][t] = 1; });
    for (std::size_t i = 0; i < m; ++i) a[i][c] = 1;
    std::size_t pr = 0;
    std::vector<std::size_t> pivcol;
    for (std::size_t t = 0; t < c && pr < m; ++t) {
      std::size_t p = pr;
      while (p < m && a[p][t] == 0) ++p;
      if (p == m) continue;
      std::swap(a[p], a[pr]);
      mpq_class inv = 1 / a[pr][t];
      for (auto& v : a[pr]) v *= inv;
      for (std::size_t i = 0; i < m; ++i)
        if (i != pr && a[i][t] != 0) {
          mpq_class f = a[i][t];
          for (std::size_t s = 0; s <= c; ++s) a[i][s] -= f * a[pr][s];
        }
      pivcol.push_back(t);
      ++pr;
    }
    if (pivcol.size() != c) continue;  // dependent columns: a smaller subset covers it
    bool consistent = true;
    for (std::size_t i = pr; i < m; ++i)
      if (a[i][c] != 0) consistent = false;
    if (!consistent) continue;
    bool nonneg = true;
    for (std::size_t i = 0; i < pr; ++i)
      if (a[i][c] < 0) nonneg = false;
    if (nonneg) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Regularity boost sampling

struct BoostFamily {
  std::vector<Clique> cliques;
  std::unordered_map<Edge, std::int64_t> edge_counts;  // every host edge present
  double c_hat = 0;
  double gamma_hat = 0;
  std::int64_t clamped = 0;  // cliques whose probability was clamped to 1
};

inline mpq_class default_boost_multiplier(int n, int q, int r) {
  mpq_class m(mpz_class(std::to_string(binom(n - r, q - r))), mpz_class(2));
  m.canonicalize();
  return m;
}

/// Each weighted clique joins independently with probability min(1, multiplier * psi).
inline BoostFamily boost_sample(const FractionalWeighting& w, const mpq_class& multiplier, std::uint64_t seed) {
  mpq_class mult(multiplier);
  mult.canonicalize();
  if (mult < 0) throw ParameterError("multiplier must be nonnegative");
  Rng rng(seed);
  BoostFamily fam;
  const int r = w.host.r();
  for (const Edge& e : w.host.edges()) fam.edge_counts[e] = 0;
  for (const auto& [c, x] : w.weights) {
    mpq_class p = mult * x;
    double pd;
    if (p >= 1) {
      if (p > 1) ++fam.clamped;
      pd = 1.0;
    } else {
      pd = p.get_d();
    }
    if (rng.bernoulli(pd)) {
      fam.cliques.push_back(c);
      for_each_subset(c, static_cast<std::size_t>(r), [&](const Edge& e) { ++fam.edge_counts[e]; });
    }
  }
  const double scale = static_cast<double>(binom(w.host.n() - r, w.q - r));
  if (!fam.edge_counts.empty() && scale > 0) {
    double sum = 0;
    for (const auto& [e, k] : fam.edge_counts) sum += static_cast<double>(k);
    fam.c_hat = sum / static_cast<double>(fam.edge_counts.size()) / scale;
    for (const auto& [e, k] : fam.edge_counts)
      fam.gamma_hat = std::max(fam.gamma_hat, std::abs(static_cast<double>(k) / scale - fam.c_hat));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Minimum-degree inheritance sampler (graphs)

struct InheritanceStats {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double fraction = 0;
  std::int64_t min_degree_seen = 0;
  double mean_min_degree = 0;
};

inline std::int64_t min_degree_induced(const Hypergraph& g, const std::vector<Vertex>& s) {
  if (g.r() != 2) throw UnsupportedError("minimum degree sampling is implemented for graphs");
  std::unordered_map<Vertex, std::int64_t> deg;
  std::unordered_set<Vertex> in(s.begin(), s.end());
  for (Vertex v : s) deg[v] = 0;
  for (const Edge& e : g.edges())
    if (in.count(e[0]) && in.count(e[1])) {
      ++deg[e[0]];
      ++deg[e[1]];
    }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& [v, d] : deg) best = std::min(best, d);
  return s.empty() ? 0 : best;
}

/// Samples uniform s-sets S ⊇ M and reports how often δ(G[S]) >= threshold(s).
inline InheritanceStats inheritance_stats(const Hypergraph& g, int s, const std::vector<Vertex>& must, std::int64_t trials,
                                          std::uint64_t seed, const std::function<double(int)>& threshold) {
  const int n = g.n();
  const int m = static_cast<int>(must.size());
  if (!(m <= s && s <= n)) throw ParameterError("need |M| <= s <= n");
  std::unordered_set<Vertex> mset(must.begin(), must.end());
  if (static_cast<int>(mset.size()) != m) throw ParameterError("M has repeated vertices");
  std::vector<Vertex> rest;
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v)
    if (!mset.count(v)) rest.push_back(v);
  InheritanceStats st;
  st.trials = trials;
  if (trials <= 0) return st;
  // Adjacency as bitsets for speed.
  std::vector<std::vector<std::uint64_t>> adj(static_cast<std::size_t>(n),
                                              std::vector<std::uint64_t>((static_cast<std::size_t>(n) + 63) / 64, 0));
  if (g.r() != 2) throw UnsupportedError("minimum degree sampling is implemented for graphs");
  for (const Edge& e : g.edges()) {
    adj[e[0]][e[1] >> 6] |= 1ULL << (e[1] & 63);
    adj[e[1]][e[0] >> 6] |= 1ULL << (e[0] & 63);
  }
  Rng rng(seed);
  double sum = 0;
  st.min_degree_seen = std::numeric_limits<std::int64_t>::max();
  const double thr = threshold(s);
  for (std::int64_t t = 0; t < trials; ++t) {
    // Partial Fisher-Yates for s - m extra vertices.
    for (std::size_t i = 0; i < static_cast<std::size_t>(s - m); ++i) {
      std::size_t j = i + rng.below(rest.size() - i);
      std::swap(rest[i], rest[j]);
    }
    std::vector<std::uint64_t> mask((static_cast<std::size_t>(n) + 63) / 64, 0);
    std::vector<Vertex> sv(must.begin(), must.end());
    sv.insert(sv.end(), rest.begin(), rest.begin() + (s - m));
    for (Vertex v : sv) mask[v >> 6] |= 1ULL << (v & 63);
    std::int64_t md = std::numeric_limits<std::int64_t>::max();
    for (Vertex v : sv) {
      std::int64_t d = 0;
      for (std::size_t w = 0; w < mask.size(); ++w) d += __builtin_popcountll(adj[v][w] & mask[w]);
      md = std::min(md, d);
    }
    if (sv.empty()) md = 0;
    sum += static_cast<double>(md);
    st.min_degree_seen = std::min(st.min_degree_seen, md);
    if (static_cast<double>(md) >= thr) ++st.successes;
  }
  st.fraction = static_cast<double>(st.successes) / static_cast<double>(trials);
  st.mean_min_degree = sum / static_cast<double>(trials);
  return st;
}

inline void write_weighting(std::ostream& os, const FractionalWeighting& w) {
  for (const auto& [c, x] : w.weights) os << x.get_str() << ' ' << c.str() << '\n';
}

/// Lines "p/q v1 ... vq"; blank lines and '#' comments are skipped.
inline FractionalWeighting read_weighting(std::istream& in, const Hypergraph& host, int q) {
  FractionalWeighting w{host, q, {}};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    mpq_class x;
    if (x.set_str(tok, 10) != 0) throw ParseError("line " + std::to_string(no) + ": bad weight '" + tok + "'");
    x.canonicalize();
    if (x < 0) throw ParseError("line " + std::to_string(no) + ": negative weight");
    std::vector<Vertex> vs;
    long long v;
    while (ls >> v) {
      if (v < 0 || v >= host.n()) throw ParseError("line " + std::to_string(no) + ": vertex out of range");
      vs.push_back(static_cast<Vertex>(v));
    }
    if (!ls.eof() || static_cast<int>(vs.size()) != q)
      throw ParseError("line " + std::to_string(no) + ": expected " + std::to_string(q) + " vertices");
    Clique c(vs);
    if (static_cast<int>(c.size()) != q) throw ParseError("line " + std::to_string(no) + ": repeated vertex");
    if (!is_clique_of(host, c)) throw ParseError("line " + std::to_string(no) + ": not a clique of the host");
    if (x > 0) w.weights.emplace_back(c, x);
  }
  return w;
}

}  // namespace absorb
