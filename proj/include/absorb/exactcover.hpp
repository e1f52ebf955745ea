#pragma once

#include <absorb/hypercore.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace absorb {

constexpr std::int64_t kDefaultNodeBudget = 100'000'000;

/// Generalized exact cover with multiplicities.
///
/// Primary items must be covered exactly `need` times; secondary items may be
/// covered at most `need` times. Options may be reused (a multiset solution)
/// as long as the counts allow it. Each multiset solution is produced once:
/// the search keeps branching on the item it started until that item is
/// full, taking its options in nondecreasing index order.
class CoverEngine {
 public:
  CoverEngine(std::vector<std::int64_t> need, std::vector<char> primary, std::vector<std::vector<int>> options)
      : need_(std::move(need)), primary_(std::move(primary)), opt_items_(std::move(options)) {
    const std::size_t ni = need_.size();
    if (primary_.size() != ni) throw ParameterError("item flags size mismatch");
    item_opts_.assign(ni, {});
    for (std::size_t o = 0; o < opt_items_.size(); ++o)
      for (int i : opt_items_[o]) {
        if (i < 0 || static_cast<std::size_t>(i) >= ni) throw ParameterError("option references unknown item");
        item_opts_[static_cast<std::size_t>(i)].push_back(static_cast<int>(o));
      }
    disabled_.assign(opt_items_.size(), 0);
  }

  std::size_t option_count() const noexcept { return opt_items_.size(); }

  // Disabled options never enter a solution.
  void set_disabled(std::vector<char> mask) {
    if (mask.size() != opt_items_.size()) throw ParameterError("disable mask size mismatch");
    disabled_ = std::move(mask);
  }

  std::int64_t nodes() const noexcept { return nodes_; }

  /// Calls f(chosen option indices, with repeats) per solution; f returns
  /// false to stop. Returns true if the search ran to completion.
  template <class F>
  bool search(F&& f, std::int64_t budget = kDefaultNodeBudget) {
    nodes_ = 0;
    budget_ = budget;
    remaining_ = need_;
    blocked_.assign(opt_items_.size(), 0);
    viable_.assign(need_.size(), 0);
    for (std::size_t o = 0; o < opt_items_.size(); ++o) {
      if (disabled_[o]) {
        blocked_[o] = 1;
        continue;
      }
      for (int i : opt_items_[o])
        if (remaining_[static_cast<std::size_t>(i)] <= 0) ++blocked_[o];
      if (blocked_[o] == 0)
        for (int i : opt_items_[o]) ++viable_[static_cast<std::size_t>(i)];
    }
    chosen_.clear();
    stopped_ = false;
    recurse(f, -1, 0);
    return !stopped_;
  }

 private:
  void take(int o) {
    for (int i : opt_items_[static_cast<std::size_t>(o)]) {
      auto& rem = remaining_[static_cast<std::size_t>(i)];
      if (--rem == 0)
        for (int p : item_opts_[static_cast<std::size_t>(i)])
          if (blocked_[static_cast<std::size_t>(p)]++ == 0)
            for (int j : opt_items_[static_cast<std::size_t>(p)]) --viable_[static_cast<std::size_t>(j)];
    }
  }

  void untake(int o) {
    const auto& items = opt_items_[static_cast<std::size_t>(o)];
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      int i = *it;
      auto& rem = remaining_[static_cast<std::size_t>(i)];
      if (rem++ == 0)
        for (int p : item_opts_[static_cast<std::size_t>(i)])
          if (--blocked_[static_cast<std::size_t>(p)] == 0)
            for (int j : opt_items_[static_cast<std::size_t>(p)]) ++viable_[static_cast<std::size_t>(j)];
    }
  }

  template <class F>
  void recurse(F& f, int item, int min_opt) {
    if (stopped_) return;
    if (item < 0 || remaining_[static_cast<std::size_t>(item)] == 0) {
      // Pick the unfinished primary item with the fewest live options.
      item = -1;
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (std::size_t i = 0; i < remaining_.size(); ++i) {
        if (!primary_[i] || remaining_[i] == 0) continue;
        if (viable_[i] == 0) return;
        if (viable_[i] < best) {
          best = viable_[i];
          item = static_cast<int>(i);
        }
      }
      if (item < 0) {
        if (!f(static_cast<const std::vector<int>&>(chosen_))) stopped_ = true;
        return;
      }
      min_opt = 0;
    } else {
      // Still filling `item`; fail fast if some other unfinished item is dead.
      for (std::size_t i = 0; i < remaining_.size(); ++i)
        if (primary_[i] && remaining_[i] > 0 && viable_[i] == 0) return;
    }
    for (int o : item_opts_[static_cast<std::size_t>(item)]) {
      if (o < min_opt || blocked_[static_cast<std::size_t>(o)] != 0) continue;
      if (++nodes_ > budget_) throw BudgetError("exact cover node budget of " + std::to_string(budget_) + " exceeded");
      take(o);
      chosen_.push_back(o);
      recurse(f, item, o);
      chosen_.pop_back();
      untake(o);
      if (stopped_) return;
    }
  }

  std::vector<std::int64_t> need_;
  std::vector<char> primary_;
  std::vector<std::vector<int>> opt_items_;
  std::vector<std::vector<int>> item_opts_;
  std::vector<char> disabled_;

  std::vector<std::int64_t> remaining_;
  std::vector<int> blocked_;
  std::vector<std::int64_t> viable_;
  std::vector<int> chosen_;
  std::int64_t nodes_ = 0;
  std::int64_t budget_ = kDefaultNodeBudget;
  bool stopped_ = false;
};

/// Clique-decomposition instance over a target edge multiset.
class CliqueCover {
 public:
  // Options are `restrict` when given, else every q-clique of Simple(target).
  CliqueCover(const MultiHypergraph& target, int q, const std::vector<Clique>* restrict = nullptr)
      : target_(target), q_(q) {
    if (q <= target.r()) throw ParameterError("clique size q must exceed uniformity r");
    std::vector<std::int64_t> need;
    for (const auto& [e, k] : target.multiplicities()) {
      item_of_.emplace(e, static_cast<int>(need.size()));
      need.push_back(k);
    }
    std::vector<Clique> cands = restrict ? *restrict : enumerate_cliques(target.simple(), q);
    std::vector<std::vector<int>> opts;
    for (const Clique& c : cands) {
      if (static_cast<int>(c.size()) != q) throw ParameterError("option {" + c.str() + "} has wrong size");
      std::vector<int> items;
      bool ok = true;
      for_each_subset(c, static_cast<std::size_t>(target.r()), [&](const Edge& e) {
        auto it = item_of_.find(e);
        if (it == item_of_.end()) ok = false;
        else if (ok) items.push_back(it->second);
      });
      if (!ok) continue;
      cliques_.push_back(c);
      opts.push_back(std::move(items));
    }
    engine_.emplace(std::move(need), std::vector<char>(item_of_.size(), 1), std::move(opts));
  }

  const std::vector<Clique>& options() const noexcept { return cliques_; }
  CoverEngine& engine() { return *engine_; }

  std::vector<Clique> to_cliques(const std::vector<int>& chosen) const {
    std::vector<Clique> out;
    out.reserve(chosen.size());
    for (int o : chosen) out.push_back(cliques_[static_cast<std::size_t>(o)]);
    std::sort(out.begin(), out.end());
    return out;
  }

  Decomposition to_decomposition(const std::vector<int>& chosen) const {
    return Decomposition::make(target_, q_, to_cliques(chosen));
  }

 private:
  MultiHypergraph target_;
  int q_;
  std::unordered_map<Edge, int> item_of_;
  std::vector<Clique> cliques_;
  std::optional<CoverEngine> engine_;
};

inline std::optional<Decomposition> find_decomposition(const MultiHypergraph& g, int q,
                                                       const std::vector<Clique>* restrict = nullptr,
                                                       std::int64_t budget = kDefaultNodeBudget) {
  CliqueCover cc(g, q, restrict);
  std::optional<Decomposition> out;
  cc.engine().search(
      [&](const std::vector<int>& sol) {
        out = cc.to_decomposition(sol);
        return false;
      },
      budget);
  return out;
}

inline std::optional<Decomposition> find_decomposition(const Hypergraph& g, int q,
                                                       const std::vector<Clique>* restrict = nullptr,
                                                       std::int64_t budget = kDefaultNodeBudget) {
  return find_decomposition(MultiHypergraph::from_simple(g), q, restrict, budget);
}

struct CountResult {
  std::int64_t count = 0;
  bool overflow = false;  // count reached cap; true total is >= cap
};

inline CountResult count_decompositions(const MultiHypergraph& g, int q, std::int64_t cap,
                                        const std::vector<Clique>* restrict = nullptr,
                                        std::int64_t budget = kDefaultNodeBudget) {
  if (cap < 1) throw ParameterError("count cap must be positive");
  CliqueCover cc(g, q, restrict);
  CountResult res;
  cc.engine().search(
      [&](const std::vector<int>&) {
        if (++res.count >= cap) {
          res.overflow = true;
          return false;
        }
        return true;
      },
      budget);
  return res;
}

inline CountResult count_decompositions(const Hypergraph& g, int q, std::int64_t cap,
                                        const std::vector<Clique>* restrict = nullptr,
                                        std::int64_t budget = kDefaultNodeBudget) {
  return count_decompositions(MultiHypergraph::from_simple(g), q, cap, restrict, budget);
}

// Every decomposition, in search order. Throws CapacityError past max_count.
inline std::vector<Decomposition> all_decompositions(const Hypergraph& g, int q, std::int64_t max_count,
                                                     std::int64_t budget = kDefaultNodeBudget) {
  CliqueCover cc(MultiHypergraph::from_simple(g), q);
  std::vector<Decomposition> out;
  cc.engine().search(
      [&](const std::vector<int>& sol) {
        if (static_cast<std::int64_t>(out.size()) >= max_count)
          throw CapacityError("more than " + std::to_string(max_count) + " decompositions");
        out.push_back(cc.to_decomposition(sol));
        return true;
      },
      budget);
  return out;
}

/// Two decompositions with no clique in common. The budget is shared by the
/// outer enumeration and every nested search.
inline std::optional<std::pair<Decomposition, Decomposition>> find_two_disjoint_decompositions(
    const MultiHypergraph& g, int q, const std::vector<Clique>* restrict = nullptr,
    std::int64_t budget = kDefaultNodeBudget) {
  CliqueCover outer(g, q, restrict);
  CliqueCover inner(g, q, restrict);
  std::optional<std::pair<Decomposition, Decomposition>> out;
  std::int64_t spent = 0;
  outer.engine().search(
      [&](const std::vector<int>& first) {
        std::vector<char> mask(inner.engine().option_count(), 0);
        for (int o : first) mask[static_cast<std::size_t>(o)] = 1;
        inner.engine().set_disabled(std::move(mask));
        std::int64_t left = budget - spent - outer.engine().nodes();
        if (left <= 0) throw BudgetError("exact cover node budget exceeded");
        inner.engine().search(
            [&](const std::vector<int>& second) {
              out.emplace(outer.to_decomposition(first), inner.to_decomposition(second));
              return false;
            },
            left);
        spent += inner.engine().nodes();
        return !out.has_value();
      },
      budget);
  return out;
}

inline std::optional<std::pair<Decomposition, Decomposition>> find_two_disjoint_decompositions(
    const Hypergraph& g, int q, const std::vector<Clique>* restrict = nullptr,
    std::int64_t budget = kDefaultNodeBudget) {
  return find_two_disjoint_decompositions(MultiHypergraph::from_simple(g), q, restrict, budget);
}

}  // namespace absorb
