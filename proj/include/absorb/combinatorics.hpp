#pragma once

#include <absorb/errors.hpp>
#include <absorb/tuple.hpp>

#include <cstdint>
#include <limits>
#include <vector>

namespace absorb {

// binom(n, k) in 64 bits; throws CapacityError on overflow.
inline std::uint64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) throw CapacityError("binomial coefficient overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

/// Calls f(k-subset) for every k-subset of `items`, in lexicographic order of
/// positions. f receives a SortedTuple when items is a SortedTuple.
template <class F>
void for_each_subset(const SortedTuple& items, std::size_t k, F&& f) {
  const std::size_t n = items.size();
  if (k > n) return;
  std::array<std::size_t, SortedTuple::kCapacity> idx{};
  std::array<Vertex, SortedTuple::kCapacity> buf{};
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) buf[i] = items[idx[i]];
    f(SortedTuple::from_sorted({buf.data(), k}));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Calls f(tuple) for every k-subset of {0, ..., n-1} in lexicographic order.
template <class F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  if (k > SortedTuple::kCapacity) throw CapacityError("combination size exceeds tuple capacity");
  std::array<Vertex, SortedTuple::kCapacity> idx{};
  for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<Vertex>(i);
  while (true) {
    f(SortedTuple::from_sorted({idx.data(), k}));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::vector<SortedTuple> subsets(const SortedTuple& items, std::size_t k) {
  std::vector<SortedTuple> out;
  for_each_subset(items, k, [&](const SortedTuple& s) { out.push_back(s); });
  return out;
}

}  // namespace absorb
