#pragma once

#include <absorb/errors.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace absorb {

using Vertex = std::uint32_t;

/// Strictly increasing tuple of at most kCapacity vertex ids.
///
/// Used for edges (r-sets) and cliques (q-sets). Construction from an
/// arbitrary sequence sorts it and rejects repeated vertices.
class SortedTuple {
 public:
  static constexpr std::size_t kCapacity = 16;

  SortedTuple() = default;

  SortedTuple(std::initializer_list<Vertex> vs) : SortedTuple(std::span<const Vertex>(vs.begin(), vs.size())) {}

  explicit SortedTuple(std::span<const Vertex> vs) {
    if (vs.size() > kCapacity) throw CapacityError("tuple longer than " + std::to_string(kCapacity));
    size_ = static_cast<std::uint8_t>(vs.size());
    std::copy(vs.begin(), vs.end(), v_.begin());
    std::sort(v_.begin(), v_.begin() + size_);
    if (std::adjacent_find(v_.begin(), v_.begin() + size_) != v_.begin() + size_)
      throw ParameterError("tuple has a repeated vertex");
  }

  explicit SortedTuple(const std::vector<Vertex>& vs) : SortedTuple(std::span<const Vertex>(vs)) {}

  // Caller guarantees the input is strictly increasing.
  static SortedTuple from_sorted(std::span<const Vertex> vs) {
    SortedTuple t;
    t.size_ = static_cast<std::uint8_t>(vs.size());
    std::copy(vs.begin(), vs.end(), t.v_.begin());
    return t;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  Vertex operator[](std::size_t i) const noexcept { return v_[i]; }
  const Vertex* begin() const noexcept { return v_.data(); }
  const Vertex* end() const noexcept { return v_.data() + size_; }
  Vertex back() const noexcept { return v_[size_ - 1]; }
  std::span<const Vertex> span() const noexcept { return {v_.data(), size_}; }
  std::vector<Vertex> to_vector() const { return {begin(), end()}; }

  bool contains(Vertex x) const noexcept { return std::binary_search(begin(), end(), x); }

  bool is_subset_of(const SortedTuple& other) const noexcept {
    return std::includes(other.begin(), other.end(), begin(), end());
  }

  SortedTuple with(Vertex x) const {
    if (contains(x)) throw ParameterError("vertex already in tuple");
    if (size_ == kCapacity) throw CapacityError("tuple capacity exceeded");
    SortedTuple t;
    auto pos = std::lower_bound(begin(), end(), x) - begin();
    std::copy(begin(), begin() + pos, t.v_.begin());
    t.v_[pos] = x;
    std::copy(begin() + pos, end(), t.v_.begin() + pos + 1);
    t.size_ = size_ + 1;
    return t;
  }

  SortedTuple without(Vertex x) const {
    SortedTuple t;
    for (Vertex y : *this)
      if (y != x) t.v_[t.size_++] = y;
    return t;
  }

  SortedTuple unite(const SortedTuple& o) const {
    std::array<Vertex, 2 * kCapacity> buf{};
    auto e = std::set_union(begin(), end(), o.begin(), o.end(), buf.begin());
    auto n = static_cast<std::size_t>(e - buf.begin());
    if (n > kCapacity) throw CapacityError("tuple capacity exceeded");
    return from_sorted({buf.data(), n});
  }

  std::size_t intersection_size(const SortedTuple& o) const noexcept {
    std::size_t i = 0, j = 0, c = 0;
    while (i < size_ && j < o.size_) {
      if (v_[i] < o.v_[j]) ++i;
      else if (o.v_[j] < v_[i]) ++j;
      else { ++c; ++i; ++j; }
    }
    return c;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < size_; ++i) {
      if (i) s += ' ';
      s += std::to_string(v_[i]);
    }
    return s;
  }

  friend bool operator==(const SortedTuple& a, const SortedTuple& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

  // Lexicographic on the vertex sequence; a proper prefix sorts first.
  friend std::strong_ordering operator<=>(const SortedTuple& a, const SortedTuple& b) noexcept {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const SortedTuple& t) { return os << '{' << t.str() << '}'; }

 private:
  std::array<Vertex, kCapacity> v_{};
  std::uint8_t size_ = 0;
};

using Edge = SortedTuple;
using Clique = SortedTuple;

struct TupleHash {
  std::size_t operator()(const SortedTuple& t) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL ^ t.size();
    for (Vertex v : t) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace absorb

template <>
struct std::hash<absorb::SortedTuple> : absorb::TupleHash {};
