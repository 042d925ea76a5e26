#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#ifndef RGOOD_MAX_VERTICES
#define RGOOD_MAX_VERTICES 512
#endif

namespace rgood {

inline constexpr int kMaxVertices = RGOOD_MAX_VERTICES;
static_assert(kMaxVertices % 64 == 0, "vertex cap must be a multiple of 64");

// Fixed-width bitset over vertex ids [0, kMaxVertices).
class VertexSet {
 public:
  static constexpr int kWords = kMaxVertices / 64;

  VertexSet() = default;
  VertexSet(std::initializer_list<int> ids) {
    for (int v : ids) set(v);
  }

  static VertexSet from(const std::vector<int>& ids) {
    VertexSet s;
    for (int v : ids) s.set(v);
    return s;
  }

  // {0, ..., n-1}
  static VertexSet prefix(int n) {
    VertexSet s;
    for (int w = 0; w < kWords && n > 0; ++w, n -= 64) {
      s.words_[w] = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    }
    return s;
  }

  void set(int v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void reset(int v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool test(int v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }
  bool contains(int v) const { return test(v); }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !empty(); }

  // Smallest member, or -1.
  int first() const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return -1;
  }

  // Smallest member strictly greater than v, or -1.
  int next(int v) const {
    ++v;
    if (v >= kMaxVertices) return -1;
    int w = v >> 6;
    std::uint64_t word = words_[w] & (~std::uint64_t{0} << (v & 63));
    while (true) {
      if (word) return w * 64 + std::countr_zero(word);
      if (++w == kWords) return -1;
      word = words_[w];
    }
  }

  template <class F>
  void for_each(F&& f) const {
    for (int w = 0; w < kWords; ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        f(w * 64 + std::countr_zero(word));
        word &= word - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  // First k members in ascending order.
  std::vector<int> take(int k) const {
    std::vector<int> out;
    for (int v = first(); v >= 0 && static_cast<int>(out.size()) < k; v = next(v)) out.push_back(v);
    return out;
  }

  bool intersects(const VertexSet& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  bool subset_of(const VertexSet& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  int intersection_count(const VertexSet& o) const {
    int c = 0;
    for (int w = 0; w < kWords; ++w) c += std::popcount(words_[w] & o.words_[w]);
    return c;
  }
  int difference_count(const VertexSet& o) const {
    int c = 0;
    for (int w = 0; w < kWords; ++w) c += std::popcount(words_[w] & ~o.words_[w]);
    return c;
  }

  VertexSet& operator|=(const VertexSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  // Set difference.
  VertexSet& operator-=(const VertexSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  friend bool operator==(const VertexSet&, const VertexSet&) = default;

  // Lexicographic order on ascending member lists, used for canonical tie-breaks.
  friend bool lex_less(const VertexSet& a, const VertexSet& b) {
    int x = a.first();
    int y = b.first();
    while (x >= 0 && y >= 0) {
      if (x != y) return x < y;
      x = a.next(x);
      y = b.next(y);
    }
    return x < 0 && y >= 0;
  }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace rgood
