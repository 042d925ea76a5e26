#pragma once

#include <vector>

#include "common.hpp"
#include "vertex_set.hpp"

namespace rgood {

enum class Visit { descend, prune, stop };
enum class EnumerationEnd { complete, stopped, budget };

// Depth-first walk over subsets of `pool` with 1..max_size members, each
// listed in ascending order; a subset is visited before its extensions.
// The visitor can cut off all extensions of the current subset.
template <class F>
EnumerationEnd walk_subsets(const VertexSet& pool, int max_size, Budget& budget, F&& visit) {
  std::vector<int> items = pool.to_vector();
  std::vector<int> cur;
  cur.reserve(static_cast<std::size_t>(max_size));
  EnumerationEnd end = EnumerationEnd::complete;
  auto rec = [&](auto& self, std::size_t from) -> bool {
    for (std::size_t i = from; i < items.size(); ++i) {
      if (!budget.tick()) {
        end = EnumerationEnd::budget;
        return false;
      }
      cur.push_back(items[i]);
      Visit v = visit(static_cast<const std::vector<int>&>(cur));
      if (v == Visit::stop) {
        end = EnumerationEnd::stopped;
        return false;
      }
      if (v == Visit::descend && static_cast<int>(cur.size()) < max_size && !self(self, i + 1)) return false;
      cur.pop_back();
    }
    return true;
  };
  if (max_size >= 1) rec(rec, 0);
  return end;
}

// Subsets of `pool` of exactly `size` members in lexicographic order.
template <class F>
EnumerationEnd combinations(const VertexSet& pool, int size, Budget& budget, F&& visit) {
  std::vector<int> items = pool.to_vector();
  std::vector<int> cur;
  EnumerationEnd end = EnumerationEnd::complete;
  int n = static_cast<int>(items.size());
  auto rec = [&](auto& self, int from) -> bool {
    int need = size - static_cast<int>(cur.size());
    if (need == 0) {
      if (!budget.tick()) {
        end = EnumerationEnd::budget;
        return false;
      }
      if (visit(static_cast<const std::vector<int>&>(cur))) {
        end = EnumerationEnd::stopped;
        return false;
      }
      return true;
    }
    for (int i = from; i <= n - need; ++i) {
      cur.push_back(items[i]);
      if (!self(self, i + 1)) return false;
      cur.pop_back();
    }
    return true;
  };
  if (size >= 1 && size <= n) rec(rec, 0);
  return end;
}

// Sizes 1..max_size in turn, each in lexicographic order; stops at the first
// subset the predicate accepts.
template <class F>
EnumerationEnd first_subset_by_size(const VertexSet& pool, int max_size, Budget& budget, F&& pred) {
  for (int s = 1; s <= max_size; ++s) {
    auto end = combinations(pool, s, budget, pred);
    if (end != EnumerationEnd::complete) return end;
  }
  return EnumerationEnd::complete;
}

}  // namespace rgood
