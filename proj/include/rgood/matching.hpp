#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace rgood {

// Bipartite graph (A, B) with a demand l(a) >= 0 for each a in A.
struct DemandedBipartite {
  std::vector<int> a;
  std::vector<int> b;
  std::vector<std::pair<int, int>> edges;  // (a, b)
  std::map<int, int> demands;              // missing entries mean 0

  int demand(int v) const {
    auto it = demands.find(v);
    return it == demands.end() ? 0 : it->second;
  }
};

struct HallResult {
  bool forest = false;
  std::map<int, std::vector<int>> assignment;  // a -> the l(a) leaves it receives
  std::vector<int> deficiency;                 // S with |N(S)| < sum of l over S
};

// Either assigns every a exactly l(a) private neighbours in B, or returns a
// set S of A violating Hall's condition with demands.  Each a is split into
// l(a) clones and a maximum matching is grown by augmenting paths; an
// unmatched clone's alternating-reachable set gives the deficient S.
inline HallResult hall_extension_forest(const DemandedBipartite& db) {
  std::map<int, int> a_index, b_index;
  for (int i = 0; i < static_cast<int>(db.a.size()); ++i)
    if (!a_index.emplace(db.a[i], i).second) throw PreconditionError("duplicate vertex in A");
  for (int i = 0; i < static_cast<int>(db.b.size()); ++i)
    if (!b_index.emplace(db.b[i], i).second) throw PreconditionError("duplicate vertex in B");
  for (auto [v, l] : db.demands) {
    if (l < 0) throw PreconditionError("negative demand");
    if (!a_index.count(v)) throw PreconditionError("demand on a vertex outside A");
  }
  std::vector<std::vector<int>> adj(db.a.size());
  for (auto [x, y] : db.edges) {
    auto ia = a_index.find(x);
    auto ib = b_index.find(y);
    if (ia == a_index.end() || ib == b_index.end()) throw PreconditionError("edge endpoint outside A x B");
    adj[ia->second].push_back(ib->second);
  }
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }

  std::vector<int> clone_owner;  // clone -> index in A
  for (int i = 0; i < static_cast<int>(db.a.size()); ++i)
    for (int c = 0; c < db.demand(db.a[i]); ++c) clone_owner.push_back(i);
  int nc = static_cast<int>(clone_owner.size());
  int nb = static_cast<int>(db.b.size());
  std::vector<int> match_b(static_cast<std::size_t>(nb), -1);
  std::vector<int> match_c(static_cast<std::size_t>(nc), -1);
  std::vector<int> seen(static_cast<std::size_t>(nb), -1);

  auto augment = [&](auto& self, int c, int stamp) -> bool {
    for (int y : adj[clone_owner[c]]) {
      if (seen[y] == stamp) continue;
      seen[y] = stamp;
      if (match_b[y] < 0 || self(self, match_b[y], stamp)) {
        match_b[y] = c;
        match_c[c] = y;
        return true;
      }
    }
    return false;
  };
  HallResult out;
  int unmatched = -1;
  for (int c = 0; c < nc; ++c) {
    if (!augment(augment, c, c)) {
      unmatched = c;
      break;
    }
  }
  if (unmatched < 0) {
    out.forest = true;
    for (int c = 0; c < nc; ++c) out.assignment[db.a[clone_owner[c]]].push_back(db.b[match_c[c]]);
    for (int v : db.a)
      if (db.demand(v) == 0) out.assignment[v];
    for (auto& [v, leaves] : out.assignment) std::sort(leaves.begin(), leaves.end());
    return out;
  }
  // Alternating reachability from the unmatched clone: non-matching edges
  // from clones to B, matching edges back.  Clones of one owner share a
  // neighbourhood, so the reached clones are exactly the clones of the
  // reached owners.
  std::vector<char> owner_hit(db.a.size(), 0);
  std::vector<char> b_hit(static_cast<std::size_t>(nb), 0);
  std::deque<int> queue{unmatched};
  std::vector<char> clone_hit(static_cast<std::size_t>(nc), 0);
  clone_hit[unmatched] = 1;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    owner_hit[clone_owner[c]] = 1;
    for (int y : adj[clone_owner[c]]) {
      if (b_hit[y]) continue;
      b_hit[y] = 1;
      int back = match_b[y];
      if (back >= 0 && !clone_hit[back]) {
        clone_hit[back] = 1;
        queue.push_back(back);
      }
    }
  }
  for (int i = 0; i < static_cast<int>(db.a.size()); ++i)
    if (owner_hit[i]) out.deficiency.push_back(db.a[i]);
  std::sort(out.deficiency.begin(), out.deficiency.end());
  return out;
}

// Neighbourhood of S in the bipartite graph.
inline std::set<int> bipartite_neighborhood(const DemandedBipartite& db, const std::vector<int>& s) {
  std::set<int> in(s.begin(), s.end());
  std::set<int> out;
  for (auto [x, y] : db.edges)
    if (in.count(x)) out.insert(y);
  return out;
}

inline bool is_deficient(const DemandedBipartite& db, const std::vector<int>& s) {
  long need = 0;
  for (int v : s) need += db.demand(v);
  return static_cast<long>(bipartite_neighborhood(db, s).size()) < need;
}

// Empty when the assignment uses only edges, gives each a exactly l(a)
// leaves, and uses each b at most once.
inline std::string hall_assignment_error(const DemandedBipartite& db, const std::map<int, std::vector<int>>& assignment) {
  std::set<std::pair<int, int>> edges(db.edges.begin(), db.edges.end());
  std::set<int> used;
  for (int v : db.a) {
    auto it = assignment.find(v);
    int got = it == assignment.end() ? 0 : static_cast<int>(it->second.size());
    if (got != db.demand(v)) return "vertex " + std::to_string(v) + " gets " + std::to_string(got) + " leaves";
    if (it == assignment.end()) continue;
    for (int y : it->second) {
      if (!edges.count({v, y})) return "non-edge " + std::to_string(v) + "-" + std::to_string(y);
      if (!used.insert(y).second) return "leaf " + std::to_string(y) + " used twice";
    }
  }
  return {};
}

}  // namespace rgood
