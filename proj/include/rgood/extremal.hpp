#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "graph.hpp"

namespace rgood {

// Red/blue colouring of K_N, stored as its red graph.
struct EdgeColoring {
  Graph red;

  int size() const { return red.order(); }
  bool is_red(int u, int v) const { return red.adjacent(u, v); }
  Graph blue() const { return complement(red); }
};

// Disjoint red cliques of the given sizes, blue between them.  Zero sizes are dropped.
inline EdgeColoring clique_blowup_coloring(const std::vector<int>& sizes) {
  int n = 0;
  for (int s : sizes) {
    if (s < 0) throw PreconditionError("clique_blowup_coloring: negative clique size");
    n += s;
  }
  Graph red(n);
  int lo = 0;
  for (int s : sizes) {
    for (int u = lo; u < lo + s; ++u)
      for (int v = u + 1; v < lo + s; ++v) red.add_edge(u, v);
    lo += s;
  }
  return EdgeColoring{red};
}

// chi-1 cliques of size g_size-1 and one of size sigma-1.
inline std::vector<int> burr_sizes(int g_size, int chi, int sigma) {
  if (g_size < 1 || chi < 1 || sigma < 1) throw PreconditionError("burr_sizes: arguments must be >= 1");
  std::vector<int> sizes(static_cast<std::size_t>(chi - 1), g_size - 1);
  sizes.push_back(sigma - 1);
  return sizes;
}

// 2k-1 cliques of size n-1.
inline std::vector<int> tightness_sizes(int n, int k) {
  if (n < 1 || k < 1) throw PreconditionError("tightness_sizes: arguments must be >= 1");
  return std::vector<int>(static_cast<std::size_t>(2 * k - 1), n - 1);
}

inline long burr_bound(long g_size, long chi, long sigma) {
  if (g_size < 1 || chi < 1 || sigma < 1) throw PreconditionError("burr_bound: arguments must be >= 1");
  return (g_size - 1) * (chi - 1) + sigma;
}

// Coloring file: "N" on the first line, then the red graph in graph text format.
inline EdgeColoring read_coloring_text(std::istream& in) {
  long n;
  if (!(in >> n)) throw PreconditionError("coloring text: missing header N");
  Graph red = read_graph_text(in);
  if (red.order() != n) throw PreconditionError("coloring text: N disagrees with red graph order");
  return EdgeColoring{red};
}

inline void write_coloring_text(std::ostream& out, const EdgeColoring& c) {
  out << c.size() << '\n';
  write_graph_text(out, c.red);
}

}  // namespace rgood
