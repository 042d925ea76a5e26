#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rgood/rgood.hpp"

namespace rgood::cli {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw PreconditionError(what + ": '" + s + "' is not an integer");
  }
}

inline double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError(what + ": '" + s + "' is not a number");
  }
}

inline std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  for (const auto& p : split(s, ',')) out.push_back(to_int(p, "integer list"));
  return out;
}

// "0-9,12,15-16"
inline VertexSet parse_set(const std::string& s) {
  VertexSet out;
  if (s.empty()) return out;
  for (const auto& p : split(s, ',')) {
    auto dash = p.find('-');
    if (dash == std::string::npos) {
      out.set(to_int(p, "vertex set"));
      continue;
    }
    int lo = to_int(p.substr(0, dash), "vertex range");
    int hi = to_int(p.substr(dash + 1), "vertex range");
    if (lo > hi || lo < 0 || hi >= kMaxVertices) throw PreconditionError("vertex range '" + p + "' is invalid");
    for (int v = lo; v <= hi; ++v) out.set(v);
  }
  return out;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline std::pair<std::string, std::vector<std::string>> head_args(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw PreconditionError("spec '" + spec + "' needs the form kind:args");
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "file") return {kind, {rest}};
  return {kind, split(rest, ',')};
}

inline void want_args(const std::string& spec, const std::vector<std::string>& args, std::size_t n) {
  if (args.size() != n)
    throw PreconditionError("spec '" + spec + "' expects " + std::to_string(n) + " argument(s)");
}

// path:n | star:n | random:n,Δ,bias,seed | file:PATH
inline RootedForest parse_tree(const std::string& spec) {
  auto [kind, args] = head_args(spec);
  if (kind == "path") {
    want_args(spec, args, 1);
    return trees::path(to_int(args[0], "path size"));
  }
  if (kind == "star") {
    want_args(spec, args, 1);
    return trees::star(to_int(args[0], "star size"));
  }
  if (kind == "random") {
    want_args(spec, args, 4);
    return trees::random_bounded(to_int(args[0], "tree size"), to_int(args[1], "max degree"),
                                 to_double(args[2], "leaf bias"),
                                 static_cast<std::uint64_t>(std::stoull(args[3])));
  }
  if (kind == "file") {
    if (is_json_path(args[0])) return forest_from_json(Json::parse(slurp(args[0])));
    std::istringstream in(slurp(args[0]));
    return read_tree_text(in);
  }
  throw PreconditionError("unknown tree kind '" + kind + "'");
}

// clique:n | path:n | cycle:n | empty:n | star:leaves | multipartite:a,b,... |
// gnp:n,p,seed | regular:n,d,seed | file:PATH
inline Graph parse_graph(const std::string& spec) {
  auto [kind, args] = head_args(spec);
  auto one = [&](const char* what) {
    want_args(spec, args, 1);
    return to_int(args[0], what);
  };
  if (kind == "clique") return graphs::complete(one("clique size"));
  if (kind == "path") return graphs::path(one("path size"));
  if (kind == "cycle") return graphs::cycle(one("cycle size"));
  if (kind == "empty") return graphs::empty(one("graph order"));
  if (kind == "star") return graphs::star(one("star leaves"));
  if (kind == "multipartite") {
    std::vector<int> sizes;
    for (const auto& a : args) sizes.push_back(to_int(a, "part size"));
    return graphs::complete_multipartite(sizes);
  }
  if (kind == "gnp") {
    want_args(spec, args, 3);
    Rng rng(std::stoull(args[2]));
    return graphs::gnp(to_int(args[0], "order"), to_double(args[1], "edge probability"), rng);
  }
  if (kind == "regular") {
    want_args(spec, args, 3);
    Rng rng(std::stoull(args[2]));
    return graphs::random_regular(to_int(args[0], "order"), to_int(args[1], "degree"), rng);
  }
  if (kind == "file") {
    if (is_json_path(args[0])) return graph_from_json(Json::parse(slurp(args[0])));
    std::istringstream in(slurp(args[0]));
    return read_graph_text(in);
  }
  throw PreconditionError("unknown graph kind '" + kind + "'");
}

}  // namespace rgood::cli
