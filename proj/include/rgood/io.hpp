#pragma once

#include <json.hpp>

#include "extremal.hpp"
#include "expander.hpp"
#include "fp_embed.hpp"
#include "lemmas.hpp"
#include "linkage.hpp"
#include "matching.hpp"
#include "pipeline.hpp"
#include "tree.hpp"
#include "verify.hpp"

namespace rgood {

using Json = nlohmann::json;

inline Json to_json(const VertexSet& s) { return s.to_vector(); }

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.order()}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j) {
  Graph g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  return g;
}

inline Json to_json(const RootedForest& t) {
  std::vector<int> parent;
  for (int v = 0; v < t.size(); ++v) parent.push_back(t.parent(v));
  return {{"n", t.size()}, {"parent", parent}, {"max_degree", t.declared_max_degree()}, {"roots", t.roots()}};
}

inline RootedForest forest_from_json(const Json& j) {
  auto parent = j.at("parent").get<std::vector<int>>();
  if (j.contains("max_degree")) return RootedForest(parent, j.at("max_degree").get<int>());
  RootedForest probe(parent, static_cast<int>(parent.size()));
  return RootedForest(parent, probe.actual_max_degree());
}

inline Json to_json(const Embedding& e) { return {{"map", e.map}}; }

inline Json to_json(const StageRecord& s) {
  Json j{{"stage", s.stage}, {"outcome", s.outcome}, {"nodes", s.nodes}};
  if (!s.witness.empty()) j["witness"] = s.witness;
  return j;
}

inline Json to_json(const Trace& t) {
  Json j = Json::array();
  for (const auto& s : t) j.push_back(to_json(s));
  return j;
}

inline Json to_json(const LeavesOrPaths& r) {
  Json j{{"branch", r.branch == Branch::leaves ? "leaves" : "paths"}, {"required", r.required}};
  if (r.branch == Branch::leaves)
    j["leaves"] = r.leaves;
  else
    j["paths"] = {{"r", r.paths.r}, {"paths", r.paths.paths}};
  return j;
}

inline Json to_json(const CentroidSplit& c) { return {{"u", c.u}, {"a", c.a}, {"b", c.b}}; }

inline Json to_json(const StrippedPaths& s) {
  return {{"rest", to_json(s.rest.forest)},
          {"rest_to_original", s.rest.to_original},
          {"endpoint_pairs", s.endpoint_pairs},
          {"interiors", s.interiors},
          {"r", s.r}};
}

inline Json to_json(const StrippedLeaves& s) {
  Json demands = Json::array();
  for (auto [v, d] : s.demands) demands.push_back({v, d});
  return {{"core", to_json(s.core.forest)}, {"core_to_original", s.core.to_original}, {"demands", demands}};
}

inline Json to_json(const ExpansionReport& r) {
  Json j{{"verdict", to_string(r.verdict)}, {"nodes", r.nodes}};
  if (r.fails()) {
    j["condition"] = r.condition;
    j["witness"] = r.witness;
    if (r.condition == 2) j["partner"] = r.partner;
  }
  return j;
}

inline Json to_json(const HallResult& h) {
  Json j{{"forest", h.forest}};
  if (h.forest) {
    Json a = Json::array();
    for (const auto& [v, ls] : h.assignment) a.push_back({{"a", v}, {"leaves", ls}});
    j["assignment"] = a;
  } else {
    j["deficiency"] = h.deficiency;
  }
  return j;
}

inline Json to_json(const LinkageRequest& r) { return {{"pairs", r.pairs}, {"lengths", r.lengths}}; }

inline Json to_json(const LinkedSpec& s) { return {{"s", s.s}, {"d_min", s.d_min}, {"d_max", s.d_max}}; }

inline Json to_json(const LinkCheck& c) {
  Json j{{"verdict", to_string(c.verdict)}, {"requests", c.requests}};
  if (c.counterexample) j["counterexample"] = to_json(*c.counterexample);
  return j;
}

inline Json to_json(const FPResult& r) {
  long pairs = 0;
  for (const auto& s : r.critical_log) pairs += static_cast<long>(s.critical.size());
  Json j{{"embedding", to_json(r.embedding)},
         {"mode", to_string(r.mode_used)},
         {"e2_verified", r.e2_verified},
         {"steps", r.steps},
         {"nodes", r.nodes},
         {"critical_snapshots", r.critical_log.size()},
         {"critical_sets", pairs}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const EmbedOutcome& o) {
  Json j{{"status", o.embedded() ? "embedded" : "witness"}, {"trace", to_json(o.trace)}};
  if (o.embedding) {
    j["embedding"] = to_json(*o.embedding);
    j["e2_verified"] = o.e2_verified;
    j["fp_mode"] = to_string(o.fp_mode);
  }
  if (o.witness) j["witness"] = *o.witness;
  return j;
}

inline Json to_json(const PipelineConstants& c) {
  return {{"d", to_string(c.d)},     {"r", c.r},   {"y", c.y},
          {"u", c.u},                {"q", c.q},   {"w", c.w},
          {"family_cap", c.family_cap}, {"substitutes", c.substitutes}, {"seed", c.seed},
          {"cap", c.cap}};
}

inline Json to_json(const PipelineResult& r) {
  Json j{{"status", to_string(r.status)},
         {"certified", r.certified},
         {"stage", r.stage},
         {"constants", to_json(r.constants)},
         {"trace", to_json(r.trace)}};
  if (!r.message.empty()) j["message"] = r.message;
  if (r.embedding) j["embedding"] = to_json(*r.embedding);
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

inline Json to_json(const EdgeColoring& c) { return {{"N", c.size()}, {"red", to_json(c.red)}}; }

inline Json to_json(const ChromaticData& c) {
  return {{"chi", c.chi}, {"sigma", c.sigma}, {"coloring", c.coloring}};
}

inline Json to_json(const ContainsResult& r) {
  Json j{{"result", to_string(r.kind)}, {"nodes", r.nodes}};
  if (r.kind != ContainsKind::neither) j["witness"] = r.witness;
  return j;
}

inline Json to_json(const RamseyResult& r) {
  Json log = Json::array();
  for (const auto& e : r.log) log.push_back({{"N", e.n}, {"avoiding", e.avoiding}, {"nodes", e.nodes}});
  return {{"R", r.value}, {"lower_certificate", to_json(r.lower)}, {"log", log}};
}

inline Json to_json(const GoodnessResult& g) {
  Json j{{"verdict", to_string(g.verdict)}, {"bound", g.bound}, {"chi", g.chi}, {"sigma", g.sigma},
         {"bracket", {g.lo, g.hi}}};
  if (g.r) j["R"] = *g.r;
  if (!g.note.empty()) j["note"] = g.note;
  return j;
}

}  // namespace rgood
