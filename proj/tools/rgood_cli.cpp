#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "acceptance.hpp"
#include "spec_parse.hpp"

using namespace rgood;
using namespace rgood::cli;

namespace {

constexpr int kCsvVersion = 1;

enum Exit { ok = 0, error = 1, witness = 2, budget = 3 };

struct Outcome {
  Json body;
  int code = ok;
  std::string summary;
};

struct Global {
  std::string json_out = "-";
  std::string csv_out;
  std::uint64_t budget = 50'000'000;
  int threads = 1;
};

[[noreturn]] void unverified(const std::string& what) {
  throw LemmaViolation("output witness failed re-verification: " + what);
}

std::vector<int> sizes_of(const std::string& s) {
  auto v = parse_ints(s);
  if (v.empty()) throw PreconditionError("--sizes needs at least one part size");
  return v;
}

int default_delta(int given, const RootedForest& t) { return given > 0 ? given : std::max(1, t.actual_max_degree()); }

// Re-checks an embedding outcome before it is written.
void verify_outcome(const Graph& g, const RootedForest& t, const std::optional<Embedding>& e,
                    const std::optional<Parts>& w, const std::vector<int>& sizes) {
  if (e && !valid_embedding(g, t, *e)) unverified("embedding");
  if (w) {
    auto sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> got;
    for (const auto& p : *w) got.push_back(static_cast<int>(p.size()));
    if (!valid_multipartite(complement(g), *w, got)) unverified("multipartite witness");
  }
}

struct PipelineFlags {
  std::string d = "0";
  int r = 0, y = 0, q = 0, w = 0, family_cap = 0, cap = kDefaultEnumerationCap, max_forest = 24;
  bool no_substitutes = false;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--d", d, "expansion factor (0 = named default)");
    app->add_option("--r", r, "bare path length (0 = named default)");
    app->add_option("--y", y, "linked-system path length");
    app->add_option("--q", q, "part size of the first multipartite copy");
    app->add_option("--w", w, "linked-system W size per Q set");
    app->add_option("--family-cap", family_cap, "short paths kept per pair");
    app->add_option("--cap", cap, "enumeration cap for expansion checks");
    app->add_option("--max-forest", max_forest, "largest forest the certified extension accepts");
    app->add_flag("--no-substitutes", no_substitutes, "stop instead of searching when a size hypothesis fails");
    app->add_option("--pipeline-seed", seed, "seed for randomized splits");
  }
  PipelineConstants constants() const {
    PipelineConstants c;
    c.d = parse_rational(d);
    c.r = r;
    c.y = y;
    c.q = q;
    c.w = w;
    c.family_cap = family_cap;
    c.cap = cap;
    c.substitutes = !no_substitutes;
    c.seed = seed;
    c.fp.max_forest = max_forest;
    return c;
  }
};

Outcome from_pipeline(const PipelineResult& r, const Graph& g, const RootedForest& t, const std::vector<int>& sizes) {
  verify_outcome(g, t, r.embedding, r.witness, sizes);
  Outcome o{to_json(r), ok, std::string(to_string(r.status)) + "@" + r.stage};
  if (r.status == PipelineStatus::witness) o.code = witness;
  if (r.status == PipelineStatus::budget) o.code = budget;
  return o;
}

Outcome from_lemma(const EmbedOutcome& r, const Graph& g, const RootedForest& t, const std::vector<int>& sizes) {
  verify_outcome(g, t, r.embedding, r.witness, sizes);
  return {to_json(r), r.embedded() ? ok : witness, r.embedded() ? "embedded" : "witness"};
}

void write_csv(const std::string& path, const std::string& command, const Outcome& o, std::uint64_t nodes) {
  bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  if (fresh) out << "csv_version,command,status,exit_code,nodes,summary\n";
  static const char* by_code[] = {"ok", "error", "witness", "budget_exceeded"};
  std::string status = o.body.contains("status") ? o.body["status"].get<std::string>() : by_code[o.code];
  std::string summary = o.summary;
  std::replace(summary.begin(), summary.end(), ',', ';');
  out << kCsvVersion << ',' << command << ',' << status << ',' << o.code << ',' << nodes << ',' << summary << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rgood: Ramsey goodness toolkit for trees"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command line flags win");
  Global gl;
  app.add_option("--json", gl.json_out, "JSON output path ('-' = stdout)");
  app.add_option("--csv", gl.csv_out, "append a CSV summary row to this file");
  app.add_option("--budget", gl.budget, "decision-node budget for searches")->envname("RGOOD_BUDGET");
  app.add_option("--threads", gl.threads, "worker cap (searches run on one thread)")->check(CLI::PositiveNumber);

  std::function<Outcome(Budget&)> handler;
  std::string command;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&command, name] { command = name; });
    return s;
  };

  // gen-tree
  std::string tree_spec, out_path;
  auto* gen = sub("gen-tree", "build a tree from the shorthand grammar");
  gen->add_option("--tree", tree_spec, "path:n | star:n | random:n,D,bias,seed | file:PATH")->required();
  gen->add_option("--out", out_path, "also write the tree in text format");

  // decompose
  int r_len = 3;
  std::string prefer = "leaves";
  auto* dec = sub("decompose", "many leaves or many bare paths");
  dec->add_option("--tree", tree_spec)->required();
  dec->add_option("--r", r_len, "bare path length")->required();
  dec->add_option("--prefer", prefer, "leaves | paths")->check(CLI::IsMember({"leaves", "paths"}));

  auto* cen = sub("centroid", "single-vertex separator with two balanced sides");
  cen->add_option("--tree", tree_spec)->required();

  bool strip_leaves_flag = false;
  auto* strp = sub("strip", "remove bare path interiors (or all leaves)");
  strp->add_option("--tree", tree_spec)->required();
  strp->add_option("--r", r_len, "bare path length");
  strp->add_flag("--leaves", strip_leaves_flag, "strip leaves instead");

  // check-expand
  std::string graph_spec, w_set, d_str = "1";
  int cap = kDefaultEnumerationCap;
  auto* chk = sub("check-expand", "does g d-expand into W");
  chk->add_option("--graph", graph_spec)->required();
  chk->add_option("--d", d_str, "factor, e.g. 2 or 5/2");
  chk->add_option("--w", w_set, "target set (default all vertices)");
  chk->add_option("--cap", cap, "largest set size enumerated");

  // embed
  std::string mode, sizes_str, roots_str, fp_mode = "automatic", z_set, x_set;
  int delta = 0, m_small = 1, k_parts = 2, big_m = 0, ls = 1, ldmin = 1, ldmax = 1, lr = 0, ly = 0, lpaths = -1;
  PipelineFlags pf;
  auto* emb = sub("embed", "run one embedding lemma or the whole pipeline");
  emb->add_option("mode", mode, "fp | c1 | c2 | many-leaves | linkage | pipeline")
      ->required()
      ->check(CLI::IsMember({"fp", "c1", "c2", "many-leaves", "linkage", "pipeline"}));
  emb->add_option("--graph", graph_spec)->required();
  emb->add_option("--tree", tree_spec)->required();
  emb->add_option("--delta", delta, "degree bound (default: the tree's)");
  emb->add_option("--m", m_small, "small-set size (fp), part size (c2, linkage)");
  emb->add_option("--k", k_parts, "number of parts (c2, linkage)");
  emb->add_option("--sizes", sizes_str, "part sizes m_1,...,m_k (c1, many-leaves, pipeline)");
  emb->add_option("--roots", roots_str, "root hosts (fp)");
  emb->add_option("--big-m", big_m, "forest size bound M (fp; default |f|)");
  emb->add_option("--fp-mode", fp_mode)->check(CLI::IsMember({"certified", "heuristic", "automatic"}));
  emb->add_option("--z", z_set, "tree host set (linkage)");
  emb->add_option("--x", x_set, "linked-system X (linkage)");
  emb->add_option("--lw", w_set, "linked-system W (linkage)");
  emb->add_option("--s", ls, "linked-system s (linkage)");
  emb->add_option("--dmin", ldmin, "linked-system d- (linkage)");
  emb->add_option("--dmax", ldmax, "linked-system d+ (linkage)");
  emb->add_option("--lr", lr, "bare path length r (linkage)");
  emb->add_option("--ly", ly, "routed length y (linkage)");
  emb->add_option("--paths", lpaths, "bare paths to reroute (linkage; -1 = ceil(n/4r))");
  pf.attach(emb);

  // link-check
  auto* lnk = sub("link-check", "is (X, W) an (s, d-, d+)-linked system");
  lnk->add_option("--graph", graph_spec)->required();
  lnk->add_option("--x", x_set)->required();
  lnk->add_option("--w", w_set)->required();
  lnk->add_option("--s", ls)->required();
  lnk->add_option("--dmin", ldmin)->required();
  lnk->add_option("--dmax", ldmax)->required();

  // join
  std::string instance;
  bool join_verify = false;
  auto* jn = sub("join", "join linked systems along an auxiliary graph");
  jn->add_option("--instance", instance, "JSON instance file (see docs/formats.md)")->required();
  jn->add_flag("--verify", join_verify, "enumerate every request against the joined system");

  // burr
  int g_size = 0, chi = 0, sigma = 0, tight_n = 0, tight_k = 0;
  std::vector<std::string> verify_pair;
  auto* brr = sub("burr", "extremal colouring and the chromatic lower bound");
  brr->add_option("--g-size", g_size);
  brr->add_option("--chi", chi);
  brr->add_option("--sigma", sigma);
  brr->add_option("--tightness-n", tight_n, "2k-1 cliques of size n-1 instead");
  brr->add_option("--tightness-k", tight_k);
  brr->add_option("--verify", verify_pair, "TREE H: search the colouring for red TREE / blue H")->expected(2);

  // ramsey / goodness
  std::string h_spec, cert_path;
  int n_max = 10;
  auto* ram = sub("ramsey", "exact R(t, h) by exhaustive colouring search");
  ram->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  ram->add_option("--tree", tree_spec)->required();
  ram->add_option("--h", h_spec)->required();
  ram->add_option("--n-max", n_max);
  ram->add_option("--certificate", cert_path, "write the avoiding colouring of K_{R-1} here");
  auto* good = sub("goodness", "compare R(t, h) with the chromatic lower bound");
  good->set_help_flag("--help", "print this help and exit");
  good->add_option("--tree", tree_spec)->required();
  good->add_option("--h", h_spec)->required();
  good->add_option("--n-max", n_max);

  // suite
  std::uint64_t suite_seed = 1;
  double scale = 1.0;
  std::string only;
  auto* ste = sub("suite", "run the acceptance battery");
  ste->add_option("--seed", suite_seed);
  ste->add_option("--scale", scale, "multiply instance counts")->check(CLI::Range(0.0, 1.0));
  ste->add_option("--only", only, "comma-separated criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int c = app.exit(e);
    return c == 0 ? 0 : error;
  }

  Budget bud{gl.budget, 0};
  Outcome out;
  try {
    if (command == "gen-tree") {
      auto t = parse_tree(tree_spec);
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        write_tree_text(f, t);
      }
      out.body = {{"tree", to_json(t)}, {"leaves", leaves(t).size()}, {"max_degree", t.actual_max_degree()}};
      out.summary = "n=" + std::to_string(t.size());
    } else if (command == "decompose") {
      auto t = parse_tree(tree_spec);
      auto res = leaves_or_bare_paths(t, r_len, prefer == "paths" ? BranchPreference::paths_first
                                                                  : BranchPreference::leaves_first);
      if (res.branch == Branch::paths) validate_bare_paths(t, res.paths);
      out.body = to_json(res);
      out.summary = res.branch == Branch::leaves ? "leaves " + std::to_string(res.leaves.size())
                                                 : "paths " + std::to_string(res.paths.paths.size());
    } else if (command == "centroid") {
      auto t = parse_tree(tree_spec);
      auto c = centroid_split(t);
      out.body = to_json(c);
      out.summary = "u=" + std::to_string(c.u);
    } else if (command == "strip") {
      auto t = parse_tree(tree_spec);
      if (strip_leaves_flag) {
        out.body = to_json(strip_leaves(t));
        out.summary = "leaves";
      } else {
        auto s = strip_bare_path_interiors(t, harvest_bare_paths(t, r_len));
        out.body = to_json(s);
        out.summary = "paths " + std::to_string(s.endpoint_pairs.size());
      }
    } else if (command == "check-expand") {
      auto g = parse_graph(graph_spec);
      VertexSet w = w_set.empty() ? g.vertices() : parse_set(w_set);
      Rational d = parse_rational(d_str);
      auto rep = check_d_expands(g, w, d, bud, cap);
      if (rep.fails() && !is_genuine_violation(g, w, d, rep)) unverified("expansion violation");
      out.body = to_json(rep);
      out.code = rep.holds() ? ok : rep.fails() ? witness : budget;
      out.summary = to_string(rep.verdict);
    } else if (command == "embed") {
      auto g = parse_graph(graph_spec);
      auto t = parse_tree(tree_spec);
      int dl = default_delta(delta, t);
      LemmaOptions lo;
      lo.cap = pf.cap;
      lo.fp.max_forest = pf.max_forest;
      if (mode == "fp") {
        auto roots = parse_ints(roots_str);
        FPParams p{dl, m_small, big_m > 0 ? big_m : t.size()};
        FPOptions fo;
        fo.mode = fp_mode == "certified" ? FPMode::certified
                  : fp_mode == "heuristic" ? FPMode::heuristic
                                           : FPMode::automatic;
        fo.max_forest = pf.max_forest;
        try {
          auto r = fp_embed_forest(g, roots, t, p, fo, bud);
          if (!valid_embedding(g, t, r.embedding, roots)) unverified("fp embedding");
          out.body = to_json(r);
          out.body["status"] = "embedded";
          out.summary = to_string(r.mode_used);
        } catch (const HypothesisViolated& h) {
          // Either a small Γ set or a set breaking the inequality at the roots.
          VertexSet s = VertexSet::from(h.witness());
          if (s.empty()) unverified("hypothesis witness");
          out.body = {{"status", "hypothesis_violated"}, {"witness", h.witness()}, {"message", h.what()}};
          out.code = witness;
          out.summary = "hypothesis";
        }
      } else if (mode == "c1") {
        auto sz = sizes_of(sizes_str);
        if (sz.size() != 2) throw PreconditionError("c1 needs --sizes m1,m2");
        out = from_lemma(embed_avoiding_bipartite(g, t, dl, sz[0], sz[1], lo, bud), g, t, sz);
      } else if (mode == "c2") {
        out = from_lemma(embed_avoiding_multipartite(g, t, dl, k_parts, m_small, lo, bud), g, t,
                         std::vector<int>(static_cast<std::size_t>(k_parts), m_small));
      } else if (mode == "many-leaves") {
        auto sz = sizes_of(sizes_str);
        out = from_lemma(embed_many_leaves(g, t, dl, sz, lo, bud), g, t, sz);
      } else if (mode == "linkage") {
        auto sys = solver_system(g, parse_set(x_set), parse_set(w_set), LinkedSpec{ls, ldmin, ldmax});
        LinkageParams lp{lr, ly, 0, m_small, k_parts, dl, lpaths};
        auto r = embed_via_linkage(g, parse_set(z_set), sys, t, lp, pf.constants(), bud);
        out = from_pipeline(r, g, t, std::vector<int>(static_cast<std::size_t>(k_parts), m_small));
      } else {
        auto sz = sizes_of(sizes_str);
        out = from_pipeline(goodness_pipeline(g, t, dl, sz, pf.constants(), bud), g, t, sz);
      }
    } else if (command == "link-check") {
      auto g = parse_graph(graph_spec);
      auto rep = check_linked_system(g, parse_set(x_set), parse_set(w_set), LinkedSpec{ls, ldmin, ldmax}, bud);
      out.body = to_json(rep);
      out.code = rep.verdict == Verdict::holds ? ok : rep.verdict == Verdict::fails ? witness : budget;
      out.summary = to_string(rep.verdict);
    } else if (command == "join") {
      Json in = Json::parse(slurp(instance));
      Graph g = graph_from_json(in.at("graph"));
      std::vector<LinkedSystem> systems;
      for (const auto& s : in.at("systems"))
        systems.push_back(solver_system(g, VertexSet::from(s.at("x").get<std::vector<int>>()),
                                        VertexSet::from(s.at("w").get<std::vector<int>>()),
                                        LinkedSpec{s.at("s"), s.at("d_min"), s.at("d_max")}));
      std::vector<std::pair<int, int>> f_edges = in.value("f_edges", std::vector<std::pair<int, int>>{});
      std::map<std::pair<int, int>, std::vector<std::vector<int>>> fams;
      for (const auto& f : in.value("families", Json::array())) {
        int u = f.at("u"), v = f.at("v");
        fams[{std::min(u, v), std::max(u, v)}] = f.at("paths").get<std::vector<std::vector<int>>>();
      }
      auto joined = join_many(g, systems, f_edges, fams, in.value("require_family_size", true));
      out.body = {{"x", to_json(joined.system.x)},
                  {"w", to_json(joined.system.w)},
                  {"spec", to_json(joined.system.spec)},
                  {"tight_d_min", joined.tight_d_min},
                  {"order", joined.order},
                  {"connectors", joined.chosen}};
      out.summary = "joined " + std::to_string(systems.size());
      if (join_verify) {
        auto rc = check_router(g, joined.system);
        auto lc = check_linked_system(g, joined.system.x, joined.system.w, joined.system.spec, bud);
        out.body["router_check"] = to_json(rc);
        out.body["linked_check"] = to_json(lc);
        if (rc.verdict == Verdict::fails || lc.verdict == Verdict::fails) out.code = witness;
        if (rc.verdict == Verdict::unknown || lc.verdict == Verdict::unknown) out.code = budget;
      }
    } else if (command == "burr") {
      std::vector<int> sizes;
      if (tight_n > 0) {
        sizes = tightness_sizes(tight_n, tight_k);
        out.body["kind"] = "tightness";
      } else {
        sizes = burr_sizes(g_size, chi, sigma);
        out.body["kind"] = "burr";
        out.body["bound"] = burr_bound(g_size, chi, sigma);
      }
      auto col = clique_blowup_coloring(sizes);
      out.body["sizes"] = sizes;
      out.body["coloring"] = to_json(col);
      out.summary = "N=" + std::to_string(col.size());
      if (!verify_pair.empty()) {
        auto t = parse_tree(verify_pair[0]);
        auto h = parse_graph(verify_pair[1]);
        auto res = coloring_contains(col, t, h, bud);
        if (res.kind == ContainsKind::red_t && !valid_embedding(col.red, t, Embedding{res.witness}))
          unverified("red copy");
        if (res.kind == ContainsKind::blue_h && !valid_subgraph_map(col.blue(), h, res.witness))
          unverified("blue copy");
        out.body["verify"] = to_json(res);
        out.summary += std::string(" ") + to_string(res.kind);
      }
    } else if (command == "ramsey") {
      auto t = parse_tree(tree_spec);
      auto h = parse_graph(h_spec);
      try {
        auto r = ramsey_number(t, h, n_max, bud);
        Budget vb = Budget::unlimited();
        if (coloring_contains(r.lower, t, h, vb).kind != ContainsKind::neither) unverified("lower certificate");
        if (!cert_path.empty()) {
          std::ofstream f(cert_path);
          write_coloring_text(f, r.lower);
        }
        out.body = to_json(r);
        out.body["status"] = "exact";
        out.summary = "R=" + std::to_string(r.value);
      } catch (const RamseyCapExceeded& e) {
        out.body = {{"status", "capped"}, {"bracket", {e.lo(), e.hi()}}, {"message", e.what()}};
        out.code = budget;
        out.summary = "capped";
      }
    } else if (command == "goodness") {
      auto t = parse_tree(tree_spec);
      auto h = parse_graph(h_spec);
      auto r = goodness_check(t, h, n_max, bud);
      out.body = to_json(r);
      out.code = r.verdict == Goodness::unknown ? budget : ok;
      out.summary = to_string(r.verdict);
    } else if (command == "suite") {
      auto res = acceptance::run_suite(suite_seed, acceptance::Scale{scale}, parse_ints(only));
      bool all = true;
      for (const auto& c : res["criteria"]) all = all && c["pass"].get<bool>();
      out.body = res;
      out.body["status"] = all ? "pass" : "fail";
      out.code = all ? ok : error;
      out.summary = all ? "pass" : "fail";
    }
  } catch (const SearchBudgetExceeded& e) {
    out.body = {{"status", "budget_exceeded"}, {"message", e.what()}};
    out.code = budget;
    out.summary = "budget";
  } catch (const CapExceeded& e) {
    out.body = {{"status", "cap_exceeded"}, {"message", e.what()}};
    out.code = budget;
    out.summary = "cap";
  } catch (const std::exception& e) {
    std::cerr << "rgood " << command << ": " << e.what() << '\n';
    out.body = {{"status", "error"}, {"message", e.what()}};
    out.code = error;
    out.summary = "error";
  }

  out.body["command"] = command;
  std::string text = out.body.dump(2) + "\n";
  if (gl.json_out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(gl.json_out);
    f << text;
  }
  if (!gl.csv_out.empty()) write_csv(gl.csv_out, command, out, bud.used);
  return out.code;
}
