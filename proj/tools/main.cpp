// Command-line surface: exact-arithmetic subgroup graphs over free products,
// intersection ranks, the word order, maximal-edge certificates, and the
// free-group pipeline.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freeprod/instance_io.hpp"
#include "freeprod/max_edges.hpp"
#include "freeprod/order.hpp"
#include "freeprod/verify.hpp"

using namespace freeprod;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kParseError = 2;
constexpr int kFactorFree = 3;
constexpr int kInternal = 4;

json ray_to_json(const RaySpec& r) {
  json j;
  j["spine"] = r.spine;
  j["cycle"] = r.cycle;
  j["rotation"] = r.rotation;
  return j;
}

json cert_to_json(const MaxEdgeCertificate& c) {
  json j;
  j["high"] = ray_to_json(c.high);
  j["low"] = ray_to_json(c.low);
  json table = json::array();
  for (const Word& w : c.prefix_table) table.push_back(format_word(w));
  j["prefix_table"] = table;
  return j;
}

json certified_to_json(const CertifiedEdges& ce) {
  json j;
  json edges = json::array();
  for (const auto& [e, cert] : ce.edges) {
    json item;
    item["edge"] = e;
    item["certificate"] = cert_to_json(cert);
    edges.push_back(item);
  }
  j["edges"] = edges;
  j["complete"] = ce.complete;
  j["exhausted"] = ce.exhausted;
  return j;
}

int cmd_rank(const std::string& file, const std::string& name, bool as_json) {
  InstanceFile inst = load_instance(file);
  SubgroupGraph g = build_from_generators(inst.subgroup(name));
  auto bs = basis(g);
  if (as_json) {
    json j;
    j["subgroup"] = name;
    j["reduced_rank"] = reduced_rank(g);
    j["basis_size"] = bs.size();
    j["euler_characteristic"] = euler_char(g);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "subgroup " << name << ": reduced rank " << reduced_rank(g)
              << ", basis size " << bs.size() << "\n";
  }
  return kOk;
}

int cmd_intersect(const std::string& file, const std::string& n1,
                  const std::string& n2, bool as_json) {
  InstanceFile inst = load_instance(file);
  SubgroupGraph g1 = build_from_generators(inst.subgroup(n1));
  SubgroupGraph g2 = build_from_generators(inst.subgroup(n2));
  Pullback p = pullback(g1, g2);
  auto comps = components(p);
  TheoremReport rep = verify_theorem1(g1, g2);
  if (as_json) {
    json j;
    j["rank1"] = rep.rank1;
    j["rank2"] = rep.rank2;
    j["total_rank"] = rep.total_rank;
    j["holds"] = rep.holds;
    json cj = json::array();
    for (const auto& c : comps) {
      json e;
      e["rank"] = c.rank;
      e["representative"] = format_word(c.representative);
      e["vertices"] = c.vertices;
      e["edge_pairs"] = c.edge_pairs;
      cj.push_back(e);
    }
    j["components"] = cj;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "r(" << n1 << ") = " << rep.rank1 << ", r(" << n2
              << ") = " << rep.rank2 << "\n";
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::cout << "component " << i << ": rank " << comps[i].rank << ", s = "
                << format_word(comps[i].representative) << " ("
                << comps[i].vertices << " vertices, " << comps[i].edge_pairs
                << " edge pairs)\n";
    }
    std::cout << "total intersection rank " << rep.total_rank << " <= "
              << rep.rank1 * rep.rank2 << ": "
              << (rep.holds ? "HOLDS" : "VIOLATION") << "\n";
  }
  return rep.holds ? kOk : kViolation;
}

int cmd_order_cmp(const std::string& file, const std::string& w1,
                  const std::string& w2) {
  InstanceFile inst = load_instance(file);
  Word u = parse_word(w1, inst.factors);
  Word w = parse_word(w2, inst.factors);
  std::cout << to_string(compare(u, w)) << "\n";
  return kOk;
}

int cmd_order_embed(const std::string& file, const std::string& wtext,
                    std::size_t cap) {
  InstanceFile inst = load_instance(file);
  Word w = parse_word(wtext, inst.factors);
  if (cap == 0) cap = std::max<std::size_t>(w.size(), 1);
  TruncatedSeries s = embed_word(w, cap);
  for (const auto& [m, c] : s.terms) {
    std::cout << rat_str(c) << " ";
    if (m.vars.empty()) std::cout << "1";
    for (FactorId v : m.vars) std::cout << "X" << (v + 1);
    std::cout << "\n";
  }
  return kOk;
}

int cmd_word_classify(const std::string& file, const std::string& wtext,
                      bool as_json) {
  InstanceFile inst = load_instance(file);
  Word w = parse_word(wtext, inst.factors);
  if (w.empty()) {
    std::cout << (as_json ? "{\"empty\":true}" : "empty word") << "\n";
    return kOk;
  }
  bool sp = is_strongly_positive(w);
  auto [u1, u2] = positive_factorization(w);
  json j;
  j["strongly_positive"] = sp;
  j["sign"] = word_sign(w) == Sign::Positive ? "positive" : "negative";
  j["factorization"] = {{"u1", format_word(u1)}, {"u2", format_word(u2)}};
  if (is_cyclically_reduced(w)) {
    auto [rot, sign] = strongly_signed_rotation(w);
    j["rotation"] = {{"by", rot}, {"sign", to_string(sign)}};
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "word: " << format_word(w) << "\n";
    std::cout << "sign: " << j["sign"].get<std::string>() << "\n";
    std::cout << "strongly positive: " << (sp ? "yes" : "no") << "\n";
    std::cout << "factorization: u1 = " << format_word(u1) << ", u2 = "
              << format_word(u2) << "\n";
    if (j.contains("rotation"))
      std::cout << "rotation: by " << j["rotation"]["by"] << ", "
                << j["rotation"]["sign"].get<std::string>() << "\n";
    else
      std::cout << "rotation: not cyclically reduced\n";
  }
  return kOk;
}

int cmd_maxedges(const std::string& file, const std::string& n1,
                 const std::string& n2, std::size_t budget, bool as_json) {
  InstanceFile inst = load_instance(file);
  SubgroupGraph g1 = build_from_generators(inst.subgroup(n1));
  SubgroupGraph g2 = build_from_generators(inst.subgroup(n2));
  Pullback p = pullback(g1, g2);

  json j;
  bool found = false;
  EdgeId edge = kNoEdge;
  MaxEdgeCertificate cert;
  try {
    std::tie(edge, cert) = find_one_maximal_edge(p.graph);
    found = true;
  } catch (const ChiNonNegative&) {
  }
  CertifiedEdges all = find_all_certified(p.graph, budget);
  std::set<EdgeId> d;
  for (const auto& [e, c] : all.edges) d.insert(e);
  bool good = is_good_cut(p.graph, d);
  EdgeCountReport rep = verify_edge_count_bound(p, budget);

  j["pullback"] = {{"vertices", p.graph.vertex_count()},
                   {"edge_pairs", p.graph.pair_count()},
                   {"euler_characteristic", euler_char(p.graph)}};
  if (found) {
    j["maximal_edge"] = edge;
    j["certificate"] = cert_to_json(cert);
  }
  j["certified"] = certified_to_json(all);
  j["good_cut"] = good;
  j["chain"] = {{"d", rep.d_count},
                {"tau1", rep.tau1_size},
                {"tau2", rep.tau2_size},
                {"d1", rep.d1_count},
                {"d2", rep.d2_count},
                {"within_bound", rep.within_bound},
                {"complete", rep.chain_checked},
                {"holds", rep.chain_holds},
                {"inconclusive", rep.inconclusive}};
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "pullback: chi = " << euler_char(p.graph) << "\n";
    if (found)
      std::cout << "maximal edge " << edge << " certified\n";
    else
      std::cout << "no component of negative characteristic\n";
    std::cout << "certified edges: " << all.edges.size()
              << (all.complete ? " (complete)" : " (not proven complete)")
              << ", good cut: " << (good ? "yes" : "no") << "\n";
    std::cout << "chain: " << rep.d_count << " <= " << rep.tau1_size << "*"
              << rep.tau2_size << " <= " << rep.d1_count << "*"
              << rep.d2_count;
    if (rep.inconclusive)
      std::cout << " [inconclusive]";
    else
      std::cout << (rep.chain_holds ? " [holds]" : " [VIOLATION]");
    std::cout << "\n";
  }
  if (!rep.within_bound) return kViolation;
  if (rep.chain_checked && !rep.chain_holds) return kViolation;
  return kOk;
}

int cmd_shnc(const std::string& file, std::string n1, std::string n2,
             bool as_json) {
  InstanceFile inst = load_instance(file);
  if (inst.free_subgroups.empty())
    throw ParseError("instance has no free_group block");
  if (n1.empty()) n1 = inst.free_subgroups.begin()->first;
  if (n2.empty())
    n2 = inst.free_subgroups.size() > 1
             ? std::next(inst.free_subgroups.begin())->first
             : n1;
  ShncReport rep = verify_shnc(inst.free_subgroup(n1), inst.free_subgroup(n2));
  if (as_json) {
    json j;
    j["free_total"] = rep.free_total;
    j["product_total"] = rep.product_total;
    j["rank1"] = rep.rank1;
    j["rank2"] = rep.rank2;
    j["free_components"] = rep.free_components;
    j["product_components"] = rep.product_components;
    j["holds"] = rep.holds;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "free-group side: total " << rep.free_total << " over "
              << rep.free_components << " double cosets\n";
    std::cout << "embedded side:   total " << rep.product_total << " over "
              << rep.product_components << " double cosets\n";
    std::cout << rep.free_total << " <= " << rep.product_total << " <= "
              << rep.rank1 << "*" << rep.rank2 << ": "
              << (rep.holds ? "HOLDS" : "VIOLATION") << "\n";
  }
  return rep.holds ? kOk : kViolation;
}

int cmd_export_dot(const std::string& file, const std::string& name,
                   const std::string& out_path) {
  InstanceFile inst = load_instance(file);
  SubgroupGraph g = build_from_generators(inst.subgroup(name));
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot open output file '" + out_path + "'");
  out << to_dot(g, "subgroup");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor-free subgroups of free products of ordered groups: "
               "graphs, intersections, orders, maximal edges"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string file, name1, name2, word1, word2, out_path;
  std::size_t budget = 0, cap = 0;

  auto* rank = app.add_subcommand("rank", "reduced rank and basis size");
  rank->add_option("file", file)->required();
  rank->add_option("subgroup", name1)->required();

  auto* inter = app.add_subcommand("intersect",
                                   "intersection components and rank bound");
  inter->add_option("file", file)->required();
  inter->add_option("H1", name1)->required();
  inter->add_option("H2", name2)->required();

  auto* order = app.add_subcommand("order", "word order utilities");
  order->require_subcommand(1);
  auto* cmp = order->add_subcommand("cmp", "compare two words");
  cmp->add_option("file", file)->required();
  cmp->add_option("w1", word1)->required();
  cmp->add_option("w2", word2)->required();
  auto* embed = order->add_subcommand("embed", "dump a word's series");
  embed->add_option("file", file)->required();
  embed->add_option("w", word1)->required();
  embed->add_option("--cap", cap, "truncation degree (default: word length)");

  auto* word = app.add_subcommand("word", "word classification");
  word->require_subcommand(1);
  auto* classify =
      word->add_subcommand("classify", "sign, factorization, rotation");
  classify->add_option("file", file)->required();
  classify->add_option("w", word1)->required();

  auto* maxe = app.add_subcommand("maxedges",
                                  "maximal edges of the intersection graph");
  maxe->add_option("file", file)->required();
  maxe->add_option("H1", name1)->required();
  maxe->add_option("H2", name2)->required();
  maxe->add_option("--budget", budget, "search budget (0 = default)");

  auto* shnc = app.add_subcommand("shnc", "free-group pipeline");
  shnc->add_option("file", file)->required();
  shnc->add_option("K1", name1);
  shnc->add_option("K2", name2);

  auto* verify = app.add_subcommand("verify", "random rank-bound sweep");
  SweepOptions sweep;
  verify->add_option("--count", sweep.count, "instances to run");
  verify->add_option("--seed", sweep.seed, "base seed");
  verify->add_flag("--verbose", sweep.verbose, "one line per instance");
  std::size_t min_factors = 2, max_factors = 4, max_gens = 4,
              max_syllables = 8;
  bool z_only = false;
  verify->add_option("--min-factors", min_factors);
  verify->add_option("--max-factors", max_factors);
  verify->add_option("--max-gens", max_gens);
  verify->add_option("--max-syllables", max_syllables);
  verify->add_flag("--z-only", z_only, "integer factors only");

  auto* dot = app.add_subcommand("export-dot", "write a subgroup graph");
  dot->add_option("file", file)->required();
  dot->add_option("subgroup", name1)->required();
  dot->add_option("out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (rank->parsed()) return cmd_rank(file, name1, as_json);
    if (inter->parsed()) return cmd_intersect(file, name1, name2, as_json);
    if (order->parsed()) {
      if (cmp->parsed()) return cmd_order_cmp(file, word1, word2);
      if (embed->parsed()) return cmd_order_embed(file, word1, cap);
    }
    if (word->parsed() && classify->parsed())
      return cmd_word_classify(file, word1, as_json);
    if (maxe->parsed())
      return cmd_maxedges(file, name1, name2, budget, as_json);
    if (shnc->parsed()) return cmd_shnc(file, name1, name2, as_json);
    if (verify->parsed()) {
      sweep.spec.min_factors = min_factors;
      sweep.spec.max_factors = max_factors;
      sweep.spec.max_gens = max_gens;
      sweep.spec.max_syllables = max_syllables;
      sweep.spec.z_only = z_only;
      SweepResult res = run_sweep(sweep, std::cout);
      return res.violations == 0 ? kOk : kViolation;
    }
    if (dot->parsed()) return cmd_export_dot(file, name1, out_path);
    std::cerr << "no subcommand\n";
    return kParseError;
  } catch (const FactorFreeViolation& ex) {
    std::cerr << "factor-freeness violation: witness "
              << format_word(ex.witness) << "\n";
    return kFactorFree;
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return kParseError;
  } catch (const std::logic_error& ex) {
    std::cerr << "internal invariant failure: " << ex.what() << "\n";
    return kInternal;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kParseError;
  }
}
