// repstab: command-line driver for the free-group / H3 stability toolkit.
//
// Every command emits a single JSON report (config echo + results) and an
// optional flat CSV companion. Reports are deterministic: identical flags
// (and seed, where sampling is involved) produce byte-identical output;
// wall-clock timing is only included when --timing is passed.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "repstab/families.hpp"
#include "repstab/mobius.hpp"
#include "repstab/stability.hpp"
#include "repstab/tree.hpp"
#include "repstab/word.hpp"

using json = nlohmann::ordered_json;
using namespace repstab;

namespace {

constexpr const char* kVersion = "repstab 1.0.0";

// Exit codes: 0 pass, 1 invalid config, 2 failed certificate,
// 3 inconclusive, 4 resource cap exceeded.
enum ExitCode { kOk = 0, kInvalidConfig = 1, kFailed = 2, kInconclusive = 3, kCap = 4 };

struct Output {
  std::string out_path;  // empty: stdout
  std::string csv_path;
  bool timing = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const std::string& command, const json& config, const json& results,
            const std::vector<std::vector<std::string>>& csv_rows = {}) const {
    json report;
    report["command"] = command;
    report["version"] = kVersion;
    report["config"] = config;
    report["results"] = results;
    if (timing) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
      report["timing_ms"] = ms;
    }
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path);
      if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
      f << text;
    }
    if (!csv_path.empty()) {
      std::ofstream f(csv_path);
      if (!f) throw std::invalid_argument("cannot open CSV file: " + csv_path);
      for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << "\n";
      }
    }
  }
};

json fit_json(const QuasiFit& fit) {
  return json{{"K", fit.K},
              {"C", fit.C},
              {"witness_pair", {fit.witness_i, fit.witness_j}},
              {"not_embedding", fit.not_embedding},
              {"scope", fit.scope}};
}

json boundary_json(const BoundaryPoint& p) {
  if (p.at_infinity) return json("inf");
  return json(format_complex(p.z));
}

json classify_json(const IsometryClass& c) {
  json fps = json::array();
  for (const BoundaryPoint& p : c.fixed_points) fps.push_back(boundary_json(p));
  return json{{"kind", isometry_kind_name(c.kind)},
              {"translation_length", c.translation_length},
              {"trace_squared", format_complex(c.trace_squared)},
              {"fixed_points", fps},
              {"near_boundary", c.near_boundary}};
}

TestFamily build_family(const std::string& label, int k, int L, int depth) {
  if (label == "b_set") return build_b_set(k);
  if (label == "commutators") return build_commutators(k, L);
  if (label == "w_set") return build_w_set(k);
  if (label == "primitive_sample") return build_primitive_sample(k, depth);
  if (label == "ball") return build_ball_family(k, L);
  throw std::invalid_argument(
      "unknown family '" + label +
      "' (expected b_set, commutators, w_set, primitive_sample, or ball)");
}

Representation load_representation(const std::string& spec, int k) {
  if (spec == "schottky") return schottky_representation();
  if (spec == "degenerate") return degenerate_representation();
  if (spec == "rotation") return rotation_loxodromic_representation();
  if (spec == "tree") return tree_left_multiplication_representation(k);

  std::ifstream f(spec);
  if (!f)
    throw std::invalid_argument("representation '" + spec +
                                "' is neither a readable file nor a builtin "
                                "(schottky, degenerate, rotation, tree)");
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("bad representation file " + spec + ": " + e.what());
  }
  std::string target = doc.value("target", "H3");
  if (!doc.contains("generators") || !doc["generators"].is_array())
    throw std::invalid_argument("representation file needs a 'generators' array");
  if (target == "H3") {
    std::vector<Mobius> gens;
    for (const auto& g : doc["generators"]) gens.push_back(parse_mobius(g.get<std::string>()));
    H3Point base{};
    if (doc.contains("basepoint")) {
      base.x = parse_complex(doc["basepoint"].value("x", "0"));
      base.t = doc["basepoint"].value("t", 1.0);
      if (!(base.t > 0)) throw std::invalid_argument("basepoint height must be positive");
    }
    return make_h3_representation(std::move(gens), base);
  }
  if (target == "tree" || target == "CayleyTree") {
    int rank = doc.value("rank", static_cast<int>(doc["generators"].size()));
    std::vector<TreeIsometry> gens;
    for (const auto& g : doc["generators"])
      gens.push_back(parse_tree_isometry(g.get<std::string>(), rank));
    return make_tree_representation(std::move(gens));
  }
  throw std::invalid_argument("unknown target '" + target + "' (expected H3 or tree)");
}

// ---------------------------------------------------------------------------

int cmd_words(const Output& out, int k, const std::string& w_text, const std::string& v_text,
              int ball_radius) {
  json config{{"k", k}, {"w", w_text}, {"v", v_text}, {"ball", ball_radius}};
  ReducedWord w = parse_word(w_text, k);
  json res;
  res["reduced"] = format_word(w);
  res["length"] = w.length();
  CyclicWord c = cyclic_reduce(w);
  res["cyclic_core"] = format_word(c.core);
  res["conjugator"] = format_word(c.conjugator);
  res["l_S"] = conjugacy_length(w);
  res["conjugacy_key"] = format_word(conjugacy_key(w));
  res["inverse"] = format_word(inverse(w));
  if (!v_text.empty()) {
    ReducedWord v = parse_word(v_text, k);
    res["v"] = format_word(v);
    res["distance"] = word_distance(w, v);
    res["gromov_product_at_e"] = to_string(gromov_product(w, v, identity_word(k)));
    res["product"] = format_word(concat(w, v));
  }
  if (ball_radius >= 0) {
    res["ball_radius"] = ball_radius;
    res["ball_size"] = ball_size(k, ball_radius);
  }
  out.emit("words", config, res);
  return kOk;
}

int cmd_auts(const Output& out, int k, const std::string& phi_text) {
  json config{{"k", k}, {"phi", phi_text}};
  FreeAutomorphism phi = parse_automorphism(phi_text, k);
  json res;
  res["phi"] = format_automorphism(phi);
  res["inverse"] = format_automorphism(invert(phi));
  OuterClassWitness wit = is_inner(phi);
  res["is_inner"] = wit.inner;
  if (wit.conjugator) res["conjugator"] = format_word(*wit.conjugator);
  if (wit.separating_word) res["separating_word"] = format_word(*wit.separating_word);
  res["outer_normal_form"] = format_automorphism(outer_normal_form(phi));
  LambdaResult lam = lambda_of(phi);
  res["lambda"] = lam.lambda;
  res["lambda_minimizer"] = format_word(lam.minimizer);
  out.emit("auts", config, res);
  return kOk;
}

int cmd_families(const Output& out, int k, const std::string& label, int L, int depth) {
  json config{{"k", k}, {"family", label}, {"L", L}, {"depth", depth}};
  TestFamily fam = build_family(label, k, L, depth);
  json res;
  res["label"] = fam.label;
  res["size"] = fam.members.size();
  res["in_derived_subgroup"] = all_members_in_derived_subgroup(fam);
  res["notes"] = fam.notes;
  json members = json::array();
  std::vector<std::vector<std::string>> csv{{"member", "l_S"}};
  for (const ReducedWord& m : fam.members) {
    members.push_back(format_word(m));
    csv.push_back({format_word(m), std::to_string(conjugacy_length(m))});
  }
  res["members"] = members;
  out.emit("families", config, res, csv);
  return kOk;
}

int cmd_certify(const Output& out, int k, const std::string& rep_spec,
                const std::string& family_label, int fam_L, int depth, int L, int M) {
  json config{{"k", k},     {"rep", rep_spec}, {"family", family_label},
              {"family_L", fam_L}, {"depth", depth},  {"L", L},
              {"M", M}};
  Representation rho = load_representation(rep_spec, k);
  TestFamily fam = build_family(family_label, rho.rank, fam_L, depth);
  StabilityCertificate cert = certify_stability(rho, fam, L, M);
  json res;
  res["passed"] = cert.passed;
  res["K"] = cert.K;
  res["C"] = cert.C;
  res["scope"] = cert.scope;
  if (cert.failure_witness) res["failure_witness"] = format_word(*cert.failure_witness);
  json per = json::array();
  std::vector<std::vector<std::string>> csv{{"member", "K", "C", "local_ok", "not_embedding"}};
  for (const ElementDiagnostic& d : cert.per_element) {
    per.push_back(json{{"member", format_word(d.member)},
                       {"fit", fit_json(d.fit)},
                       {"local_ok", d.local_ok}});
    csv.push_back({format_word(d.member), std::to_string(d.fit.K), std::to_string(d.fit.C),
                   d.local_ok ? "1" : "0", d.fit.not_embedding ? "1" : "0"});
  }
  res["per_element"] = per;
  out.emit("certify", config, res, csv);
  return cert.passed ? kOk : kFailed;
}

int cmd_displace(const Output& out, int k, const std::string& rep_spec,
                 const std::string& family_label, int fam_L, int depth) {
  json config{{"k", k},
              {"rep", rep_spec},
              {"family", family_label},
              {"family_L", fam_L},
              {"depth", depth}};
  Representation rho = load_representation(rep_spec, k);
  TestFamily fam = build_family(family_label, rho.rank, fam_L, depth);
  DisplacementFit fit = fit_well_displacing(rho, fam);
  json res{{"J", fit.J},
           {"B", fit.B},
           {"failed", fit.failed},
           {"witness", format_word(fit.witness)},
           {"scope", fit.scope}};
  std::vector<std::vector<std::string>> csv{{"member", "l_S", "displacement"}};
  for (const ReducedWord& m : fam.members)
    csv.push_back({format_word(m), std::to_string(conjugacy_length(m)),
                   std::to_string(image_translation_length(rho, m))});
  out.emit("displace", config, res, csv);
  return fit.failed ? kFailed : kOk;
}

int cmd_pingpong(const Output& out, int k, const std::string& u_text, const std::string& v_text,
                 const std::string& gamma0_text, const std::string& h_text, int n_max,
                 int alpha_L) {
  json config{{"k", k},      {"u", u_text},    {"v", v_text}, {"gamma0", gamma0_text},
              {"h", h_text}, {"n_max", n_max}, {"alpha_L", alpha_L}};
  json res;
  if (!u_text.empty()) {
    ReducedWord u = parse_word(u_text, k), v = parse_word(v_text, k);
    PingPongReport rep = ping_pong_check(u, v);
    res["check"] = json{{"ok", rep.ok},
                        {"length_ok", rep.length_ok},
                        {"cross_ok", rep.cross_ok},
                        {"self_u_ok", rep.self_u_ok},
                        {"self_v_ok", rep.self_v_ok}};
    if (rep.ok && alpha_L > 0) {
      AlphaFit fit = l2_alpha_fit(u, v, alpha_L);
      res["alpha_fit"] = json{{"alpha", fit.alpha},
                              {"witness", format_word(fit.witness)},
                              {"checked", fit.checked}};
    }
  }
  if (!gamma0_text.empty()) {
    ReducedWord g0 = parse_word(gamma0_text, k), h = parse_word(h_text, k);
    std::optional<int> n = ping_pong_search(g0, h, n_max);
    res["search"] = n ? json{{"found", true}, {"N", *n}} : json{{"found", false}};
  }
  if (res.empty())
    throw std::invalid_argument("pingpong: provide --u/--v and/or --gamma0/--h");
  out.emit("pingpong", config, res);
  return kOk;
}

int cmd_canary(const Output& out, int k, std::int64_t M, int depth) {
  json config{{"k", k}, {"M", M}, {"depth", depth}};
  CanaryCensus census = canary_census(k, M, depth);
  json res{{"k", census.k},
           {"M", census.M},
           {"counts", census.counts},
           {"classes_seen", census.classes_seen}};
  std::vector<std::vector<std::string>> csv{{"depth", "bounded_classes"}};
  for (std::size_t d = 0; d < census.counts.size(); ++d)
    csv.push_back({std::to_string(d), std::to_string(census.counts[d])});
  out.emit("canary", config, res, csv);
  return kOk;
}

int cmd_rtree(const Output& out, int k, const std::string& iso_text,
              const std::string& iso2_text, int radius) {
  json config{{"k", k}, {"iso", iso_text}, {"iso2", iso2_text}, {"radius", radius}};
  TreeIsometry f = parse_tree_isometry(iso_text, k);
  TreeClassification cls = classify_tree_isometry(f);
  json res;
  bool conclusive = true;
  res["iso"] = json{
      {"literal", format_tree_isometry(f)},
      {"kind", cls.kind == TreeIsomKind::elliptic ? "elliptic" : "hyperbolic"},
      {"translation_length", to_string(cls.translation_length)},
      {"witness", format_tree_point(cls.witness)}};
  CharacteristicSet cs = characteristic_set(f, radius);
  res["iso"]["characteristic_set_size"] = cs.points.size();
  if (!iso2_text.empty()) {
    TreeIsometry g = parse_tree_isometry(iso2_text, k);
    TreeClassification cls2 = classify_tree_isometry(g);
    res["iso2"] = json{
        {"literal", format_tree_isometry(g)},
        {"kind", cls2.kind == TreeIsomKind::elliptic ? "elliptic" : "hyperbolic"},
        {"translation_length", to_string(cls2.translation_length)}};
    if (cls.kind == TreeIsomKind::elliptic && cls2.kind == TreeIsomKind::elliptic) {
      EllipticProductResult ep = elliptic_product_check(f, g, radius);
      res["elliptic_product"] = json{{"l_T_product", to_string(ep.lhs)},
                                     {"two_d_C", to_string(ep.rhs)},
                                     {"conclusive", ep.conclusive},
                                     {"equal", ep.lhs == ep.rhs}};
      conclusive = conclusive && ep.conclusive;
    }
    if (cls.kind == TreeIsomKind::hyperbolic && cls2.kind == TreeIsomKind::elliptic) {
      CommutatorOverlapResult he = lemma_he_check(f, g, radius);
      res["commutator_overlap"] = json{{"commutator_length", to_string(he.commutator_length)},
                                       {"overlap_length", to_string(he.overlap_length)},
                                       {"overlap_nonempty", he.overlap_nonempty},
                                       {"hypothesis_holds", he.hypothesis_holds},
                                       {"conclusive", he.conclusive}};
      conclusive = conclusive && he.conclusive;
    }
  }
  res["conclusive"] = conclusive;
  out.emit("rtree", config, res);
  return conclusive ? kOk : kInconclusive;
}

int cmd_limits(const Output& out, int k, const std::string& phi_text, int n_max,
               const std::string& probes_text) {
  json config{{"k", k}, {"phi", phi_text}, {"n", n_max}, {"probes", probes_text}};
  FreeAutomorphism phi = parse_automorphism(phi_text, k);
  std::vector<ReducedWord> probes;
  std::stringstream ss(probes_text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) probes.push_back(parse_word(tok, k));
  if (probes.empty())
    for (int i = 1; i <= k; ++i) probes.push_back(single_letter(i, k));
  RescaledTable table = rescaled_lengths(phi, n_max, probes);
  json res;
  res["lambdas"] = table.lambdas;
  json rows = json::array();
  std::vector<std::vector<std::string>> csv{{"probe", "n", "l_S", "ratio"}};
  for (const RescaledRow& row : table.rows) {
    rows.push_back(json{{"probe", format_word(row.probe)},
                        {"lengths", row.lengths},
                        {"ratios", row.ratios},
                        {"cauchy_tail_width", row.cauchy_tail_width}});
    for (std::size_t i = 0; i < row.ratios.size(); ++i)
      csv.push_back({format_word(row.probe), std::to_string(i + 1),
                     std::to_string(row.lengths[i]), std::to_string(row.ratios[i])});
  }
  res["rows"] = rows;
  out.emit("limits", config, res, csv);
  return kOk;
}

int cmd_discreteness(const Output& out, int k, const std::string& rep_spec, int L, double eps,
                     double theta) {
  json config{{"k", k}, {"rep", rep_spec}, {"L", L}, {"epsilon", eps}, {"theta", theta}};
  Representation rho = load_representation(rep_spec, k);
  DiscretenessReport rep = discreteness_experiment(rho, L, eps, theta);
  json res;
  res["verdict"] = rep.violation_found ? "violation" : "no-violation-found";
  if (rep.witness) {
    res["witness"] = format_word(*rep.witness);
    res["witness_l_S"] = rep.witness_ls;
    res["witness_displacement"] = rep.witness_displacement;
  }
  res["min_jorgensen"] = rep.min_jorgensen;
  res["searched"] = rep.searched;
  out.emit("discreteness", config, res);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repstab: word metrics, automorphisms, R-tree identities, and "
               "stability certificates for representations of free groups"};
  app.require_subcommand(1);
  // The pingpong subcommand takes --h; keep help on --help only.
  app.set_help_flag("--help", "Print this help message and exit");

  Output out;
  int k = 2;
  std::size_t cap = 0;
  std::uint64_t seed = 1;
  app.add_option("--out", out.out_path, "Write the JSON report to this file (default stdout)");
  app.add_option("--csv", out.csv_path, "Write a flat per-element CSV companion");
  app.add_flag("--timing", out.timing, "Include wall-clock timing in the report");
  app.add_option("--k", k, "Rank of the free group")->check(CLI::Range(1, 26));
  app.add_option("--cap", cap, "Override the global enumeration cap");
  app.add_option("--seed", seed, "Seed for sampled computations");

  std::string w_text, v_text;
  int ball_radius = -1;
  auto* words = app.add_subcommand("words", "Reduce and measure words");
  words->add_option("--w", w_text, "Word literal, e.g. abAB")->required();
  words->add_option("--v", v_text, "Second word for distances and Gromov products");
  words->add_option("--ball", ball_radius, "Also report the ball size at this radius");

  std::string phi_text;
  auto* auts = app.add_subcommand("auts", "Analyze an automorphism");
  auts->add_option("--phi", phi_text, "Literal 'a->ab; b->a' or 'W[0,3]'")->required();

  std::string family_label = "b_set";
  int fam_L = 2, depth = 2;
  auto* families = app.add_subcommand("families", "Build a test family");
  families->add_option("--family", family_label, "b_set|commutators|w_set|primitive_sample|ball");
  families->add_option("--L", fam_L, "Length parameter for commutators/ball");
  families->add_option("--depth", depth, "Depth for primitive_sample");

  std::string rep_spec = "schottky";
  int cert_L = 20, cert_M = 10;
  auto* certify = app.add_subcommand("certify", "Stability certificate for a representation");
  certify->add_option("--rep", rep_spec, "Representation file or builtin name");
  certify->add_option("--family", family_label, "Test family label");
  certify->add_option("--family-L", fam_L, "Family length parameter");
  certify->add_option("--depth", depth, "Family depth parameter");
  certify->add_option("--L", cert_L, "Axis parameter range [-L, L]");
  certify->add_option("--M", cert_M, "Local window width");

  auto* displace = app.add_subcommand("displace", "(J,B) well-displacing fit");
  displace->add_option("--rep", rep_spec, "Representation file or builtin name");
  displace->add_option("--family", family_label, "Test family label");
  displace->add_option("--family-L", fam_L, "Family length parameter");
  displace->add_option("--depth", depth, "Family depth parameter");

  std::string u_text, pp_v_text, gamma0_text, h_text;
  int n_max = 10, alpha_L = 0;
  auto* pingpong = app.add_subcommand("pingpong", "Ping-pong checks and searches");
  pingpong->add_option("--u", u_text, "First word of the pair");
  pingpong->add_option("--v", pp_v_text, "Second word of the pair");
  pingpong->add_option("--gamma0", gamma0_text, "Base element for the power search");
  pingpong->add_option("--h", h_text, "Conjugator for the power search");
  pingpong->add_option("--nmax", n_max, "Power search bound");
  pingpong->add_option("--alpha-L", alpha_L, "Exhaustive alpha fit up to this radius");

  std::int64_t canary_M = 10;
  int canary_depth = 6;
  auto* canary = app.add_subcommand("canary", "Census of bounded outer classes");
  canary->add_option("--M", canary_M, "Length bound on B-set images");
  canary->add_option("--depth", canary_depth, "Composition depth");

  std::string iso_text, iso2_text;
  int radius = 6;
  auto* rtree = app.add_subcommand("rtree", "Classify tree isometries and check identities");
  rtree->add_option("--iso", iso_text, "Isometry literal 'g=ab; twist=(a->b,b->a)'")->required();
  rtree->add_option("--iso2", iso2_text, "Second isometry for pair identities");
  rtree->add_option("--radius", radius, "Truncation radius for characteristic sets");

  std::string probes_text;
  int limit_n = 10;
  auto* limits = app.add_subcommand("limits", "Rescaled translation-length limits");
  limits->add_option("--phi", phi_text, "Automorphism literal")->required();
  limits->add_option("--n", limit_n, "Largest power");
  limits->add_option("--probes", probes_text, "Comma-separated probe words");

  int disc_L = 10;
  double disc_eps = 1e-3, disc_theta = 8.0;
  auto* discreteness = app.add_subcommand("discreteness", "Search for discreteness violations");
  discreteness->add_option("--rep", rep_spec, "Representation file or builtin name");
  discreteness->add_option("--L", disc_L, "Search bound on l_S");
  discreteness->add_option("--eps", disc_eps, "Displacement threshold");
  discreteness->add_option("--theta", disc_theta, "Minimal l_S for a witness");

  // Let global flags (--k, --out, ...) appear after the subcommand name too.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (cap > 0) set_global_cap(cap);
    if (words->parsed()) return cmd_words(out, k, w_text, v_text, ball_radius);
    if (auts->parsed()) return cmd_auts(out, k, phi_text);
    if (families->parsed()) return cmd_families(out, k, family_label, fam_L, depth);
    if (certify->parsed())
      return cmd_certify(out, k, rep_spec, family_label, fam_L, depth, cert_L, cert_M);
    if (displace->parsed()) return cmd_displace(out, k, rep_spec, family_label, fam_L, depth);
    if (pingpong->parsed())
      return cmd_pingpong(out, k, u_text, pp_v_text, gamma0_text, h_text, n_max, alpha_L);
    if (canary->parsed()) return cmd_canary(out, k, canary_M, canary_depth);
    if (rtree->parsed()) return cmd_rtree(out, k, iso_text, iso2_text, radius);
    if (limits->parsed()) return cmd_limits(out, k, phi_text, limit_n, probes_text);
    if (discreteness->parsed())
      return cmd_discreteness(out, k, rep_spec, disc_L, disc_eps, disc_theta);
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  }
  return kInvalidConfig;
}
