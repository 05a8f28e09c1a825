// Acceptance harness: one pass/fail line per criterion, exit 0 only if all
// criteria hold. Each criterion re-derives its expected values from an
// independent oracle (brute-force search, closed-form formula, or a second
// evaluation path) rather than trusting the library under test.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "repstab/families.hpp"
#include "repstab/mobius.hpp"
#include "repstab/stability.hpp"
#include "repstab/tree.hpp"
#include "repstab/word.hpp"

using namespace repstab;

namespace {

int g_failed_criteria = 0;

struct Criterion {
  std::string title;
  std::vector<std::string> failures;

  explicit Criterion(std::string t) : title(std::move(t)) {}

  void require(bool cond, const std::string& what) {
    if (!cond && failures.size() < 8) failures.push_back(what);
    if (!cond && failures.size() == 8) failures.push_back("(further failures suppressed)");
  }

  void finish() const {
    if (failures.empty()) {
      std::cout << "[PASS] " << title << "\n";
    } else {
      ++g_failed_criteria;
      std::cout << "[FAIL] " << title << "\n";
      for (const std::string& f : failures) std::cout << "       - " << f << "\n";
    }
    std::cout.flush();
  }
};

ReducedWord W(const std::string& s, int k = 2) { return parse_word(s, k); }

// Independent conjugacy-length oracle: breadth-first search over conjugations
// by single generators, pruned at |w| + 2 (a length-reducing conjugation
// sequence never needs to pass higher than that).
std::int64_t bfs_conjugacy_length(const ReducedWord& w) {
  std::vector<ReducedWord> gens;
  for (Letter l : {1, -1, 2, -2}) gens.push_back(single_letter(l, 2));
  std::unordered_set<ReducedWord, WordHash> seen{w};
  std::vector<ReducedWord> frontier{w};
  std::int64_t best = static_cast<std::int64_t>(w.length());
  std::int64_t cap_len = best + 2;
  while (!frontier.empty()) {
    std::vector<ReducedWord> next;
    for (const ReducedWord& u : frontier)
      for (const ReducedWord& g : gens) {
        ReducedWord v = conjugate(g, u);
        if (static_cast<std::int64_t>(v.length()) > cap_len) continue;
        if (!seen.insert(v).second) continue;
        next.push_back(v);
        best = std::min(best, static_cast<std::int64_t>(v.length()));
      }
    frontier = std::move(next);
  }
  return best;
}

Mobius random_loxodromic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.2, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 3.0);
  std::uniform_real_distribution<double> ent(-1.5, 1.5);
  Complex lam = std::exp(Complex(len(rng) / 2.0, ang(rng)));
  Mobius diag = make_mobius(lam, Complex(0.0), Complex(0.0), 1.0 / lam);
  while (true) {
    Complex a(ent(rng), ent(rng)), b(ent(rng), ent(rng));
    Complex c(ent(rng), ent(rng)), d(ent(rng), ent(rng));
    if (std::abs(a * d - b * c) <= 0.2) continue;
    Mobius h = make_mobius(a, b, c, d);
    return mobius_mul(mobius_mul(h, diag), mobius_inverse(h));
  }
}

// ---------------------------------------------------------------------------

void criterion_1() {
  Criterion c("criterion 1: exact translation length, exhaustive |w| <= 10");
  std::size_t checked = 0;
  for (const ReducedWord& w : enumerate_ball(2, 10, 1u << 21)) {
    std::int64_t ls = conjugacy_length(w);
    std::int64_t oracle = bfs_conjugacy_length(w);
    if (ls != oracle)
      c.require(false, "l_S mismatch at " + format_word(w) + ": " + std::to_string(ls) +
                           " vs oracle " + std::to_string(oracle));
    if (!w.is_identity()) {
      TreeClassification cls = classify_tree_isometry(left_multiplication(w));
      if (!(cls.kind == TreeIsomKind::hyperbolic || ls == 0) ||
          cls.translation_length != HalfInt::whole(oracle))
        c.require(false, "tree l_T mismatch at " + format_word(w));
    }
    ++checked;
  }
  c.require(checked == 118097, "expected 118097 words, saw " + std::to_string(checked));
  c.finish();
}

void criterion_2() {
  Criterion c("criterion 2: stable norm matches the eigenvalue formula (100 seeds)");
  H3Point j{Complex(0.0), 1.0};
  double delta_hat = delta_estimate(2000, 7);
  c.require(delta_hat >= 0.0, "negative delta estimate");
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 100; ++it) {
    Mobius g = random_loxodromic(rng);
    double expect = classify(g).translation_length;  // 2 log |lambda_max|
    StableNormReport rep = stable_norm(g, j, 1 << 20);
    if (std::abs(rep.value - expect) > 1e-6)
      c.require(false, "sample " + std::to_string(it) + ": |" + std::to_string(rep.value) +
                           " - " + std::to_string(expect) + "| > 1e-6");
    if (!translation_vs_stable_check(g, delta_hat).ok)
      c.require(false, "translation/stable comparison failed at sample " + std::to_string(it));
  }
  c.finish();
}

void criterion_3() {
  Criterion c("criterion 3: Schottky certificate on ball(3), L=20, M=10");
  Representation sch = schottky_representation();
  StabilityCertificate cert = certify_stability(sch, build_ball_family(2, 3), 20, 10);
  c.require(cert.passed, "certificate FAILED; witness: " +
                             (cert.failure_witness ? format_word(*cert.failure_witness)
                                                   : std::string("none")));
  c.require(cert.K >= 1.0 && cert.K < kQuasiKHi / 2,
            "fit constant K out of range: " + std::to_string(cert.K));
  for (const ElementDiagnostic& d : cert.per_element)
    c.require(d.local_ok, "local window check failed on " + format_word(d.member));

  DisplacementFit fit = fit_well_displacing(sch, build_commutators(2, 2));
  c.require(!fit.failed, "displacement fit found no finite (J, B)");
  c.require(fit.J >= 1.0 && fit.J < kQuasiKHi / 2, "J out of range: " + std::to_string(fit.J));
  c.finish();
}

void criterion_4() {
  Criterion c("criterion 4: discreteness search finds a short-displacement witness");
  Representation rot = rotation_loxodromic_representation();
  DiscretenessReport r = discreteness_experiment(rot, 10, 1e-3, 8.0);
  c.require(r.violation_found, "no witness found for the rotation fixture");
  if (r.witness) {
    c.require(r.witness_ls >= 8, "witness too short: l_S = " + std::to_string(r.witness_ls));
    c.require(r.witness_displacement <= 1e-3,
              "witness displacement " + std::to_string(r.witness_displacement) + " > 1e-3");
    double recomputed = image_translation_length(rot, *r.witness);
    c.require(std::abs(recomputed - r.witness_displacement) <= 1e-12,
              "reported displacement does not match re-evaluation");
  }
  Representation sch = schottky_representation();
  DiscretenessReport s = discreteness_experiment(sch, 10, 1e-3, 8.0);
  c.require(!s.violation_found, "false positive on the Schottky fixture");
  c.require(s.min_jorgensen >= 1.0, "Schottky generators too close to the Jorgensen bound");
  c.finish();
}

void criterion_5() {
  Criterion c("criterion 5: ping-pong inequalities, exhaustive |u|,|v| <= 4");
  ReducedWord e = identity_word(2);
  auto gp = [&](const ReducedWord& x, const ReducedWord& y) {
    return (static_cast<double>(x.length()) + static_cast<double>(y.length()) -
            static_cast<double>(word_distance(x, y))) /
           2.0;
  };
  std::vector<ReducedWord> ball = enumerate_ball(2, 4);
  for (const ReducedWord& u : ball) {
    if (u.is_identity()) continue;
    for (const ReducedWord& v : ball) {
      if (v.is_identity()) continue;
      double mn = std::min<double>(u.length(), v.length());
      bool cross = true;
      for (const ReducedWord& x : {u, inverse(u)})
        for (const ReducedWord& y : {v, inverse(v)})
          cross = cross && gp(x, y) <= mn / 2.0;
      bool expect = cross && gp(u, inverse(u)) <= u.length() / 2.0 &&
                    gp(v, inverse(v)) <= v.length() / 2.0;
      if (ping_pong_check(u, v).ok != expect)
        c.require(false, "disagreement at u=" + format_word(u) + ", v=" + format_word(v));
    }
  }

  AlphaFit fit = l2_alpha_fit(W("aa"), W("bb"), 8);
  c.require(fit.checked == enumerate_ball(2, 8).size(), "alpha fit did not cover the ball");
  // Re-verify the fitted inequality exhaustively with direct computations.
  for (const ReducedWord& g : enumerate_ball(2, 8)) {
    std::int64_t rhs = 3 * std::max({bfs_conjugacy_length(g),
                                     bfs_conjugacy_length(concat(W("aa"), g)),
                                     bfs_conjugacy_length(concat(W("bb"), g))}) +
                       fit.alpha;
    if (static_cast<std::int64_t>(g.length()) > rhs) {
      c.require(false, "inequality violated at gamma=" + format_word(g));
      break;
    }
  }
  c.finish();
}

void criterion_6() {
  Criterion c("criterion 6: bounded outer-class census stabilizes (depth 10 vs 12)");
  // The full classical move set sweeps the bounded region of Out(F_2) with
  // graph radius exactly 10 for M = 10, so the census count saturates at
  // depth 10 and a deeper run must report the identical total. The value 744
  // is frozen from an independent oracle: a sweep expanding through every
  // class with total B-set length <= 4M (the region peak reduction guarantees
  // contains all paths between bounded classes) finds the same 744 classes
  // and no more through depth 16.
  CanaryCensus c10 = canary_census(2, 10, 10);
  CanaryCensus c12 = canary_census(2, 10, 12);
  c.require(c10.counts.size() == 11 && c12.counts.size() == 13, "census depth mismatch");
  if (!c10.counts.empty() && !c12.counts.empty()) {
    c.require(c10.counts.back() == c12.counts.back(),
              "bounded-class count still growing: depth 10 -> " +
                  std::to_string(c10.counts.back()) + ", depth 12 -> " +
                  std::to_string(c12.counts.back()));
    c.require(c12.counts.back() == 744, "census total " +
                  std::to_string(c12.counts.back()) + " != oracle value 744");
    // The deeper census is flat past saturation.
    for (std::size_t d = 10; d < c12.counts.size(); ++d)
      c.require(c12.counts[d] == 744, "count not stable at depth " + std::to_string(d));
    // Prefixes agree: the deeper census revisits the same shallow classes.
    for (std::size_t d = 0; d < c10.counts.size(); ++d)
      c.require(c10.counts[d] == c12.counts[d],
                "count mismatch at depth " + std::to_string(d));
    // Counts are non-decreasing in depth.
    for (std::size_t d = 1; d < c12.counts.size(); ++d)
      c.require(c12.counts[d] >= c12.counts[d - 1],
                "count decreased at depth " + std::to_string(d));
  }
  c.require(c12.classes_seen >= c12.counts.back(), "bounded classes exceed classes seen");
  c.finish();
}

void criterion_7() {
  Criterion c("criterion 7: tree-isometry identities, exhaustive |g| <= 3 x all twists");
  std::vector<TreeIsometry> isoms;
  for (const ReducedWord& g : enumerate_ball(2, 3))
    for (const SignedPerm& p : all_signed_perms(2)) isoms.push_back(TreeIsometry{g, p});

  const int radius = 5;
  std::vector<TreeClassification> cls;
  std::vector<CharacteristicSet> sets;
  cls.reserve(isoms.size());
  sets.reserve(isoms.size());
  for (const TreeIsometry& f : isoms) {
    cls.push_back(classify_tree_isometry(f));
    sets.push_back(characteristic_set(f, radius));
  }

  // Product identity for elliptic pairs: l_T(fg) = 2 d(C_f, C_g). Both
  // truncated sets are nonempty (fixed sets sit within |g|/2 of the origin),
  // and in a tree the closest pair between two subtrees lies on the segment
  // between any two of their points, so the truncated minimum is exact.
  std::size_t elliptic_pairs = 0;
  for (std::size_t i = 0; i < isoms.size(); ++i) {
    if (cls[i].kind != TreeIsomKind::elliptic) continue;
    for (std::size_t j = 0; j < isoms.size(); ++j) {
      if (cls[j].kind != TreeIsomKind::elliptic) continue;
      if (sets[i].points.empty() || sets[j].points.empty()) {
        c.require(false, "empty truncated fixed set");
        continue;
      }
      HalfInt best = tree_distance(sets[i].points.front(), sets[j].points.front());
      for (const TreePoint& p : sets[i].points) {
        for (const TreePoint& q : sets[j].points) {
          HalfInt d = tree_distance(p, q);
          if (d < best) best = d;
        }
        if (best == HalfInt::whole(0)) break;
      }
      HalfInt lhs = classify_tree_isometry(compose(isoms[i], isoms[j])).translation_length;
      if (lhs != 2 * best) {
        c.require(false, "product identity fails for " + format_tree_isometry(isoms[i]) +
                             " and " + format_tree_isometry(isoms[j]));
      }
      ++elliptic_pairs;
    }
  }
  c.require(elliptic_pairs > 1000, "too few elliptic pairs exercised");

  // Conjugation identity C_{hfh^-1} = h(C_f), compared inside the margin left
  // by the conjugator's displacement of the truncation ball.
  std::size_t conj_checks = 0;
  for (std::size_t i = 0; i < isoms.size(); ++i) {
    for (const TreeIsometry& h : isoms) {
      if (h.translation.length() > 1) continue;
      TreeIsometry conj = compose(compose(h, isoms[i]), inverse(h));
      CharacteristicSet cc = characteristic_set(conj, radius);
      int margin = radius - static_cast<int>(h.translation.length());
      for (const TreePoint& p : sets[i].points) {
        TreePoint hp = h.apply(p);
        if (tree_distance(vertex_point(identity_word(2)), hp) > HalfInt::whole(margin))
          continue;
        if (!cc.contains(hp)) {
          c.require(false, "conjugation identity fails (forward) for " +
                               format_tree_isometry(isoms[i]));
          break;
        }
      }
      TreeIsometry hinv = inverse(h);
      for (const TreePoint& q : cc.points) {
        TreePoint hq = hinv.apply(q);
        if (tree_distance(vertex_point(identity_word(2)), hq) > HalfInt::whole(margin))
          continue;
        if (!sets[i].contains(hq)) {
          c.require(false, "conjugation identity fails (backward) for " +
                               format_tree_isometry(isoms[i]));
          break;
        }
      }
      ++conj_checks;
    }
  }
  c.require(conj_checks > 10000, "too few conjugation checks");

  // Helly property on elliptic triples with short translation parts.
  std::vector<std::size_t> small_elliptic;
  for (std::size_t i = 0; i < isoms.size(); ++i)
    if (cls[i].kind == TreeIsomKind::elliptic && isoms[i].translation.length() <= 1)
      small_elliptic.push_back(i);
  std::size_t helly_conclusive = 0;
  for (std::size_t a = 0; a < small_elliptic.size(); ++a)
    for (std::size_t b = a; b < small_elliptic.size(); ++b)
      for (std::size_t d = b; d < small_elliptic.size(); ++d) {
        HellyResult h = helly_check(sets[small_elliptic[a]], sets[small_elliptic[b]],
                                    sets[small_elliptic[d]]);
        if (!h.conclusive || !h.pairwise_ok) continue;
        ++helly_conclusive;
        if (!h.triple_nonempty) c.require(false, "Helly failure on an elliptic triple");
      }
  c.require(helly_conclusive > 50, "too few conclusive Helly triples");

  // Commutator dichotomy for hyperbolic/elliptic pairs with |g| <= 2.
  std::size_t he_conclusive = 0;
  for (std::size_t i = 0; i < isoms.size(); ++i) {
    if (cls[i].kind != TreeIsomKind::hyperbolic || isoms[i].translation.length() > 2) continue;
    for (std::size_t j = 0; j < isoms.size(); ++j) {
      if (cls[j].kind != TreeIsomKind::elliptic || isoms[j].translation.length() > 2) continue;
      CommutatorOverlapResult r = lemma_he_check(isoms[i], isoms[j], 7);
      if (!r.conclusive) continue;
      ++he_conclusive;
      if (!r.hypothesis_holds)
        c.require(false, "dichotomy fails for " + format_tree_isometry(isoms[i]) + " and " +
                             format_tree_isometry(isoms[j]));
    }
  }
  c.require(he_conclusive > 500, "too few conclusive dichotomy pairs");
  c.finish();
}

void criterion_8() {
  Criterion c("criterion 8: rescaled limits of a->ab, b->a");
  FreeAutomorphism phi = parse_automorphism("a->ab; b->a; inv: a->b; b->Ba", 2);
  RescaledTable t = rescaled_lengths(phi, 15, {W("a"), W("b")});
  double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  double ratio = static_cast<double>(t.rows[0].lengths[14]) /
                 static_cast<double>(t.rows[1].lengths[14]);
  c.require(std::abs(ratio - golden) <= 1e-3,
            "length ratio " + std::to_string(ratio) + " not within 1e-3 of the golden ratio");
  // Independent oracle: the probe lengths satisfy the Fibonacci recurrence.
  for (int n = 2; n < 15; ++n)
    c.require(t.rows[0].lengths[n] == t.rows[0].lengths[n - 1] + t.rows[0].lengths[n - 2],
              "length recurrence breaks at n = " + std::to_string(n));

  FreeAutomorphism p = phi;
  std::int64_t prev = 0;
  for (int n = 1; n <= 12; ++n) {
    std::int64_t lam = lambda_of(p).lambda;
    if (n >= 2)
      c.require(lam > prev, "lambda not strictly increasing at n = " + std::to_string(n));
    prev = lam;
    if (n < 12) p = compose(p, phi);
  }

  for (const RescaledRow& row : t.rows)
    c.require(row.cauchy_tail_width <= 1e-2,
              "rescaled tail width " + std::to_string(row.cauchy_tail_width) + " for probe " +
                  format_word(row.probe));
  c.finish();
}

void criterion_9() {
  Criterion c("criterion 9: invariance of certificates");
  TestFamily b = build_b_set(2);
  TestFamily comm = build_commutators(2, 2);
  Representation sch = schottky_representation();
  Representation deg = degenerate_representation();
  StabilityCertificate base_s = certify_stability(sch, b, 6, 4);
  StabilityCertificate base_d = certify_stability(deg, comm, 6, 4);
  c.require(base_s.passed, "Schottky baseline does not pass");
  c.require(!base_d.passed, "degenerate baseline does not fail");

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ent(-1.5, 1.5);
  auto random_conj = [&]() {
    while (true) {
      Complex a(ent(rng), ent(rng)), bb(ent(rng), ent(rng));
      Complex cc(ent(rng), ent(rng)), d(ent(rng), ent(rng));
      if (std::abs(a * d - bb * cc) > 0.2) return make_mobius(a, bb, cc, d);
    }
  };
  for (int it = 0; it < 5; ++it) {
    Mobius h = random_conj();
    StabilityCertificate cs = certify_stability(conjugate_representation(sch, h), b, 6, 4);
    c.require(cs.passed == base_s.passed, "conjugation flips the Schottky verdict");
    c.require(std::abs(cs.K - base_s.K) <= 1e-6 && std::abs(cs.C - base_s.C) <= 1e-6,
              "conjugated fit drifts beyond 1e-6");
    StabilityCertificate cd = certify_stability(conjugate_representation(deg, h), comm, 6, 4);
    c.require(cd.passed == base_d.passed, "conjugation flips the degenerate verdict");
  }

  for (const FreeAutomorphism& phi : whitehead_generators(2)) {
    c.require(certify_stability(precompose(sch, phi), b, 6, 4).passed == base_s.passed,
              "precomposition flips the Schottky verdict");
    c.require(certify_stability(precompose(deg, phi), comm, 6, 4).passed == base_d.passed,
              "precomposition flips the degenerate verdict");
  }

  std::uniform_real_distribution<double> eps(-1e-3, 1e-3);
  for (int it = 0; it < 5; ++it) {
    std::vector<Mobius> images;
    for (const Mobius& g : sch.h3_images)
      images.push_back(make_mobius(g.a + Complex(eps(rng), eps(rng)),
                                   g.b + Complex(eps(rng), eps(rng)),
                                   g.c + Complex(eps(rng), eps(rng)),
                                   g.d + Complex(eps(rng), eps(rng))));
    StabilityCertificate p = certify_stability(make_h3_representation(images), b, 6, 4);
    c.require(p.passed, "1e-3 perturbation breaks the certificate");
    c.require(p.K <= 2.0 * base_s.K && p.C <= 2.0 * base_s.C + 1e-3,
              "perturbed constants drift beyond 2x");
  }
  c.finish();
}

std::string run_cli(const std::string& cli, const std::string& args, int* exit_code) {
  std::string cmd = cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion_10() {
  Criterion c("criterion 10: CLI determinism (byte-identical double runs)");
  const char* cli = std::getenv("REPSTAB_CLI");
  if (!cli) {
    c.require(false, "REPSTAB_CLI not set");
    c.finish();
    return;
  }
  const std::vector<std::string> commands = {
      "words --w abAB --v ba --ball 3",
      "auts --phi \"a->ab; b->a\"",
      "families --family w_set --k 3",
      "certify --rep schottky --family b_set --L 6 --M 4",
      "displace --rep schottky --family commutators --family-L 2",
      "pingpong --u aa --v bb --alpha-L 4 --gamma0 ab --h ba",
      "canary --M 3 --depth 3",
      "rtree --iso \"g=ab; twist=(a->b,b->a)\" --radius 5",
      "limits --phi \"a->ab; b->a\" --n 10 --probes a,b,abAB",
      "discreteness --rep rotation --L 10",
  };
  for (const std::string& args : commands) {
    int code1 = 0, code2 = 0;
    std::string out1 = run_cli(cli, args, &code1);
    std::string out2 = run_cli(cli, args, &code2);
    if (out1.empty()) c.require(false, "no output from: " + args);
    if (code1 != code2 || out1 != out2) c.require(false, "nondeterministic: " + args);
  }
  c.finish();
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failed_criteria == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << g_failed_criteria << " criteria failed\n";
  return 1;
}
