#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "repstab/tree.hpp"

using namespace repstab;

namespace {

ReducedWord W(const std::string& s, int k = 2) { return parse_word(s, k); }

SignedPerm swap_ab() { return SignedPerm{{2, 1}}; }

TreeIsometry iso(const std::string& g, SignedPerm p) {
  return TreeIsometry{W(g), std::move(p)};
}

// Independent translation-length oracle: min displacement over all tree
// points in a ball (valid whenever the characteristic set meets the ball).
HalfInt brute_force_lt(const TreeIsometry& f, int radius) {
  HalfInt best = tree_distance(vertex_point(identity_word(f.rank())),
                               f.apply(vertex_point(identity_word(f.rank()))));
  for (const TreePoint& p : enumerate_tree_points(f.rank(), radius))
    best = std::min(best, tree_distance(p, f.apply(p)));
  return best;
}

}  // namespace

TEST_CASE("tree distances are exact half-integers") {
  TreePoint e = vertex_point(identity_word(2));
  TreePoint a = vertex_point(W("a"));
  TreePoint m = edge_midpoint(identity_word(2), W("a"));
  CHECK(tree_distance(e, a) == HalfInt::whole(1));
  CHECK(tree_distance(e, m) == HalfInt(1));  // 1/2
  CHECK(tree_distance(m, a) == HalfInt(1));
  CHECK(tree_distance(m, m) == HalfInt(0));
  CHECK(tree_distance(edge_midpoint(identity_word(2), W("a")),
                      edge_midpoint(identity_word(2), W("b"))) == HalfInt::whole(1));
  // Canonical orientation: both endpoint orders name the same midpoint.
  CHECK(edge_midpoint(W("a"), identity_word(2)) == m);
}

TEST_CASE("segment midpoints") {
  TreePoint m = segment_midpoint(identity_word(2), W("ab"));
  CHECK(tree_distance(m, vertex_point(identity_word(2))) == HalfInt::whole(1));
  CHECK(tree_distance(m, vertex_point(W("ab"))) == HalfInt::whole(1));
  TreePoint h = segment_midpoint(identity_word(2), W("a"));
  CHECK(h.edge != 0);
  CHECK(tree_distance(h, vertex_point(identity_word(2))) == HalfInt(1));
}

TEST_CASE("isometries act isometrically") {
  std::vector<TreePoint> pts = enumerate_tree_points(2, 2);
  std::vector<TreeIsometry> sample{
      left_multiplication(W("ab")), iso("1", swap_ab()), iso("a", swap_ab()),
      iso("bA", SignedPerm{{-1, 2}}), iso("abA", SignedPerm{{-2, -1}})};
  for (const TreeIsometry& f : sample)
    for (const TreePoint& p : pts)
      for (const TreePoint& q : pts)
        CHECK(tree_distance(f.apply(p), f.apply(q)) == tree_distance(p, q));
}

TEST_CASE("composition law and inverses") {
  std::mt19937_64 rng(5);
  auto perms = all_signed_perms(2);
  CHECK(perms.size() == 8);
  std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
  std::vector<ReducedWord> ball = enumerate_ball(2, 3);
  std::uniform_int_distribution<std::size_t> pw(0, ball.size() - 1);
  for (int it = 0; it < 100; ++it) {
    TreeIsometry f{ball[pw(rng)], perms[pick(rng)]};
    TreeIsometry h{ball[pw(rng)], perms[pick(rng)]};
    TreeIsometry fh = compose(f, h);
    for (const ReducedWord& x : enumerate_ball(2, 2)) {
      CHECK(fh.apply(x) == f.apply(h.apply(x)));
      CHECK(inverse(f).apply(f.apply(x)) == x);
    }
  }
}

TEST_CASE("classification by the midpoint method") {
  TreeClassification c = classify_tree_isometry(left_multiplication(W("ab")));
  CHECK(c.kind == TreeIsomKind::hyperbolic);
  CHECK(c.translation_length == HalfInt::whole(2));

  c = classify_tree_isometry(iso("1", swap_ab()));
  CHECK(c.kind == TreeIsomKind::elliptic);
  CHECK(c.translation_length == HalfInt::whole(0));

  // (a, swap): the square is left multiplication by ab, so l_T = 1.
  TreeIsometry f = iso("a", swap_ab());
  c = classify_tree_isometry(f);
  CHECK(c.kind == TreeIsomKind::hyperbolic);
  CHECK(c.translation_length == HalfInt::whole(1));
  // Oracle: d(e, f^n(e)) / n tends to l_T; exact equality at large even n.
  TreeIsometry fn = f;
  for (int i = 1; i < 8; ++i) fn = compose(fn, f);
  CHECK(tree_distance(vertex_point(identity_word(2)),
                      fn.apply(vertex_point(identity_word(2)))) == HalfInt::whole(8));
}

TEST_CASE("l_T of powers is linear") {
  std::vector<TreeIsometry> sample{
      left_multiplication(W("ab")), left_multiplication(W("abA")), iso("a", swap_ab()),
      iso("ab", SignedPerm{{-1, 2}}), iso("ba", swap_ab())};
  for (const TreeIsometry& f : sample) {
    HalfInt l = classify_tree_isometry(f).translation_length;
    TreeIsometry p = f;
    for (int n = 2; n <= 4; ++n) {
      p = compose(p, f);
      CHECK(classify_tree_isometry(p).translation_length == n * l);
    }
  }
}

TEST_CASE("midpoint method matches brute force on the radius-6 ball") {
  std::vector<SignedPerm> perms = all_signed_perms(2);
  for (const ReducedWord& g : enumerate_ball(2, 2))
    for (const SignedPerm& s : perms) {
      TreeIsometry f{g, s};
      CHECK(classify_tree_isometry(f).translation_length == brute_force_lt(f, 6));
    }
}

TEST_CASE("characteristic sets") {
  CharacteristicSet ax = characteristic_set(left_multiplication(W("ab")), 4);
  CHECK(ax.kind == TreeIsomKind::hyperbolic);
  for (const char* v : {"1", "a", "ab", "aba", "abab", "BA", "B"})
    CHECK(ax.contains(vertex_point(W(v))));
  CHECK(!ax.contains(vertex_point(W("b"))));

  CharacteristicSet fx = characteristic_set(iso("1", swap_ab()), 3);
  REQUIRE(fx.points.size() == 1);  // only e is swap-invariant within radius 3
  CHECK(fx.points[0] == vertex_point(identity_word(2)));

  // Exhaustive-scan oracle for the fixed set.
  for (const TreePoint& p : enumerate_tree_points(2, 3)) {
    bool fixed = iso("1", swap_ab()).apply(p) == p;
    CHECK(fixed == fx.contains(p));
  }
}

TEST_CASE("characteristic set conjugation: C_{hfh^-1} = h(C_f)") {
  std::vector<TreeIsometry> sample{left_multiplication(W("ab")), iso("1", swap_ab()),
                                   iso("a", swap_ab()), iso("bA", SignedPerm{{-1, 2}})};
  for (const TreeIsometry& f : sample)
    for (const char* hw : {"a", "b", "ab", "Ba"}) {
      TreeIsometry h = left_multiplication(W(hw));
      TreeIsometry conj = compose(compose(h, f), inverse(h));
      int r = 6;
      int margin = static_cast<int>(W(hw).length());
      CharacteristicSet cf = characteristic_set(f, r);
      CharacteristicSet cc = characteristic_set(conj, r);
      for (const TreePoint& p : cf.points)
        if (tree_distance(p, vertex_point(identity_word(2))) <= HalfInt::whole(r - margin))
          CHECK(cc.contains(h.apply(p)));
      for (const TreePoint& q : cc.points)
        if (tree_distance(q, vertex_point(identity_word(2))) <= HalfInt::whole(r - margin))
          CHECK(cf.contains(inverse(h).apply(q)));
    }
}

TEST_CASE("characteristic set of the inverse") {
  std::vector<TreeIsometry> sample{left_multiplication(W("ab")), iso("a", swap_ab()),
                                   iso("1", SignedPerm{{-1, -2}})};
  for (const TreeIsometry& f : sample) {
    CharacteristicSet cf = characteristic_set(f, 5);
    CharacteristicSet ci = characteristic_set(inverse(f), 5);
    CHECK(cf.points == ci.points);
  }
}

TEST_CASE("Helly property of characteristic sets") {
  CharacteristicSet a = characteristic_set(left_multiplication(W("ab")), 5);
  CharacteristicSet b = characteristic_set(left_multiplication(W("ba")), 5);
  CHECK(a.points != b.points);
  CharacteristicSet c = characteristic_set(iso("1", swap_ab()), 5);
  HellyResult h = helly_check(a, b, c);
  CHECK(h.pairwise_ok);
  CHECK(h.triple_nonempty);

  // Disjoint pair: precondition violation reported.
  CharacteristicSet far1 = characteristic_set(iso("1", swap_ab()), 5);
  CharacteristicSet far2 =
      characteristic_set(compose(compose(left_multiplication(W("abab")), iso("1", swap_ab())),
                                 inverse(left_multiplication(W("abab")))),
                         5);
  HellyResult h2 = helly_check(far1, far1, far2);
  CHECK(!h2.pairwise_ok);
}

TEST_CASE("elliptic product identity") {
  TreeIsometry g = iso("1", swap_ab());
  TreeIsometry h = compose(compose(left_multiplication(W("a")), g),
                           inverse(left_multiplication(W("a"))));
  CHECK(h.translation == W("aB"));
  EllipticProductResult r = elliptic_product_check(g, h, 6);
  CHECK(r.conclusive);
  CHECK(r.lhs == HalfInt::whole(2));
  CHECK(r.rhs == HalfInt::whole(2));

  EllipticProductResult same = elliptic_product_check(g, g, 6);
  CHECK(same.lhs == HalfInt::whole(0));
  CHECK(same.rhs == HalfInt::whole(0));

  CHECK_THROWS_AS(elliptic_product_check(left_multiplication(W("a")), g, 6),
                  std::invalid_argument);
}

TEST_CASE("trivial action detection") {
  TreeIsometry id = identity_isometry(2);
  TrivialActionResult r = trivial_action_check({id, id}, 4);
  CHECK(r.trivial);
  REQUIRE(r.fixed_point.has_value());
  CHECK(*r.fixed_point == vertex_point(identity_word(2)));

  r = trivial_action_check({left_multiplication(W("a")), left_multiplication(W("b"))}, 4);
  CHECK(!r.trivial);
  CHECK(r.hyperbolic_witness.has_value());

  // Two distinct elliptic twists fixing e.
  r = trivial_action_check({iso("1", swap_ab()), iso("1", SignedPerm{{-1, -2}})}, 4);
  CHECK(r.trivial);
  REQUIRE(r.fixed_point.has_value());
  CHECK(*r.fixed_point == vertex_point(identity_word(2)));
}

TEST_CASE("hyperbolic-elliptic commutator dichotomy") {
  TreeIsometry g = left_multiplication(W("ab"));
  CommutatorOverlapResult r = lemma_he_check(g, identity_isometry(2), 6);
  CHECK(r.commutator_length == HalfInt::whole(0));
  CHECK(r.overlap_nonempty);
  CHECK(r.overlap_length >= HalfInt::whole(2));
  CHECK(r.hypothesis_holds);

  r = lemma_he_check(g, iso("1", swap_ab()), 6);
  CHECK(r.hypothesis_holds);

  // Small sweep: hyperbolic g, every elliptic twist-isometry h.
  std::vector<SignedPerm> perms = all_signed_perms(2);
  for (const ReducedWord& gw : enumerate_ball(2, 2)) {
    for (const SignedPerm& s : perms) {
      TreeIsometry hh{gw, s};
      if (classify_tree_isometry(hh).kind != TreeIsomKind::elliptic) continue;
      CommutatorOverlapResult rr = lemma_he_check(g, hh, 7);
      if (rr.conclusive) CHECK(rr.hypothesis_holds);
    }
  }
}

TEST_CASE("isometry literals") {
  TreeIsometry f = parse_tree_isometry("g=ab; twist=(a->b,b->a)", 2);
  CHECK(f.translation == W("ab"));
  CHECK(f.twist == swap_ab());
  CHECK(parse_tree_isometry(format_tree_isometry(f), 2) == f);

  TreeIsometry plain = parse_tree_isometry("g=aB", 2);
  CHECK(plain.twist.is_identity());
  TreeIsometry inv = parse_tree_isometry("g=1; twist=(a->B,b->a)", 2);
  CHECK(inv.twist.apply(1) == -2);
  CHECK_THROWS_AS(parse_tree_isometry("g=ab; twist=(a->a,b->a)", 2), std::invalid_argument);
}
