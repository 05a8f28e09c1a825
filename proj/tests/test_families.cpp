#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "repstab/families.hpp"

using namespace repstab;

namespace {

ReducedWord W(const std::string& s, int k = 2) { return parse_word(s, k); }

bool contains_class(const TestFamily& f, const ReducedWord& w) {
  ReducedWord key = conjugacy_key(w);
  for (const ReducedWord& m : f.members)
    if (conjugacy_key(m) == key) return true;
  return false;
}

}  // namespace

TEST_CASE("B set") {
  TestFamily b2 = build_b_set(2);
  REQUIRE(b2.members.size() == 4);
  std::set<std::string> got;
  for (const ReducedWord& m : b2.members) got.insert(format_word(m));
  CHECK(got == std::set<std::string>{"a", "b", "ab", "ba"});
  for (const ReducedWord& m : b2.members) CHECK(m.length() <= 2);

  CHECK(build_b_set(3).members.size() == 9);  // 3 + 3*2
  CHECK_THROWS_AS(build_b_set(1), std::invalid_argument);
}

TEST_CASE("commutator families") {
  TestFamily c = build_commutators(2, 2);
  CHECK(contains_class(c, W("abAB")));
  for (const ReducedWord& m : c.members) CHECK(!m.is_identity());

  // Exhaustive oracle: count distinct nontrivial commutator classes directly.
  std::unordered_set<ReducedWord, WordHash> classes;
  for (const ReducedWord& g : enumerate_ball(2, 2))
    for (const ReducedWord& h : enumerate_ball(2, 2)) {
      ReducedWord comm = concat(concat(g, h), concat(inverse(g), inverse(h)));
      if (!comm.is_identity()) classes.insert(conjugacy_key(comm));
    }
  CHECK(c.members.size() == classes.size());
}

TEST_CASE("W set") {
  TestFamily w3 = build_w_set(3);
  CHECK(contains_class(w3, parse_word("abAB", 3)));
  // [ab, [a,b]] lies in W_2.
  ReducedWord ab = parse_word("ab", 3);
  ReducedWord comm = parse_word("abAB", 3);
  ReducedWord w2 = concat(concat(ab, comm), concat(inverse(ab), inverse(comm)));
  CHECK(contains_class(w3, w2));
  CHECK(w3.notes.empty());
  CHECK(all_members_in_derived_subgroup(w3));

  TestFamily w2set = build_w_set(2);
  CHECK(!w2set.notes.empty());  // k = 2 warning
  CHECK(all_members_in_derived_subgroup(w2set));
}

TEST_CASE("abelianization") {
  CHECK(abelianization(W("abAB")) == std::vector<std::int64_t>{0, 0});
  CHECK(abelianization(W("aab")) == std::vector<std::int64_t>{2, 1});
  TestFamily b = build_b_set(2);
  CHECK(!all_members_in_derived_subgroup(b));
}

TEST_CASE("primitive samples") {
  TestFamily p0 = build_primitive_sample(2, 0);
  CHECK(p0.members.size() == 2);  // exactly S up to conjugacy
  TestFamily p1 = build_primitive_sample(2, 1);
  CHECK(contains_class(p1, W("ab")));

  // B_S is contained in the depth-1 sample up to conjugacy.
  for (const ReducedWord& m : build_b_set(2).members) CHECK(contains_class(p1, m));

  // Closure: one more Whitehead application stays inside the depth+1 sample.
  TestFamily p2 = build_primitive_sample(2, 2);
  for (const FreeAutomorphism& g : whitehead_generators(2))
    for (const ReducedWord& m : p1.members) CHECK(contains_class(p2, g.apply(m)));
}

TEST_CASE("ball family") {
  TestFamily f = build_ball_family(2, 2);
  for (const ReducedWord& m : f.members) CHECK(!m.is_identity());
  std::unordered_set<ReducedWord, WordHash> classes;
  for (const ReducedWord& w : enumerate_ball(2, 2))
    if (!w.is_identity()) classes.insert(conjugacy_key(w));
  CHECK(f.members.size() == classes.size());
}

TEST_CASE("testability experiment") {
  FreeAutomorphism phi = parse_automorphism("a->ab; b->a; inv: a->b; b->Ba", 2);
  std::vector<FreeAutomorphism> seq;
  FreeAutomorphism p = phi;
  for (int n = 1; n <= 6; ++n) {
    seq.push_back(p);
    p = compose(p, phi);
  }
  TestabilityReport r = testability_experiment(build_b_set(2), seq, 10);
  CHECK(r.sequence_accepted);
  CHECK(r.exceeded_bound);  // some B-set member grows past M = 10
  CHECK(r.witness_growth >= 13);  // Fibonacci growth of phi^6

  // Outer-duplicate sequences are rejected at the gate.
  std::vector<FreeAutomorphism> dup{identity_automorphism(2),
                                    inner_automorphism(W("ab"))};
  TestabilityReport rej = testability_experiment(build_b_set(2), dup, 10);
  CHECK(!rej.sequence_accepted);
  CHECK(!rej.rejection_reason.empty());
}

TEST_CASE("larger families inherit unbounded witnesses") {
  FreeAutomorphism phi = parse_automorphism("a->ab; b->a; inv: a->b; b->Ba", 2);
  std::vector<FreeAutomorphism> seq;
  FreeAutomorphism p = phi;
  for (int n = 1; n <= 6; ++n) {
    seq.push_back(p);
    p = compose(p, phi);
  }
  TestabilityReport ball_r = testability_experiment(build_ball_family(2, 2), seq, 10);
  TestabilityReport b_r = testability_experiment(build_b_set(2), seq, 10);
  CHECK(b_r.exceeded_bound);
  CHECK(ball_r.exceeded_bound);  // monotone in the family
}

TEST_CASE("canary census") {
  CanaryCensus c = canary_census(2, 3, 4);
  REQUIRE(c.counts.size() == 5);
  for (std::size_t d = 1; d < c.counts.size(); ++d) CHECK(c.counts[d] >= c.counts[d - 1]);
  CHECK(c.counts[0] == 1);  // identity class is bounded
  // The swap class (all B-set images of length <= 2) is counted by depth 1.
  CHECK(c.counts[1] >= 2);
  CHECK(c.classes_seen >= c.counts.back());

  // M = 3 saturates at 72 classes by depth 3. The value is frozen from an
  // exhaustive oracle: an unpruned sweep of every outer class with total
  // B-set length <= 4M terminates (empty frontier) with exactly 72 classes
  // meeting the per-element bound.
  CanaryCensus full = canary_census(2, 3, 6);
  REQUIRE(full.counts.size() == 7);
  CHECK(full.counts[3] == 72);
  for (std::size_t d = 3; d < full.counts.size(); ++d) CHECK(full.counts[d] == 72);
}
