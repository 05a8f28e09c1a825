#pragma once

#include <map>
#include <string>
#include <vector>

#include "repstab/aut.hpp"
#include "repstab/word.hpp"

namespace repstab {

// A finite Aut-sampled family of words, deduplicated by conjugacy-class key.
struct TestFamily {
  std::string label;
  std::map<std::string, std::int64_t> params;
  std::vector<ReducedWord> members;  // freely reduced, conjugacy-deduplicated, identity-free
  std::vector<std::string> notes;    // e.g. the k=2 warning for the W set
};

// S together with products of distinct generators: k + k(k-1) members.
TestFamily build_b_set(int k);

// Commutators [g,h] over |g|,|h| <= L, identity removed.
TestFamily build_commutators(int k, int L, std::size_t cap = global_cap());

// W_1 = {[b,b']}, W_2 = {[b,w] : w in W_1}, W_3 = {w w' : w,w' in W_1},
// W = W_1 u W_2 u W_3 over b, b' in the B set. k = 2 is allowed with a
// warning note (the supporting theory needs k >= 3).
TestFamily build_w_set(int k);

// Orbit of S under Whitehead compositions of length <= depth.
TestFamily build_primitive_sample(int k, int depth, std::size_t cap = global_cap());

// Ball of radius L minus the identity (convenience family).
TestFamily build_ball_family(int k, int L, std::size_t cap = global_cap());

// Members mapped through the abelianization; zero vector = derived subgroup.
std::vector<std::int64_t> abelianization(const ReducedWord& w);
bool all_members_in_derived_subgroup(const TestFamily& family);

struct GrowthProfile {
  ReducedWord member;
  std::vector<std::int64_t> lengths;  // l_S(phi_n(member)) per sequence entry
  std::int64_t max_length = 0;
};

struct TestabilityReport {
  bool sequence_accepted = false;     // distinct outer classes
  std::string rejection_reason;
  std::vector<GrowthProfile> profiles;
  std::size_t witness_index = 0;      // member with the largest growth
  std::int64_t witness_growth = 0;
  std::int64_t bound_M = 0;
  bool exceeded_bound = false;        // witness growth exceeds M
};

// Per-member max over the sequence of l_S(phi_n(member)). Rejects sequences
// with outer-duplicate entries (exact is_inner check on pairwise quotients).
TestabilityReport testability_experiment(const TestFamily& family,
                                         const std::vector<FreeAutomorphism>& sequence,
                                         std::int64_t bound_M);

struct CanaryCensus {
  int k = 0;
  std::int64_t M = 0;
  // counts[d] = number of distinct outer classes realizable by Whitehead
  // compositions of length <= d whose B-set lengths are all <= M.
  std::vector<std::size_t> counts;
  std::size_t classes_seen = 0;  // distinct outer classes visited in total
};

// Breadth-first census over Whitehead compositions (generators and their
// inverses), outer classes deduplicated by the exact canonical key.
CanaryCensus canary_census(int k, std::int64_t M, int depth, std::size_t cap = global_cap());

}  // namespace repstab
