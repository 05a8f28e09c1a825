#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repstab/halfint.hpp"
#include "repstab/word.hpp"

namespace repstab {

// Signed permutation of the generators: image[i-1] is the signed index of
// sigma(x_i). Extends to words letterwise; preserves word length, so
// x |-> g * sigma(x) is an isometry of the Cayley tree.
struct SignedPerm {
  std::vector<Letter> image;

  int rank() const { return static_cast<int>(image.size()); }
  Letter apply(Letter l) const {
    Letter s = image[std::abs(l) - 1];
    return l > 0 ? s : -s;
  }
  ReducedWord apply(const ReducedWord& w) const;
  bool is_identity() const;

  friend bool operator==(const SignedPerm& a, const SignedPerm& b) { return a.image == b.image; }
};

SignedPerm identity_perm(int rank);
SignedPerm compose(const SignedPerm& a, const SignedPerm& b);  // a after b
SignedPerm inverse(const SignedPerm& p);
// All 2^k * k! signed permutations, deterministic order.
std::vector<SignedPerm> all_signed_perms(int rank);

// A point of the geometric Cayley tree: a vertex, or the midpoint of the edge
// from `vertex` to `vertex * edge` (canonical orientation: |vertex * edge| =
// |vertex| + 1, so `vertex` is the endpoint nearer the root).
struct TreePoint {
  ReducedWord vertex;
  Letter edge = 0;  // 0: vertex point; otherwise midpoint marker

  bool is_vertex() const { return edge == 0; }
  friend bool operator==(const TreePoint& a, const TreePoint& b) {
    return a.edge == b.edge && a.vertex == b.vertex;
  }
};

TreePoint vertex_point(const ReducedWord& v);
// Midpoint of the edge between adjacent vertices u and v (canonicalized).
TreePoint edge_midpoint(const ReducedWord& u, const ReducedWord& v);

HalfInt tree_distance(const TreePoint& p, const TreePoint& q);
// Midpoint of the geodesic [p, q] between two vertices (half-integer safe).
TreePoint segment_midpoint(const ReducedWord& p, const ReducedWord& q);

bool tree_point_less(const TreePoint& a, const TreePoint& b);
std::string format_tree_point(const TreePoint& p);

// Isometry x |-> g * sigma(x) of the Cayley tree.
struct TreeIsometry {
  ReducedWord translation;  // g
  SignedPerm twist;         // sigma

  int rank() const { return translation.rank; }
  ReducedWord apply(const ReducedWord& x) const;
  TreePoint apply(const TreePoint& p) const;

  friend bool operator==(const TreeIsometry& a, const TreeIsometry& b) {
    return a.translation == b.translation && a.twist == b.twist;
  }
};

TreeIsometry identity_isometry(int rank);
TreeIsometry left_multiplication(const ReducedWord& g);
TreeIsometry compose(const TreeIsometry& f, const TreeIsometry& h);  // f after h
TreeIsometry inverse(const TreeIsometry& f);
TreeIsometry commutator(const TreeIsometry& f, const TreeIsometry& h);

enum class TreeIsomKind { elliptic, hyperbolic };

struct TreeClassification {
  TreeIsomKind kind;
  HalfInt translation_length;
  TreePoint witness;  // a point realizing d(p, f(p)) = l_T
};

// Midpoint method: with m the midpoint of [e, f(e)], l_T(f) = d(m, f(m)).
TreeClassification classify_tree_isometry(const TreeIsometry& f);

// Truncated characteristic set C_f = {p | d(p, f(p)) = l_T(f)} within the
// closed ball of the given radius about e. Points are sorted.
struct CharacteristicSet {
  TreeIsometry owner;
  TreeIsomKind kind;
  HalfInt translation_length;
  int radius = 0;
  std::vector<TreePoint> points;

  bool contains(const TreePoint& p) const;
};

CharacteristicSet characteristic_set(const TreeIsometry& f, int radius,
                                     std::size_t cap = global_cap());

// All tree points (vertices and edge midpoints) with d(e, .) <= radius.
std::vector<TreePoint> enumerate_tree_points(int rank, int radius,
                                             std::size_t cap = global_cap());

std::vector<TreePoint> intersect_points(const std::vector<TreePoint>& a,
                                        const std::vector<TreePoint>& b);

// Helly property for three truncated subtrees: pairwise nonempty
// intersections force a common point. `conclusive` is false when a pairwise
// intersection touches the truncation boundary.
struct HellyResult {
  bool pairwise_ok = false;  // precondition: all pairwise intersections nonempty
  bool triple_nonempty = false;
  bool conclusive = true;
};
HellyResult helly_check(const CharacteristicSet& a, const CharacteristicSet& b,
                        const CharacteristicSet& c);

// l_T(gh) vs 2 d(C_g, C_h) for elliptic g, h.
struct EllipticProductResult {
  HalfInt lhs;  // l_T(gh)
  HalfInt rhs;  // 2 d(C_g, C_h) on the truncations
  bool conclusive = true;
};
EllipticProductResult elliptic_product_check(const TreeIsometry& g, const TreeIsometry& h,
                                             int radius);

// Whether the isometries assigned to the generators give a trivial action:
// every B_S image elliptic, with a common fixed point exhibited inside the
// truncation when so.
struct TrivialActionResult {
  bool trivial = false;
  bool conclusive = true;
  std::optional<TreePoint> fixed_point;
  std::optional<std::size_t> hyperbolic_witness;  // index into the B_S image list
};
TrivialActionResult trivial_action_check(const std::vector<TreeIsometry>& generator_isometries,
                                         int radius);

// Dichotomy for a hyperbolic g and elliptic h: if l_T([g,h]) = 0 the overlap
// C_g cap C_h is a segment of length >= l_T(g); otherwise it is empty or
// shorter than l_T(g).
struct CommutatorOverlapResult {
  HalfInt commutator_length;
  HalfInt overlap_length;  // diameter of C_g cap C_h on the truncation; -1/2 if empty
  bool overlap_nonempty = false;
  bool hypothesis_holds = false;  // the branch predicted by l_T([g,h]) checks out
  bool conclusive = true;
};
CommutatorOverlapResult lemma_he_check(const TreeIsometry& g, const TreeIsometry& h, int radius);

// Literal: "g=ab; twist=(a->b,b->a)". The twist clause is optional; targets
// may be inverted generators, e.g. "(a->B,b->a)".
TreeIsometry parse_tree_isometry(std::string_view text, int rank);
std::string format_tree_isometry(const TreeIsometry& f);

}  // namespace repstab
