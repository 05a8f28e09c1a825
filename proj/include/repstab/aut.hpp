#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repstab/word.hpp"

namespace repstab {

// An automorphism of F_k given by generator images together with a certified
// two-sided inverse. Construction verifies the certificate.
struct FreeAutomorphism {
  std::vector<ReducedWord> images;          // image of x_i at index i-1
  std::vector<ReducedWord> inverse_images;  // image of x_i under the inverse

  int rank() const { return static_cast<int>(images.size()); }
  ReducedWord apply(const ReducedWord& w) const;
  ReducedWord apply_inverse(const ReducedWord& w) const;

  friend bool operator==(const FreeAutomorphism& a, const FreeAutomorphism& b) {
    return a.images == b.images;
  }
};

// Throws std::invalid_argument when the inverse certificate fails.
FreeAutomorphism make_automorphism(std::vector<ReducedWord> images,
                                   std::vector<ReducedWord> inverse_images);
FreeAutomorphism identity_automorphism(int rank);
FreeAutomorphism compose(const FreeAutomorphism& f, const FreeAutomorphism& g);  // f after g
FreeAutomorphism invert(const FreeAutomorphism& f);
FreeAutomorphism inner_automorphism(const ReducedWord& g);  // x |-> g x g^-1

// Standard generating set of Aut(F_k): transpositions of generator pairs,
// inversions x_i |-> x_i^-1, and right Nielsen maps x_i |-> x_i x_j (i != j).
// Deterministic order; every entry carries its certified inverse.
std::vector<FreeAutomorphism> whitehead_generators(int k);

struct OuterClassWitness {
  bool inner = false;
  std::optional<ReducedWord> conjugator;      // set when inner
  std::optional<ReducedWord> separating_word; // a generator witnessing non-innerness
};

// Exact decision. If theta is inner with conjugator g then theta(x_1) =
// g x_1 g^-1 forces g = w x_1^m for the conjugator w read off from
// cyclic_reduce(theta(x_1)), with |m| bounded by the other images; the
// finitely many candidates are checked against every generator.
OuterClassWitness is_inner(const FreeAutomorphism& theta);

// True iff f and g lie in the same outer class (is_inner on f^-1 g).
bool same_outer_class(const FreeAutomorphism& f, const FreeAutomorphism& g);

// Canonical representative of the outer class: f conjugated by the inner
// automorphism minimizing total image length (a convex function on the
// Cayley tree), ties broken lexicographically. Normal forms are equal iff
// the outer classes are; the image tuple doubles as a hashable dedup key
// for the census machinery.
FreeAutomorphism outer_normal_form(const FreeAutomorphism& f);
std::vector<ReducedWord> outer_canonical_key(const FreeAutomorphism& f);

struct LambdaResult {
  std::int64_t lambda = 0;       // min over vertices x of max_s d(x, phi(s) x)
  ReducedWord minimizer;         // least such vertex
};

// Exact minimum of the max-displacement function of the twisted action
// rho_0 after phi. Convexity of displacement on trees lets a descent walk
// find the global minimum without enumerating the ball.
LambdaResult lambda_of(const FreeAutomorphism& phi);

struct RescaledRow {
  ReducedWord probe;
  std::vector<double> ratios;    // l_S(phi^n(probe)) / lambda(phi^n), n = 1..n_max
  std::vector<std::int64_t> lengths;
  double cauchy_tail_width = 0;  // max - min over the last three ratios
};

struct RescaledTable {
  std::vector<std::int64_t> lambdas;  // lambda(phi^n), n = 1..n_max
  std::vector<RescaledRow> rows;
};

RescaledTable rescaled_lengths(const FreeAutomorphism& phi, int n_max,
                               const std::vector<ReducedWord>& probes);

// Automorphism literal: "a->ab; b->a", optionally "inv: a->b; b->Ba".
// Without an inv clause the parser searches short Whitehead compositions for
// an inverse and rejects the input when none certifies.
FreeAutomorphism parse_automorphism(std::string_view text, int rank);
std::string format_automorphism(const FreeAutomorphism& f);

}  // namespace repstab
