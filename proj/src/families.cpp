#include "repstab/families.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace repstab {

namespace {

// Inserts w into the family unless its conjugacy class is already present
// or w is the identity.
struct ConjugacyDedup {
  std::unordered_set<ReducedWord, WordHash> keys;
  std::vector<ReducedWord>* out;

  void insert(const ReducedWord& w) {
    if (w.is_identity()) return;
    ReducedWord key = conjugacy_key(w);
    if (keys.insert(key).second) out->push_back(w);
  }
};

std::vector<ReducedWord> generator_words(int k) {
  std::vector<ReducedWord> s;
  for (int i = 1; i <= k; ++i) s.push_back(single_letter(i, k));
  return s;
}

ReducedWord group_commutator(const ReducedWord& g, const ReducedWord& h) {
  return concat(concat(g, h), concat(inverse(g), inverse(h)));
}

std::vector<ReducedWord> raw_b_set(int k) {
  std::vector<ReducedWord> out = generator_words(k);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j)
      if (i != j) out.push_back(concat(single_letter(i, k), single_letter(j, k)));
  return out;
}

struct TupleHash {
  std::size_t operator()(const std::vector<ReducedWord>& t) const {
    std::size_t h = 0;
    WordHash wh;
    for (const ReducedWord& w : t) h = h * 131 + wh(w);
    return h;
  }
};

// Full classical move set for the census walk, closed under inversion:
// every signed permutation of the generators, and for every multiplier
// letter m each assignment of {keep, x -> x m, x -> m^-1 x, x -> m^-1 x m}
// to the remaining generators. These are single steps of the peak-reduction
// machinery, so the walk reaches every bounded class in few steps; the
// exported generator list keeps the smaller Nielsen-style set.
std::vector<FreeAutomorphism> census_moves(int k) {
  std::vector<FreeAutomorphism> out;

  // Signed permutations (one generator list per assignment of distinct
  // targets with signs).
  std::vector<int> targets(k);
  for (int i = 0; i < k; ++i) targets[i] = i + 1;
  std::sort(targets.begin(), targets.end());
  do {
    for (int signs = 0; signs < (1 << k); ++signs) {
      std::vector<ReducedWord> images, inv(k, identity_word(k));
      for (int i = 0; i < k; ++i) {
        Letter l = (signs >> i) & 1 ? -targets[i] : targets[i];
        images.push_back(single_letter(l, k));
        inv[targets[i] - 1] = single_letter((signs >> i) & 1 ? -(i + 1) : i + 1, k);
      }
      bool ident = signs == 0;
      for (int i = 0; ident && i < k; ++i) ident = targets[i] == i + 1;
      if (ident) continue;  // skip the identity move
      FreeAutomorphism f;
      f.images = std::move(images);
      f.inverse_images = std::move(inv);
      out.push_back(std::move(f));
    }
  } while (std::next_permutation(targets.begin(), targets.end()));

  // Multiplier moves.
  for (int mg = 1; mg <= k; ++mg)
    for (int msign : {1, -1}) {
      ReducedWord m = single_letter(msign * mg, k);
      ReducedWord mi = inverse(m);
      std::vector<int> others;
      for (int i = 1; i <= k; ++i)
        if (i != mg) others.push_back(i);
      std::int64_t combos = 1;
      for (std::size_t i = 0; i < others.size(); ++i) combos *= 4;
      for (std::int64_t code = 1; code < combos; ++code) {
        FreeAutomorphism f = identity_automorphism(k);
        std::int64_t c = code;
        for (int x : others) {
          ReducedWord xw = single_letter(x, k);
          switch (c % 4) {
            case 1:  // x -> x m
              f.images[x - 1] = concat(xw, m);
              f.inverse_images[x - 1] = concat(xw, mi);
              break;
            case 2:  // x -> m^-1 x
              f.images[x - 1] = concat(mi, xw);
              f.inverse_images[x - 1] = concat(m, xw);
              break;
            case 3:  // x -> m^-1 x m
              f.images[x - 1] = concat(mi, concat(xw, m));
              f.inverse_images[x - 1] = concat(m, concat(xw, mi));
              break;
            default:
              break;
          }
          c /= 4;
        }
        out.push_back(std::move(f));
      }
    }
  return out;
}

}  // namespace

TestFamily build_b_set(int k) {
  if (k < 2) throw std::invalid_argument("build_b_set requires k >= 2");
  TestFamily f;
  f.label = "b_set";
  f.params["k"] = k;
  f.members = raw_b_set(k);  // all distinct conjugacy classes by construction
  return f;
}

TestFamily build_commutators(int k, int L, std::size_t cap) {
  if (L < 1) throw std::invalid_argument("build_commutators requires L >= 1");
  TestFamily f;
  f.label = "commutators";
  f.params["k"] = k;
  f.params["L"] = L;
  ConjugacyDedup dedup{{}, &f.members};
  std::vector<ReducedWord> ball = enumerate_ball(k, L, cap);
  for (const ReducedWord& g : ball)
    for (const ReducedWord& h : ball) {
      dedup.insert(group_commutator(g, h));
      if (f.members.size() > cap) throw CapExceeded("commutator family exceeds cap");
    }
  return f;
}

TestFamily build_w_set(int k) {
  if (k < 2) throw std::invalid_argument("build_w_set requires k >= 2");
  TestFamily f;
  f.label = "w_set";
  f.params["k"] = k;
  if (k == 2)
    f.notes.push_back("k=2: the W set is defined but its test-subset support needs k >= 3");

  std::vector<ReducedWord> b = raw_b_set(k);
  std::vector<ReducedWord> w1;
  for (const ReducedWord& x : b)
    for (const ReducedWord& y : b) {
      ReducedWord c = group_commutator(x, y);
      if (!c.is_identity()) w1.push_back(c);
    }

  ConjugacyDedup dedup{{}, &f.members};
  for (const ReducedWord& w : w1) dedup.insert(w);
  for (const ReducedWord& x : b)
    for (const ReducedWord& w : w1) dedup.insert(group_commutator(x, w));
  for (const ReducedWord& w : w1)
    for (const ReducedWord& w2 : w1) dedup.insert(concat(w, w2));
  return f;
}

TestFamily build_primitive_sample(int k, int depth, std::size_t cap) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  TestFamily f;
  f.label = "primitive_sample";
  f.params["k"] = k;
  f.params["depth"] = depth;
  ConjugacyDedup dedup{{}, &f.members};

  std::vector<FreeAutomorphism> gens = whitehead_generators(k);
  std::vector<ReducedWord> frontier = generator_words(k);
  for (const ReducedWord& s : frontier) dedup.insert(s);
  for (int d = 0; d < depth; ++d) {
    std::vector<ReducedWord> next;
    std::unordered_set<ReducedWord, WordHash> next_seen;
    for (const FreeAutomorphism& g : gens)
      for (const ReducedWord& w : frontier) {
        ReducedWord im = g.apply(w);
        if (next_seen.insert(im).second) next.push_back(im);
        if (f.members.size() > cap || next.size() > cap)
          throw CapExceeded("primitive sample exceeds cap");
      }
    for (const ReducedWord& w : next) dedup.insert(w);
    frontier = std::move(next);
  }
  return f;
}

TestFamily build_ball_family(int k, int L, std::size_t cap) {
  TestFamily f;
  f.label = "ball";
  f.params["k"] = k;
  f.params["L"] = L;
  ConjugacyDedup dedup{{}, &f.members};
  for (const ReducedWord& w : enumerate_ball(k, L, cap)) dedup.insert(w);
  return f;
}

std::vector<std::int64_t> abelianization(const ReducedWord& w) {
  std::vector<std::int64_t> v(w.rank, 0);
  for (Letter l : w.letters) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
  return v;
}

bool all_members_in_derived_subgroup(const TestFamily& family) {
  for (const ReducedWord& w : family.members) {
    std::vector<std::int64_t> v = abelianization(w);
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) return false;
  }
  return true;
}

TestabilityReport testability_experiment(const TestFamily& family,
                                         const std::vector<FreeAutomorphism>& sequence,
                                         std::int64_t bound_M) {
  TestabilityReport r;
  r.bound_M = bound_M;
  for (std::size_t i = 0; i < sequence.size(); ++i)
    for (std::size_t j = i + 1; j < sequence.size(); ++j)
      if (same_outer_class(sequence[i], sequence[j])) {
        r.sequence_accepted = false;
        r.rejection_reason = "sequence entries " + std::to_string(i) + " and " +
                             std::to_string(j) + " agree in Out";
        return r;
      }
  r.sequence_accepted = true;

  for (const ReducedWord& a : family.members) {
    GrowthProfile p;
    p.member = a;
    for (const FreeAutomorphism& phi : sequence) {
      std::int64_t l = conjugacy_length(phi.apply(a));
      p.lengths.push_back(l);
      p.max_length = std::max(p.max_length, l);
    }
    r.profiles.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < r.profiles.size(); ++i)
    if (r.profiles[i].max_length > r.profiles[r.witness_index].max_length) r.witness_index = i;
  if (!r.profiles.empty()) {
    r.witness_growth = r.profiles[r.witness_index].max_length;
    r.exceeded_bound = r.witness_growth > bound_M;
  }
  return r;
}

CanaryCensus canary_census(int k, std::int64_t M, int depth, std::size_t cap) {
  CanaryCensus census;
  census.k = k;
  census.M = M;

  // The move set is closed under inversion (signed permutations invert to
  // signed permutations, multiplier moves invert to the same moves with the
  // inverse multiplier), so the walk is over an undirected graph.
  std::vector<FreeAutomorphism> sym = census_moves(k);
  std::vector<ReducedWord> b = raw_b_set(k);
  auto bounded = [&](const FreeAutomorphism& f) {
    for (const ReducedWord& w : b)
      if (conjugacy_length(f.apply(w)) > M) return false;
    return true;
  };

  // BFS directly in Out: the frontier holds one canonical normal form per
  // outer class, and every expansion is renormalized before dedup. Since
  // bounded B-set lengths and the normal form are both conjugation-invariant,
  // walking representatives loses nothing while keeping the state space the
  // set of outer classes rather than all of Aut. Only bounded classes are
  // expanded further: peak reduction keeps the bounded region connected, and
  // pruning is what lets the per-depth counts stabilize once the finite
  // bounded set has been swept.
  std::unordered_set<std::vector<ReducedWord>, TupleHash> outer_classes;
  std::size_t bounded_count = 0;

  std::vector<FreeAutomorphism> frontier{outer_normal_form(identity_automorphism(k))};
  outer_classes.insert(frontier.front().images);
  if (bounded(frontier.front()))
    ++bounded_count;
  else
    frontier.clear();
  for (int d = 0; d <= depth; ++d) {
    census.counts.push_back(bounded_count);
    if (d == depth) break;

    std::vector<FreeAutomorphism> next;
    for (const FreeAutomorphism& f : frontier)
      for (const FreeAutomorphism& g : sym) {
        FreeAutomorphism nf = outer_normal_form(compose(g, f));
        if (outer_classes.contains(nf.images)) continue;
        if (outer_classes.size() >= cap) throw CapExceeded("outer class census exceeds cap");
        outer_classes.insert(nf.images);
        if (!bounded(nf)) continue;
        ++bounded_count;
        next.push_back(std::move(nf));
      }
    frontier = std::move(next);
  }
  census.classes_seen = outer_classes.size();
  return census;
}

}  // namespace repstab
