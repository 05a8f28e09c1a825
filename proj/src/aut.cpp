#include "repstab/aut.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "repstab/descent.hpp"

namespace repstab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

ReducedWord substitute(const std::vector<ReducedWord>& images, const ReducedWord& w) {
  ReducedWord out = identity_word(static_cast<int>(images.size()));
  for (Letter l : w.letters) {
    const ReducedWord& im = images[std::abs(l) - 1];
    out = concat(out, l > 0 ? im : inverse(im));
  }
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

}  // namespace

ReducedWord FreeAutomorphism::apply(const ReducedWord& w) const {
  if (w.rank != rank()) throw std::invalid_argument("rank mismatch in automorphism apply");
  return substitute(images, w);
}

ReducedWord FreeAutomorphism::apply_inverse(const ReducedWord& w) const {
  if (w.rank != rank()) throw std::invalid_argument("rank mismatch in automorphism apply");
  return substitute(inverse_images, w);
}

FreeAutomorphism make_automorphism(std::vector<ReducedWord> images,
                                   std::vector<ReducedWord> inverse_images) {
  if (images.size() != inverse_images.size() || images.empty())
    throw std::invalid_argument("automorphism needs matching image lists");
  int k = static_cast<int>(images.size());
  FreeAutomorphism f{std::move(images), std::move(inverse_images)};
  for (int i = 1; i <= k; ++i) {
    ReducedWord x = single_letter(i, k);
    if (substitute(f.images, substitute(f.inverse_images, x)) != x ||
        substitute(f.inverse_images, substitute(f.images, x)) != x)
      throw std::invalid_argument("inverse certificate failed on generator " +
                                  format_word(x));
  }
  return f;
}

FreeAutomorphism identity_automorphism(int rank) {
  std::vector<ReducedWord> im;
  for (int i = 1; i <= rank; ++i) im.push_back(single_letter(i, rank));
  return FreeAutomorphism{im, im};
}

FreeAutomorphism compose(const FreeAutomorphism& f, const FreeAutomorphism& g) {
  if (f.rank() != g.rank()) throw std::invalid_argument("rank mismatch in compose");
  FreeAutomorphism out;
  out.images.reserve(f.rank());
  out.inverse_images.reserve(f.rank());
  for (int i = 0; i < f.rank(); ++i) {
    out.images.push_back(substitute(f.images, g.images[i]));
    out.inverse_images.push_back(substitute(g.inverse_images, f.inverse_images[i]));
  }
  return out;
}

FreeAutomorphism invert(const FreeAutomorphism& f) {
  return FreeAutomorphism{f.inverse_images, f.images};
}

FreeAutomorphism inner_automorphism(const ReducedWord& g) {
  FreeAutomorphism out;
  for (int i = 1; i <= g.rank; ++i) {
    out.images.push_back(conjugate(g, single_letter(i, g.rank)));
    out.inverse_images.push_back(conjugate(inverse(g), single_letter(i, g.rank)));
  }
  return out;
}

std::vector<FreeAutomorphism> whitehead_generators(int k) {
  if (k < 2) throw std::invalid_argument("whitehead_generators requires k >= 2");
  std::vector<FreeAutomorphism> out;
  FreeAutomorphism id = identity_automorphism(k);

  // Transpositions x_i <-> x_j.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      FreeAutomorphism f = id;
      std::swap(f.images[i], f.images[j]);
      f.inverse_images = f.images;
      out.push_back(std::move(f));
    }
  // Inversions x_i -> x_i^-1.
  for (int i = 0; i < k; ++i) {
    FreeAutomorphism f = id;
    f.images[i] = inverse(f.images[i]);
    f.inverse_images = f.images;
    out.push_back(std::move(f));
  }
  // Right and left Nielsen maps x_i -> x_i x_j and x_i -> x_j x_i.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      FreeAutomorphism f = id;
      f.images[i] = concat(single_letter(i + 1, k), single_letter(j + 1, k));
      f.inverse_images[i] = concat(single_letter(i + 1, k), single_letter(-(j + 1), k));
      out.push_back(std::move(f));
      FreeAutomorphism g = id;
      g.images[i] = concat(single_letter(j + 1, k), single_letter(i + 1, k));
      g.inverse_images[i] = concat(single_letter(-(j + 1), k), single_letter(i + 1, k));
      out.push_back(std::move(g));
    }
  return out;
}

OuterClassWitness is_inner(const FreeAutomorphism& theta) {
  int k = theta.rank();
  ReducedWord x1 = single_letter(1, k);
  CyclicWord cr = cyclic_reduce(theta.images[0]);
  if (cr.core != x1) {
    // A conjugate of x_1 cyclically reduces to exactly x_1.
    return OuterClassWitness{false, std::nullopt, x1};
  }
  if (k == 1) return OuterClassWitness{true, cr.conjugator, std::nullopt};

  const ReducedWord& w = cr.conjugator;
  // g must be w x_1^m; |theta(x_2)| >= 2|m| + 1 - 2|w| bounds the exponent.
  std::int64_t bound =
      (static_cast<std::int64_t>(theta.images[1].length()) + 2 * w.length()) / 2 + 1;

  std::vector<std::int64_t> candidates;
  for (std::int64_t m = -bound; m <= bound; ++m) candidates.push_back(m);
  for (int i = 1; i < k; ++i) {
    ReducedWord xi = single_letter(i + 1, k);
    std::vector<std::int64_t> kept;
    for (std::int64_t m : candidates) {
      ReducedWord g = concat(w, power(x1, m));
      if (conjugate(g, xi) == theta.images[i]) kept.push_back(m);
    }
    if (kept.empty()) return OuterClassWitness{false, std::nullopt, xi};
    candidates = std::move(kept);
  }
  ReducedWord g = concat(w, power(x1, candidates.front()));
  return OuterClassWitness{true, g, std::nullopt};
}

bool same_outer_class(const FreeAutomorphism& f, const FreeAutomorphism& g) {
  return is_inner(compose(invert(f), g)).inner;
}

FreeAutomorphism outer_normal_form(const FreeAutomorphism& f) {
  // F(v) = sum_i d_S(v, theta(x_i) v) is a sum of displacement functions,
  // hence convex on the Cayley tree; its minimizing set is the full plateau.
  auto total = [&f](const ReducedWord& v) {
    std::int64_t sum = 0;
    for (const ReducedWord& im : f.images) sum += word_distance(v, concat(im, v));
    return sum;
  };
  TreeMinimum tm = minimize_convex_on_tree(total, identity_word(f.rank()));

  std::vector<ReducedWord> best;
  ReducedWord best_v;
  for (const ReducedWord& v : tm.minimizers) {
    std::vector<ReducedWord> tuple;
    tuple.reserve(f.images.size());
    for (const ReducedWord& im : f.images) tuple.push_back(conjugate(inverse(v), im));
    if (best.empty() ||
        std::lexicographical_compare(tuple.begin(), tuple.end(), best.begin(), best.end(),
                                     word_less)) {
      best = std::move(tuple);
      best_v = v;
    }
  }
  // Representative inn_{v^-1} o f with its inverse f^-1 o inn_v.
  FreeAutomorphism out;
  out.images = std::move(best);
  out.inverse_images.reserve(f.rank());
  for (int i = 1; i <= f.rank(); ++i)
    out.inverse_images.push_back(f.apply_inverse(conjugate(best_v, single_letter(i, f.rank()))));
  return out;
}

std::vector<ReducedWord> outer_canonical_key(const FreeAutomorphism& f) {
  return outer_normal_form(f).images;
}

LambdaResult lambda_of(const FreeAutomorphism& phi) {
  auto f = [&phi](const ReducedWord& v) {
    std::int64_t m = 0;
    for (const ReducedWord& im : phi.images)
      m = std::max(m, word_distance(v, concat(im, v)));
    return m;
  };
  TreeMinimum tm = minimize_convex_on_tree(f, identity_word(phi.rank()));
  return LambdaResult{tm.value, tm.minimizers.front()};
}

RescaledTable rescaled_lengths(const FreeAutomorphism& phi, int n_max,
                               const std::vector<ReducedWord>& probes) {
  RescaledTable table;
  table.rows.resize(probes.size());
  for (std::size_t p = 0; p < probes.size(); ++p) table.rows[p].probe = probes[p];

  FreeAutomorphism phin = identity_automorphism(phi.rank());
  for (int n = 1; n <= n_max; ++n) {
    phin = compose(phi, phin);
    for (const ReducedWord& im : phin.images)
      if (im.length() > global_cap())
        throw CapExceeded("image length overflow in rescaled_lengths at n=" + std::to_string(n));
    std::int64_t lambda = lambda_of(phin).lambda;
    table.lambdas.push_back(lambda);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::int64_t len = conjugacy_length(phin.apply(probes[p]));
      table.rows[p].lengths.push_back(len);
      table.rows[p].ratios.push_back(static_cast<double>(len) / static_cast<double>(lambda));
    }
  }
  for (RescaledRow& row : table.rows) {
    std::size_t n = row.ratios.size();
    if (n >= 3) {
      auto [lo, hi] = std::minmax({row.ratios[n - 3], row.ratios[n - 2], row.ratios[n - 1]});
      row.cauchy_tail_width = hi - lo;
    }
  }
  return table;
}

namespace {

std::vector<ReducedWord> parse_image_clause(const std::string& clause, int rank,
                                            std::vector<ReducedWord> base) {
  std::size_t pos = 0;
  while (pos <= clause.size()) {
    std::size_t semi = clause.find(';', pos);
    std::string entry = trim(std::string_view(clause).substr(
        pos, semi == std::string::npos ? semi : semi - pos));
    pos = semi == std::string::npos ? clause.size() + 1 : semi + 1;
    if (entry.empty()) continue;
    std::size_t arrow = entry.find("->");
    if (arrow == std::string::npos)
      throw std::invalid_argument("automorphism entry missing '->': " + entry);
    ReducedWord src = parse_word(trim(std::string_view(entry).substr(0, arrow)), rank);
    ReducedWord dst = parse_word(trim(std::string_view(entry).substr(arrow + 2)), rank);
    if (src.length() != 1 || src.letters[0] < 0)
      throw std::invalid_argument("automorphism entry must map a generator: " + entry);
    base[src.letters[0] - 1] = dst;
  }
  return base;
}

// Bounded breadth-first search over Whitehead compositions for a certified
// inverse of raw generator images. Returns nullopt when the cap is hit.
std::optional<FreeAutomorphism> search_inverse(const std::vector<ReducedWord>& images, int rank,
                                               std::size_t cap) {
  std::vector<FreeAutomorphism> gens = whitehead_generators(rank);
  std::vector<FreeAutomorphism> sym;
  for (const FreeAutomorphism& g : gens) {
    sym.push_back(g);
    sym.push_back(invert(g));
  }
  std::unordered_set<std::vector<ReducedWord>, TupleHash> seen;
  std::deque<FreeAutomorphism> queue;
  FreeAutomorphism id = identity_automorphism(rank);
  seen.insert(id.images);
  queue.push_back(id);
  while (!queue.empty()) {
    FreeAutomorphism cur = std::move(queue.front());
    queue.pop_front();
    if (cur.images == images) return invert(cur);
    for (const FreeAutomorphism& g : sym) {
      FreeAutomorphism next = compose(g, cur);
      if (seen.contains(next.images)) continue;
      if (seen.size() >= cap) return std::nullopt;
      seen.insert(next.images);
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

}  // namespace

FreeAutomorphism parse_automorphism(std::string_view text, int rank) {
  std::string s = trim(text);
  if (s.rfind("W[", 0) == 0) {
    if (s.back() != ']') throw std::invalid_argument("malformed Whitehead index literal");
    std::vector<FreeAutomorphism> gens = whitehead_generators(rank);
    FreeAutomorphism out = identity_automorphism(rank);
    std::string body = s.substr(2, s.size() - 3);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(',', pos);
      std::string idx = trim(std::string_view(body).substr(
          pos, comma == std::string::npos ? comma : comma - pos));
      pos = comma == std::string::npos ? body.size() + 1 : comma + 1;
      if (idx.empty()) continue;
      std::size_t i = std::stoul(idx);
      if (i >= gens.size())
        throw std::invalid_argument("Whitehead generator index " + idx + " out of range (0.." +
                                    std::to_string(gens.size() - 1) + ")");
      out = compose(out, gens[i]);
    }
    return out;
  }

  std::string forward = s;
  std::string inv_clause;
  std::size_t inv_at = s.find("inv:");
  if (inv_at != std::string::npos) {
    forward = trim(std::string_view(s).substr(0, inv_at));
    inv_clause = trim(std::string_view(s).substr(inv_at + 4));
  }
  std::vector<ReducedWord> base;
  for (int i = 1; i <= rank; ++i) base.push_back(single_letter(i, rank));
  std::vector<ReducedWord> images = parse_image_clause(forward, rank, base);

  if (!inv_clause.empty())
    return make_automorphism(images, parse_image_clause(inv_clause, rank, base));

  std::optional<FreeAutomorphism> found = search_inverse(images, rank, 200000);
  if (!found)
    throw std::invalid_argument(
        "no inverse found by bounded search; supply one with 'inv: ...'");
  return make_automorphism(images, found->images);
}

std::string format_automorphism(const FreeAutomorphism& f) {
  std::string out;
  for (int i = 1; i <= f.rank(); ++i) {
    if (i > 1) out += "; ";
    out += format_word(single_letter(i, f.rank()));
    out += "->";
    out += format_word(f.images[i - 1]);
  }
  return out;
}

}  // namespace repstab
