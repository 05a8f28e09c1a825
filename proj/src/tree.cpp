#include "repstab/tree.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace repstab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

HalfInt dist_from_origin(const TreePoint& p) {
  std::int64_t twice = 2 * static_cast<std::int64_t>(p.vertex.length());
  if (!p.is_vertex()) twice += 1;
  return HalfInt(twice);
}

}  // namespace

ReducedWord SignedPerm::apply(const ReducedWord& w) const {
  ReducedWord out;
  out.rank = w.rank;
  out.letters.reserve(w.length());
  for (Letter l : w.letters) out.letters.push_back(apply(l));
  return out;
}

bool SignedPerm::is_identity() const {
  for (int i = 1; i <= rank(); ++i)
    if (image[i - 1] != i) return false;
  return true;
}

SignedPerm identity_perm(int rank) {
  SignedPerm p;
  p.image.resize(rank);
  std::iota(p.image.begin(), p.image.end(), 1);
  return p;
}

SignedPerm compose(const SignedPerm& a, const SignedPerm& b) {
  SignedPerm out;
  out.image.reserve(b.image.size());
  for (Letter l : b.image) out.image.push_back(a.apply(l));
  return out;
}

SignedPerm inverse(const SignedPerm& p) {
  SignedPerm out;
  out.image.resize(p.image.size());
  for (int i = 1; i <= p.rank(); ++i) {
    Letter t = p.image[i - 1];
    out.image[std::abs(t) - 1] = t > 0 ? i : -i;
  }
  return out;
}

std::vector<SignedPerm> all_signed_perms(int rank) {
  std::vector<int> perm(rank);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<SignedPerm> out;
  do {
    for (unsigned mask = 0; mask < (1u << rank); ++mask) {
      SignedPerm p;
      p.image.reserve(rank);
      for (int i = 0; i < rank; ++i)
        p.image.push_back((mask >> i) & 1u ? -perm[i] : perm[i]);
      out.push_back(std::move(p));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

TreePoint vertex_point(const ReducedWord& v) { return TreePoint{v, 0}; }

TreePoint edge_midpoint(const ReducedWord& u, const ReducedWord& v) {
  if (word_distance(u, v) != 1) throw std::invalid_argument("edge endpoints must be adjacent");
  const ReducedWord& nearer = u.length() < v.length() ? u : v;
  const ReducedWord& farther = u.length() < v.length() ? v : u;
  return TreePoint{nearer, farther.letters.back()};
}

HalfInt tree_distance(const TreePoint& p, const TreePoint& q) {
  if (p.is_vertex() && q.is_vertex())
    return HalfInt(2 * word_distance(p.vertex, q.vertex));
  if (p.is_vertex() || q.is_vertex()) {
    const TreePoint& v = p.is_vertex() ? p : q;
    const TreePoint& m = p.is_vertex() ? q : p;
    ReducedWord far_end = concat(m.vertex, single_letter(m.edge, m.vertex.rank));
    std::int64_t d = std::min(word_distance(v.vertex, m.vertex), word_distance(v.vertex, far_end));
    return HalfInt(2 * d + 1);
  }
  if (p == q) return HalfInt(0);
  ReducedWord pf = concat(p.vertex, single_letter(p.edge, p.vertex.rank));
  ReducedWord qf = concat(q.vertex, single_letter(q.edge, q.vertex.rank));
  std::int64_t d = std::min(std::min(word_distance(p.vertex, q.vertex), word_distance(p.vertex, qf)),
                            std::min(word_distance(pf, q.vertex), word_distance(pf, qf)));
  return HalfInt(2 * d + 2);
}

TreePoint segment_midpoint(const ReducedWord& p, const ReducedWord& q) {
  std::vector<ReducedWord> path = geodesic(p, q);
  std::size_t steps = path.size() - 1;
  if (steps % 2 == 0) return vertex_point(path[steps / 2]);
  return edge_midpoint(path[steps / 2], path[steps / 2 + 1]);
}

bool tree_point_less(const TreePoint& a, const TreePoint& b) {
  if (a.vertex != b.vertex) return word_less(a.vertex, b.vertex);
  if (a.edge == 0 || b.edge == 0) return a.edge == 0 && b.edge != 0;
  return letter_rank(a.edge) < letter_rank(b.edge);
}

std::string format_tree_point(const TreePoint& p) {
  if (p.is_vertex()) return format_word(p.vertex);
  ReducedWord far_end = concat(p.vertex, single_letter(p.edge, p.vertex.rank));
  return "mid(" + format_word(p.vertex) + "," + format_word(far_end) + ")";
}

ReducedWord TreeIsometry::apply(const ReducedWord& x) const {
  return concat(translation, twist.apply(x));
}

TreePoint TreeIsometry::apply(const TreePoint& p) const {
  if (p.is_vertex()) return vertex_point(apply(p.vertex));
  ReducedWord a = apply(p.vertex);
  ReducedWord b = apply(concat(p.vertex, single_letter(p.edge, p.vertex.rank)));
  return edge_midpoint(a, b);
}

TreeIsometry identity_isometry(int rank) {
  return TreeIsometry{identity_word(rank), identity_perm(rank)};
}

TreeIsometry left_multiplication(const ReducedWord& g) {
  return TreeIsometry{g, identity_perm(g.rank)};
}

TreeIsometry compose(const TreeIsometry& f, const TreeIsometry& h) {
  // (g, s) after (g', s') sends x to g * s(g') * (s s')(x).
  return TreeIsometry{concat(f.translation, f.twist.apply(h.translation)),
                      compose(f.twist, h.twist)};
}

TreeIsometry inverse(const TreeIsometry& f) {
  SignedPerm inv = inverse(f.twist);
  return TreeIsometry{inv.apply(inverse(f.translation)), inv};
}

TreeIsometry commutator(const TreeIsometry& f, const TreeIsometry& h) {
  return compose(compose(f, h), compose(inverse(f), inverse(h)));
}

TreeClassification classify_tree_isometry(const TreeIsometry& f) {
  ReducedWord e = identity_word(f.rank());
  TreePoint m = segment_midpoint(e, f.apply(e));
  HalfInt l = tree_distance(m, f.apply(m));
  return TreeClassification{l.twice == 0 ? TreeIsomKind::elliptic : TreeIsomKind::hyperbolic, l, m};
}

std::vector<TreePoint> enumerate_tree_points(int rank, int radius, std::size_t cap) {
  std::vector<ReducedWord> vertices = enumerate_ball(rank, radius, cap);
  std::vector<TreePoint> out;
  out.reserve(3 * vertices.size());
  for (const ReducedWord& v : vertices) {
    out.push_back(vertex_point(v));
    if (static_cast<int>(v.length()) >= radius) continue;
    for (int i = 1; i <= rank; ++i) {
      for (Letter l : {Letter(i), Letter(-i)}) {
        if (!v.letters.empty() && v.letters.back() == -l) continue;  // parent edge
        out.push_back(TreePoint{v, l});
        if (out.size() > cap) throw CapExceeded("tree point enumeration exceeds cap");
      }
    }
  }
  std::sort(out.begin(), out.end(), tree_point_less);
  return out;
}

bool CharacteristicSet::contains(const TreePoint& p) const {
  return std::binary_search(points.begin(), points.end(), p, tree_point_less);
}

CharacteristicSet characteristic_set(const TreeIsometry& f, int radius, std::size_t cap) {
  TreeClassification cls = classify_tree_isometry(f);
  CharacteristicSet out;
  out.owner = f;
  out.kind = cls.kind;
  out.translation_length = cls.translation_length;
  out.radius = radius;
  for (const TreePoint& p : enumerate_tree_points(f.rank(), radius, cap))
    if (tree_distance(p, f.apply(p)) == cls.translation_length) out.points.push_back(p);
  return out;
}

std::vector<TreePoint> intersect_points(const std::vector<TreePoint>& a,
                                        const std::vector<TreePoint>& b) {
  std::vector<TreePoint> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                        tree_point_less);
  return out;
}

namespace {

bool has_interior_point(const std::vector<TreePoint>& pts, int radius) {
  for (const TreePoint& p : pts)
    if (dist_from_origin(p).twice <= 2 * (radius - 1)) return true;
  return false;
}

bool touches_boundary(const std::vector<TreePoint>& pts, int radius) {
  for (const TreePoint& p : pts)
    if (dist_from_origin(p).twice >= 2 * radius - 1) return true;
  return false;
}

}  // namespace

HellyResult helly_check(const CharacteristicSet& a, const CharacteristicSet& b,
                        const CharacteristicSet& c) {
  HellyResult r;
  std::vector<TreePoint> ab = intersect_points(a.points, b.points);
  std::vector<TreePoint> bc = intersect_points(b.points, c.points);
  std::vector<TreePoint> ac = intersect_points(a.points, c.points);
  r.pairwise_ok = !ab.empty() && !bc.empty() && !ac.empty();
  if (!r.pairwise_ok) {
    r.conclusive = false;
    return r;
  }
  std::vector<TreePoint> triple = intersect_points(ab, c.points);
  r.triple_nonempty = !triple.empty();
  int radius = std::min({a.radius, b.radius, c.radius});
  r.conclusive = has_interior_point(ab, radius) && has_interior_point(bc, radius) &&
                 has_interior_point(ac, radius);
  return r;
}

EllipticProductResult elliptic_product_check(const TreeIsometry& g, const TreeIsometry& h,
                                             int radius) {
  CharacteristicSet cg = characteristic_set(g, radius);
  CharacteristicSet ch = characteristic_set(h, radius);
  if (cg.kind != TreeIsomKind::elliptic || ch.kind != TreeIsomKind::elliptic)
    throw std::invalid_argument("elliptic_product_check requires two elliptic isometries");

  EllipticProductResult r;
  r.lhs = classify_tree_isometry(compose(g, h)).translation_length;
  if (cg.points.empty() || ch.points.empty()) {
    r.conclusive = false;
    r.rhs = HalfInt(-1);
    return r;
  }
  HalfInt best = tree_distance(cg.points.front(), ch.points.front());
  TreePoint bp = cg.points.front(), bq = ch.points.front();
  for (const TreePoint& p : cg.points)
    for (const TreePoint& q : ch.points) {
      HalfInt d = tree_distance(p, q);
      if (d < best) {
        best = d;
        bp = p;
        bq = q;
      }
    }
  r.rhs = HalfInt(2 * best.twice);
  // If the realizing pair hugs the truncation boundary, the true minimum may
  // lie outside the ball.
  r.conclusive = dist_from_origin(bp).twice <= 2 * radius - 2 &&
                 dist_from_origin(bq).twice <= 2 * radius - 2;
  return r;
}

TrivialActionResult trivial_action_check(const std::vector<TreeIsometry>& generator_isometries,
                                         int radius) {
  TrivialActionResult r;
  std::vector<TreeIsometry> b_images = generator_isometries;
  for (std::size_t i = 0; i < generator_isometries.size(); ++i)
    for (std::size_t j = 0; j < generator_isometries.size(); ++j)
      if (i != j) b_images.push_back(compose(generator_isometries[i], generator_isometries[j]));

  for (std::size_t i = 0; i < b_images.size(); ++i) {
    if (classify_tree_isometry(b_images[i]).kind == TreeIsomKind::hyperbolic) {
      r.trivial = false;
      r.hyperbolic_witness = i;
      return r;
    }
  }
  r.trivial = true;
  std::vector<TreePoint> common = characteristic_set(generator_isometries.front(), radius).points;
  for (std::size_t i = 1; i < generator_isometries.size() && !common.empty(); ++i)
    common = intersect_points(common, characteristic_set(generator_isometries[i], radius).points);
  if (common.empty())
    r.conclusive = false;  // all elliptic but the shared fixed point lies outside the truncation
  else
    r.fixed_point = common.front();
  return r;
}

CommutatorOverlapResult lemma_he_check(const TreeIsometry& g, const TreeIsometry& h, int radius) {
  TreeClassification cg = classify_tree_isometry(g);
  TreeClassification ch = classify_tree_isometry(h);
  if (cg.kind != TreeIsomKind::hyperbolic)
    throw std::invalid_argument("lemma_he_check: g must be hyperbolic");
  if (ch.kind != TreeIsomKind::elliptic)
    throw std::invalid_argument("lemma_he_check: h must be elliptic");

  CommutatorOverlapResult r;
  r.commutator_length = classify_tree_isometry(commutator(g, h)).translation_length;
  std::vector<TreePoint> overlap = intersect_points(characteristic_set(g, radius).points,
                                                    characteristic_set(h, radius).points);
  r.overlap_nonempty = !overlap.empty();
  if (overlap.empty()) {
    r.overlap_length = HalfInt(-1);
  } else {
    HalfInt diam(0);
    for (std::size_t i = 0; i < overlap.size(); ++i)
      for (std::size_t j = i + 1; j < overlap.size(); ++j) {
        HalfInt d = tree_distance(overlap[i], overlap[j]);
        if (diam < d) diam = d;
      }
    r.overlap_length = diam;
  }

  bool boundary = touches_boundary(overlap, radius);
  if (r.commutator_length.twice == 0) {
    r.hypothesis_holds = r.overlap_nonempty && r.overlap_length >= cg.translation_length;
    // Truncation can only shrink the overlap, so a passing check is final.
    r.conclusive = r.hypothesis_holds || !boundary;
  } else {
    r.hypothesis_holds = !r.overlap_nonempty || r.overlap_length < cg.translation_length;
    r.conclusive = !boundary;
  }
  return r;
}

TreeIsometry parse_tree_isometry(std::string_view text, int rank) {
  TreeIsometry f = identity_isometry(rank);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t semi = text.find(';', pos);
    std::string clause = trim(text.substr(pos, semi == std::string_view::npos ? semi : semi - pos));
    pos = semi == std::string_view::npos ? text.size() + 1 : semi + 1;
    if (clause.empty()) continue;
    std::size_t eq = clause.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("isometry clause missing '='");
    std::string key = trim(std::string_view(clause).substr(0, eq));
    std::string val = trim(std::string_view(clause).substr(eq + 1));
    if (key == "g") {
      f.translation = parse_word(val, rank);
    } else if (key == "twist") {
      if (val.size() < 2 || val.front() != '(' || val.back() != ')')
        throw std::invalid_argument("twist must be parenthesized, e.g. (a->b,b->a)");
      std::string body = val.substr(1, val.size() - 2);
      SignedPerm p = identity_perm(rank);
      std::vector<bool> assigned(rank, false);
      std::size_t at = 0;
      while (at <= body.size()) {
        std::size_t comma = body.find(',', at);
        std::string entry =
            trim(std::string_view(body).substr(at, comma == std::string::npos ? comma : comma - at));
        at = comma == std::string::npos ? body.size() + 1 : comma + 1;
        if (entry.empty()) continue;
        std::size_t arrow = entry.find("->");
        if (arrow == std::string::npos) throw std::invalid_argument("twist entry missing '->'");
        ReducedWord src = parse_word(trim(std::string_view(entry).substr(0, arrow)), rank);
        ReducedWord dst = parse_word(trim(std::string_view(entry).substr(arrow + 2)), rank);
        if (src.length() != 1 || src.letters[0] < 0 || dst.length() != 1)
          throw std::invalid_argument("twist entries must map a generator to a signed generator");
        p.image[src.letters[0] - 1] = dst.letters[0];
        assigned[src.letters[0] - 1] = true;
      }
      std::vector<bool> hit(rank, false);
      for (Letter l : p.image) {
        if (hit[std::abs(l) - 1]) throw std::invalid_argument("twist is not a permutation");
        hit[std::abs(l) - 1] = true;
      }
      (void)assigned;
      f.twist = std::move(p);
    } else {
      throw std::invalid_argument("unknown isometry clause '" + key + "'");
    }
  }
  return f;
}

std::string format_tree_isometry(const TreeIsometry& f) {
  std::string out = "g=" + format_word(f.translation);
  if (!f.twist.is_identity()) {
    out += "; twist=(";
    for (int i = 1; i <= f.rank(); ++i) {
      if (i > 1) out += ",";
      out += format_word(single_letter(i, f.rank()));
      out += "->";
      out += format_word(single_letter(f.twist.image[i - 1], f.rank()));
    }
    out += ")";
  }
  return out;
}

}  // namespace repstab
