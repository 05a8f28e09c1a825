#include "repstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace repstab {

namespace {

double half_to_double(HalfInt h) { return h.twice / 2.0; }

std::vector<std::vector<double>> orbit_distance_matrix(const Representation& rho,
                                                       const std::vector<ReducedWord>& words) {
  std::size_t n = words.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  if (rho.target == TargetKind::H3) {
    std::vector<H3Point> pts;
    pts.reserve(n);
    for (const ReducedWord& w : words) pts.push_back(act(evaluate_h3(rho, w), rho.h3_basepoint));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        dist[i][j] = dist[j][i] = h3_distance(pts[i], pts[j]);
  } else {
    std::vector<TreePoint> pts;
    pts.reserve(n);
    for (const ReducedWord& w : words)
      pts.push_back(evaluate_tree(rho, w).apply(rho.tree_basepoint));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        dist[i][j] = dist[j][i] = half_to_double(tree_distance(pts[i], pts[j]));
  }
  return dist;
}

// Max violation of the two-sided (K, C=0) bounds over all pairs.
double fit_cost(const std::vector<double>& params, const std::vector<std::vector<double>>& dist,
                double K, std::size_t* arg_i = nullptr, std::size_t* arg_j = nullptr) {
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      double delta = std::abs(params[i] - params[j]);
      double d = dist[i][j];
      double v = std::max(d - K * delta, delta / K - d);
      if (v >= worst) {
        worst = v;
        if (arg_i) *arg_i = i;
        if (arg_j) *arg_j = j;
      }
    }
  return std::max(worst, 0.0);
}

}  // namespace

Representation make_h3_representation(std::vector<Mobius> images, H3Point basepoint) {
  Representation r;
  r.target = TargetKind::H3;
  r.rank = static_cast<int>(images.size());
  r.h3_images = std::move(images);
  r.h3_basepoint = basepoint;
  return r;
}

Representation make_tree_representation(std::vector<TreeIsometry> images) {
  if (images.empty()) throw std::invalid_argument("empty representation");
  Representation r;
  r.target = TargetKind::CayleyTree;
  r.rank = static_cast<int>(images.size());
  r.tree_basepoint = vertex_point(identity_word(images.front().rank()));
  r.tree_images = std::move(images);
  return r;
}

Representation schottky_representation(double lambda, double rotation_angle) {
  Mobius a = make_mobius(Complex(lambda), Complex(0.0), Complex(0.0), Complex(1.0 / lambda));
  double h = rotation_angle / 2.0;
  Mobius rot = make_mobius(Complex(std::cos(h)), Complex(std::sin(h)), Complex(-std::sin(h)),
                           Complex(std::cos(h)));
  Mobius b = mobius_mul(mobius_mul(rot, a), mobius_inverse(rot));
  return make_h3_representation({a, b});
}

Representation degenerate_representation() {
  Mobius g = make_mobius(Complex(2.0), Complex(0.0), Complex(0.0), Complex(0.5));
  return make_h3_representation({g, g});
}

Representation rotation_loxodromic_representation() {
  // Elliptic rotation by 1 radian about the axis through j, and a loxodromic
  // with very short translation length along the vertical axis: the group is
  // non-discrete and short commutator powers barely move anything.
  double h = 0.5;
  Mobius a = make_mobius(Complex(std::cos(h)), Complex(std::sin(h)), Complex(-std::sin(h)),
                         Complex(std::cos(h)));
  double l = std::exp(5e-5);
  Mobius b = make_mobius(Complex(l), Complex(0.0), Complex(0.0), Complex(1.0 / l));
  return make_h3_representation({a, b});
}

Representation tree_left_multiplication_representation(int rank) {
  std::vector<TreeIsometry> images;
  for (int i = 1; i <= rank; ++i)
    images.push_back(left_multiplication(single_letter(i, rank)));
  return make_tree_representation(std::move(images));
}

Mobius evaluate_h3(const Representation& rho, const ReducedWord& w) {
  if (rho.target != TargetKind::H3) throw std::invalid_argument("H3 target required");
  Mobius m = mobius_identity();
  for (Letter l : w.letters) {
    const Mobius& g = rho.h3_images[std::abs(l) - 1];
    m = mobius_mul(m, l > 0 ? g : mobius_inverse(g));
  }
  return m;
}

TreeIsometry evaluate_tree(const Representation& rho, const ReducedWord& w) {
  if (rho.target != TargetKind::CayleyTree)
    throw std::invalid_argument("tree target required");
  TreeIsometry m = identity_isometry(rho.tree_images.front().rank());
  for (Letter l : w.letters) {
    const TreeIsometry& g = rho.tree_images[std::abs(l) - 1];
    m = compose(m, l > 0 ? g : inverse(g));
  }
  return m;
}

double image_translation_length(const Representation& rho, const ReducedWord& w) {
  if (rho.target == TargetKind::H3) return classify(evaluate_h3(rho, w)).translation_length;
  return half_to_double(classify_tree_isometry(evaluate_tree(rho, w)).translation_length);
}

double orbit_distance(const Representation& rho, const ReducedWord& u, const ReducedWord& v) {
  if (rho.target == TargetKind::H3)
    return h3_distance(act(evaluate_h3(rho, u), rho.h3_basepoint),
                       act(evaluate_h3(rho, v), rho.h3_basepoint));
  return half_to_double(tree_distance(evaluate_tree(rho, u).apply(rho.tree_basepoint),
                                      evaluate_tree(rho, v).apply(rho.tree_basepoint)));
}

Representation conjugate_representation(const Representation& rho, const Mobius& h) {
  if (rho.target != TargetKind::H3)
    throw std::invalid_argument("conjugate_representation needs an H3 target");
  Representation out = rho;
  for (Mobius& g : out.h3_images) g = mobius_mul(mobius_mul(h, g), mobius_inverse(h));
  out.h3_basepoint = act(h, rho.h3_basepoint);
  return out;
}

Representation precompose(const Representation& rho, const FreeAutomorphism& phi) {
  Representation out = rho;
  if (rho.target == TargetKind::H3) {
    for (int i = 1; i <= rho.rank; ++i)
      out.h3_images[i - 1] = evaluate_h3(rho, phi.images[i - 1]);
  } else {
    for (int i = 1; i <= rho.rank; ++i)
      out.tree_images[i - 1] = evaluate_tree(rho, phi.images[i - 1]);
  }
  return out;
}

OrbitPathReport orbit_path(const Representation& rho, const std::vector<ReducedWord>& path) {
  for (std::size_t i = 1; i < path.size(); ++i)
    if (word_distance(path[i - 1], path[i]) != 1)
      throw std::invalid_argument("orbit_path requires a geodesic edge-path (step " +
                                  std::to_string(i) + ")");
  OrbitPathReport rep;
  ReducedWord e = identity_word(rho.rank);
  for (int i = 1; i <= rho.rank; ++i)
    rep.kappa = std::max(rep.kappa, orbit_distance(rho, e, single_letter(i, rho.rank)));
  if (rho.target == TargetKind::H3)
    for (const ReducedWord& w : path)
      rep.h3_points.push_back(act(evaluate_h3(rho, w), rho.h3_basepoint));
  else
    for (const ReducedWord& w : path)
      rep.tree_points.push_back(evaluate_tree(rho, w).apply(rho.tree_basepoint));
  rep.lipschitz_ok = true;
  for (std::size_t i = 1; i < path.size(); ++i) {
    double d = orbit_distance(rho, path[i - 1], path[i]);
    rep.step_lengths.push_back(d);
    if (d > rep.kappa + 1e-9) rep.lipschitz_ok = false;
  }
  return rep;
}

ReducedWord QuasiAxis::vertex(std::int64_t i) const {
  std::int64_t len = static_cast<std::int64_t>(core.length());
  std::int64_t q = i >= 0 ? i / len : -((-i + len - 1) / len);
  std::int64_t r = i - q * len;  // 0 <= r < len
  ReducedWord prefix{std::vector<Letter>(core.letters.begin(), core.letters.begin() + r),
                     core.rank};
  return concat(conjugator, concat(power(core, q), prefix));
}

QuasiAxis quasi_axis(const ReducedWord& gamma) {
  if (gamma.is_identity()) throw std::invalid_argument("identity has no axis");
  CyclicWord c = cyclic_reduce(gamma);
  return QuasiAxis{gamma, c.core, c.conjugator};
}

QuasiFit quasi_fit(const std::vector<double>& params,
                   const std::vector<std::vector<double>>& dist) {
  if (params.size() < 2) throw std::invalid_argument("quasi_fit needs at least 2 points");
  bool spread = false;
  for (double p : params) spread = spread || std::abs(p - params[0]) > 1e-12;
  if (!spread) throw std::invalid_argument("quasi_fit: degenerate parameter list");

  QuasiFit fit;
  double floor_cost = fit_cost(params, dist, kQuasiKHi);
  // fit_cost is non-increasing in K, so bisect for the least K at the floor.
  double lo = 1.0, hi = kQuasiKHi;
  double tol = 1e-9 * (1.0 + floor_cost);
  if (fit_cost(params, dist, lo) <= floor_cost + tol) {
    hi = lo;
  } else {
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      if (fit_cost(params, dist, mid) <= floor_cost + tol)
        hi = mid;
      else
        lo = mid;
    }
  }
  fit.K = hi;
  fit.C = fit_cost(params, dist, fit.K, &fit.witness_i, &fit.witness_j);
  fit.not_embedding = fit.K >= 0.99 * kQuasiKHi;
  return fit;
}

LocalGlobalReport local_global_check(const std::vector<double>& params,
                                     const std::vector<std::vector<double>>& dist, double Kp,
                                     double Cp, double M) {
  if (M < 2) throw std::invalid_argument("local_global_check requires window M >= 2");
  LocalGlobalReport rep;
  rep.local_pass = true;
  for (std::size_t i = 0; i < params.size() && rep.local_pass; ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      double delta = std::abs(params[i] - params[j]);
      if (delta > M) continue;
      double d = dist[i][j];
      if (d > Kp * delta + Cp + 1e-9 || d < delta / Kp - Cp - 1e-9) {
        rep.local_pass = false;
        rep.violation_i = i;
        rep.violation_j = j;
        break;
      }
    }
  rep.global = quasi_fit(params, dist);
  return rep;
}

StabilityCertificate certify_stability(const Representation& rho, const TestFamily& family,
                                       int L, int M) {
  if (family.members.empty()) throw std::invalid_argument("empty family");
  if (L < 1 || M < 2) throw std::invalid_argument("certify_stability: need L >= 1, M >= 2");
  StabilityCertificate cert;
  cert.family_label = family.label;
  cert.L = L;
  cert.M = M;
  cert.passed = true;
  cert.scope = "axes of family '" + family.label + "' sampled over [-" + std::to_string(L) +
               "," + std::to_string(L) + "], window " + std::to_string(M);

  for (const ReducedWord& member : family.members) {
    QuasiAxis axis = quasi_axis(member);
    std::vector<double> params;
    std::vector<ReducedWord> verts;
    for (int n = -L; n <= L; ++n) {
      params.push_back(static_cast<double>(n));
      verts.push_back(axis.vertex(n));
    }
    auto dist = orbit_distance_matrix(rho, verts);
    ElementDiagnostic diag;
    diag.member = member;
    diag.fit = quasi_fit(params, dist);
    diag.fit.scope = "axis of '" + format_word(member) + "'";
    diag.local_ok = local_global_check(params, dist, diag.fit.K, diag.fit.C, M).local_pass;
    if (diag.fit.not_embedding) {
      if (cert.passed) cert.failure_witness = member;
      cert.passed = false;
    } else {
      cert.K = std::max(cert.K, diag.fit.K);
      cert.C = std::max(cert.C, diag.fit.C);
    }
    cert.per_element.push_back(std::move(diag));
  }
  return cert;
}

DisplacementFit fit_well_displacing(const Representation& rho, const TestFamily& family) {
  if (family.members.empty()) throw std::invalid_argument("empty family");
  std::vector<double> ls, disp;
  for (const ReducedWord& a : family.members) {
    ls.push_back(static_cast<double>(conjugacy_length(a)));
    disp.push_back(image_translation_length(rho, a));
  }
  auto cost = [&](double J, std::size_t* arg = nullptr) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      double v = std::max(disp[i] - J * ls[i], ls[i] / J - disp[i]);
      if (v >= worst) {
        worst = v;
        if (arg) *arg = i;
      }
    }
    return std::max(worst, 0.0);
  };
  double floor_cost = cost(kQuasiKHi);
  double lo = 1.0, hi = kQuasiKHi;
  double tol = 1e-9 * (1.0 + floor_cost);
  if (cost(lo) <= floor_cost + tol) {
    hi = lo;
  } else {
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cost(mid) <= floor_cost + tol)
        hi = mid;
      else
        lo = mid;
    }
  }
  DisplacementFit fit;
  fit.J = hi;
  std::size_t arg = 0;
  fit.B = cost(fit.J, &arg);
  fit.witness = family.members[arg];
  fit.failed = fit.J >= 0.99 * kQuasiKHi;
  fit.scope = "family '" + family.label + "', " + std::to_string(family.members.size()) +
              " members";
  return fit;
}

PingPongReport ping_pong_check(const ReducedWord& u, const ReducedWord& v, double delta_s) {
  PingPongReport r;
  ReducedWord e = identity_word(u.rank);
  double lu = static_cast<double>(u.length());
  double lv = static_cast<double>(v.length());
  double mn = std::min(lu, lv);
  r.length_ok = mn >= 100.0 * delta_s;

  ReducedWord ui = inverse(u), vi = inverse(v);
  double cross_bound = mn / 2.0 - 20.0 * delta_s;
  r.cross_ok = true;
  for (const ReducedWord* x : {&u, static_cast<const ReducedWord*>(&ui)})
    for (const ReducedWord* y : {&v, static_cast<const ReducedWord*>(&vi)})
      if (half_to_double(gromov_product(*x, *y, e)) > cross_bound) r.cross_ok = false;
  r.self_u_ok = half_to_double(gromov_product(u, ui, e)) <= lu / 2.0 - 20.0 * delta_s;
  r.self_v_ok = half_to_double(gromov_product(v, vi, e)) <= lv / 2.0 - 20.0 * delta_s;
  r.ok = r.length_ok && r.cross_ok && r.self_u_ok && r.self_v_ok;
  return r;
}

std::optional<int> ping_pong_search(const ReducedWord& gamma0, const ReducedWord& h,
                                    int n_max) {
  if (gamma0.is_identity() || h.is_identity())
    throw std::invalid_argument("ping_pong_search needs infinite-order inputs");
  // gamma0 and h gamma0 h^-1 share axis endpoints exactly when some powers
  // coincide as group elements (free groups are bi-orderable, so an axis is
  // never reversed; sharing one endpoint forces sharing both).
  ReducedWord conj = conjugate(h, gamma0);
  std::unordered_set<ReducedWord, WordHash> powers;
  for (int p = 1; p <= n_max; ++p) {
    powers.insert(power(gamma0, p));
    powers.insert(power(gamma0, -p));
  }
  for (int q = 1; q <= n_max; ++q)
    if (powers.contains(power(conj, q)) || powers.contains(power(conj, -q)))
      throw std::invalid_argument(
          "ping_pong_search: endpoint sets not disjoint (power-related cores)");

  for (int n = 1; n <= n_max; ++n) {
    ReducedWord u = power(gamma0, n);
    ReducedWord v = conjugate(h, power(gamma0, -n));
    if (ping_pong_check(u, v).ok) return n;
  }
  return std::nullopt;
}

AlphaFit l2_alpha_fit(const ReducedWord& u, const ReducedWord& v, int L, std::size_t cap) {
  if (!ping_pong_check(u, v).ok)
    throw std::invalid_argument("l2_alpha_fit requires a ping-pong pair");
  AlphaFit fit;
  fit.witness = identity_word(u.rank);
  for (const ReducedWord& g : enumerate_ball(u.rank, L, cap)) {
    std::int64_t rhs = 3 * std::max({conjugacy_length(g), conjugacy_length(concat(u, g)),
                                     conjugacy_length(concat(v, g))});
    std::int64_t need = static_cast<std::int64_t>(g.length()) - rhs;
    ++fit.checked;
    if (need > fit.alpha) {
      fit.alpha = need;
      fit.witness = g;
    }
  }
  return fit;
}

DiscretenessReport discreteness_experiment(const Representation& rho, int L, double epsilon,
                                           double theta) {
  if (rho.target != TargetKind::H3)
    throw std::invalid_argument("discreteness_experiment needs an H3 target");
  DiscretenessReport rep;
  rep.epsilon = epsilon;
  rep.theta = theta;
  rep.L = L;

  rep.min_jorgensen = -1.0;
  for (int i = 0; i < rho.rank; ++i)
    for (int j = 0; j < rho.rank; ++j) {
      if (i == j) continue;
      double v = jorgensen_check(rho.h3_images[i], rho.h3_images[j]);
      if (rep.min_jorgensen < 0 || v < rep.min_jorgensen) rep.min_jorgensen = v;
    }

  int base = std::max(2, L / 4);
  std::vector<ReducedWord> ball = enumerate_ball(rho.rank, base);
  std::unordered_set<ReducedWord, WordHash> seen;
  double best_disp = 0.0;
  for (const ReducedWord& g : ball)
    for (const ReducedWord& h : ball) {
      ReducedWord c = concat(concat(g, h), concat(inverse(g), inverse(h)));
      if (c.is_identity()) continue;
      if (!seen.insert(conjugacy_key(c)).second) continue;
      std::int64_t lc = conjugacy_length(c);
      for (std::int64_t m = 1; lc * m <= L || (lc == 0 && m == 1); ++m) {
        ReducedWord w = power(c, m);
        std::int64_t lsw = conjugacy_length(w);
        if (lsw > L) break;
        ++rep.searched;
        if (lsw < theta) continue;
        double disp = image_translation_length(rho, w);
        if (disp < epsilon && (!rep.violation_found || disp < best_disp)) {
          rep.violation_found = true;
          rep.witness = w;
          rep.witness_displacement = disp;
          rep.witness_ls = lsw;
          best_disp = disp;
        }
      }
    }
  return rep;
}

EndpointPathsReport endpoint_paths_compare(const ReducedWord& gamma, const Representation& rho,
                                           int L) {
  QuasiAxis axis = quasi_axis(gamma);
  EndpointPathsReport rep;

  std::vector<double> params;
  std::vector<ReducedWord> verts;
  for (int n = -L; n <= L; ++n) {
    params.push_back(static_cast<double>(n));
    verts.push_back(axis.vertex(n));
  }
  rep.axis_fit = quasi_fit(params, orbit_distance_matrix(rho, verts));
  rep.axis_fit.scope = "exact axis";

  std::int64_t len = static_cast<std::int64_t>(axis.core.length());
  std::int64_t P = std::max<std::int64_t>(2, L / len);
  std::vector<double> pparams;
  std::vector<ReducedWord> pverts;
  for (std::int64_t n = -P; n <= P; ++n) {
    pparams.push_back(static_cast<double>(n * len));
    pverts.push_back(concat(power(gamma, n), axis.conjugator));
  }
  rep.power_fit = quasi_fit(pparams, orbit_distance_matrix(rho, pverts));
  rep.power_fit.scope = "power path";
  rep.agree = rep.axis_fit.not_embedding == rep.power_fit.not_embedding;
  return rep;
}

}  // namespace repstab
