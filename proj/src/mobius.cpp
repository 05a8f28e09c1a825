#include "repstab/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace repstab {

namespace {

constexpr double kLogPrecisionLimit = 352.28;  // log(1e153)

double sq(double x) { return x * x; }

// A Mobius matrix held as exp(logscale) * u, with the entries of u kept at
// magnitude ~1 so the squaring ladder never overflows.
struct ScaledMobius {
  Mobius u;
  double logscale = 0.0;

  double max_entry() const {
    return std::max(std::max(std::abs(u.a), std::abs(u.b)),
                    std::max(std::abs(u.c), std::abs(u.d)));
  }
  void renorm() {
    double m = max_entry();
    if (m <= 0.0) throw std::invalid_argument("zero matrix in scaled power");
    u.a /= m;
    u.b /= m;
    u.c /= m;
    u.d /= m;
    logscale += std::log(m);
  }
  void square() {
    Mobius s;
    s.a = u.a * u.a + u.b * u.c;
    s.b = u.a * u.b + u.b * u.d;
    s.c = u.c * u.a + u.d * u.c;
    s.d = u.c * u.b + u.d * u.d;
    u = s;
    logscale *= 2.0;
    renorm();
  }
};

double frob_sq(const Mobius& g) {
  return std::norm(g.a) + std::norm(g.b) + std::norm(g.c) + std::norm(g.d);
}

// d(j, M j) for M = exp(logscale) * u with det(M) = 1, via
// cosh d = ||M||_F^2 / 2, evaluated in the log domain when large.
double log_scaled_distance_from_j(const Mobius& u, double logscale) {
  double log_cosh = 2.0 * logscale + std::log(frob_sq(u) / 2.0);
  if (log_cosh > 30.0) return log_cosh + std::log(2.0);
  double ch = std::exp(log_cosh);
  return std::acosh(std::max(1.0, ch));
}

Mobius raw_mul(const Mobius& g, const Mobius& h) {
  Mobius r;
  r.a = g.a * h.a + g.b * h.c;
  r.b = g.a * h.b + g.b * h.d;
  r.c = g.c * h.a + g.d * h.c;
  r.d = g.c * h.b + g.d * h.d;
  return r;
}

// Isometry moving j to o, used to base the stable norm at arbitrary points.
Mobius basepoint_shift(const H3Point& o) {
  double s = std::sqrt(o.t);
  return Mobius{Complex(s), o.x / s, Complex(0.0), Complex(1.0 / s)};
}

}  // namespace

Mobius make_mobius(Complex a, Complex b, Complex c, Complex d) {
  Complex det = a * d - b * c;
  if (std::abs(det) < 1e-300) throw std::invalid_argument("singular Mobius matrix");
  Complex s = std::sqrt(det);
  return Mobius{a / s, b / s, c / s, d / s};
}

Mobius mobius_identity() { return Mobius{}; }

Mobius mobius_mul(const Mobius& g, const Mobius& h) {
  // No determinant renormalization here: both factors already have det 1, so
  // the product does too. Recomputing the determinant from large entries is
  // pure cancellation noise and would corrupt long products.
  return raw_mul(g, h);
}

Mobius mobius_inverse(const Mobius& g) { return Mobius{g.d, -g.b, -g.c, g.a}; }

Complex mobius_trace(const Mobius& g) { return g.a + g.d; }

bool mobius_equal(const Mobius& g, const Mobius& h, double tol) {
  auto close = [tol](const Mobius& p, const Mobius& q) {
    return std::abs(p.a - q.a) <= tol && std::abs(p.b - q.b) <= tol &&
           std::abs(p.c - q.c) <= tol && std::abs(p.d - q.d) <= tol;
  };
  Mobius neg{-h.a, -h.b, -h.c, -h.d};
  return close(g, h) || close(g, neg);
}

bool mobius_is_identity(const Mobius& g, double tol) {
  return mobius_equal(g, mobius_identity(), tol);
}

double h3_distance(const H3Point& p, const H3Point& q) {
  double num = std::norm(p.x - q.x) + sq(p.t - q.t);
  double ch = 1.0 + num / (2.0 * p.t * q.t);
  return std::acosh(std::max(1.0, ch));
}

H3Point act(const Mobius& g, const H3Point& p) {
  Complex cxd = g.c * p.x + g.d;
  double den = std::norm(cxd) + std::norm(g.c) * sq(p.t);
  H3Point out;
  out.x = ((g.a * p.x + g.b) * std::conj(cxd) + g.a * std::conj(g.c) * sq(p.t)) / den;
  out.t = p.t / den;
  if (!(out.t > 0.0) || !std::isfinite(out.t))
    throw std::overflow_error("height underflow in Mobius action");
  return out;
}

IsometryClass classify(const Mobius& g, double tol) {
  IsometryClass r;
  Complex tr = mobius_trace(g);
  r.trace_squared = tr * tr;
  if (mobius_is_identity(g, tol)) {
    r.kind = IsometryKind::identity;
    return r;
  }
  r.near_boundary = std::abs(r.trace_squared - Complex(4.0)) < tol;

  auto boundary_roots = [&]() -> std::vector<BoundaryPoint> {
    // Fixed points on the sphere at infinity: c z^2 + (d-a) z - b = 0.
    if (std::abs(g.c) <= 1e-14) {
      std::vector<BoundaryPoint> fp{{Complex(0.0), true}};
      if (std::abs(g.a - g.d) > tol) fp.push_back({g.b / (g.d - g.a), false});
      return fp;
    }
    Complex s = std::sqrt(r.trace_squared - Complex(4.0));
    Complex z1 = ((g.a - g.d) + s) / (2.0 * g.c);
    Complex z2 = ((g.a - g.d) - s) / (2.0 * g.c);
    if (std::abs(z1 - z2) <= tol) return {{z1, false}};
    return {{z1, false}, {z2, false}};
  };

  if (r.near_boundary) {
    r.kind = IsometryKind::parabolic;
    if (std::abs(g.c) <= 1e-14)
      r.fixed_points = {{Complex(0.0), true}};
    else
      r.fixed_points = {{(g.a - g.d) / (2.0 * g.c), false}};
    return r;
  }
  if (std::abs(r.trace_squared.imag()) <= tol && r.trace_squared.real() >= 0.0 &&
      r.trace_squared.real() < 4.0) {
    r.kind = IsometryKind::elliptic;
    r.fixed_points = boundary_roots();
    return r;
  }

  r.kind = IsometryKind::loxodromic;
  Complex s = std::sqrt(r.trace_squared - Complex(4.0));
  Complex l1 = (tr + s) / 2.0;
  Complex l2 = (tr - s) / 2.0;
  Complex lmax = std::abs(l1) >= std::abs(l2) ? l1 : l2;
  r.translation_length = 2.0 * std::log(std::abs(lmax));
  if (std::abs(g.c) > 1e-14) {
    Complex att = (lmax - g.d) / g.c;
    Complex rep = ((std::abs(l1) >= std::abs(l2) ? l2 : l1) - g.d) / g.c;
    r.fixed_points = {{att, false}, {rep, false}};
  } else {
    // Diagonalizable upper-triangular case: fixed points are infinity and
    // b/(d-a); infinity attracts iff |a| > |d|.
    BoundaryPoint inf{Complex(0.0), true};
    BoundaryPoint fin{g.b / (g.d - g.a), false};
    if (std::abs(g.a) >= std::abs(g.d))
      r.fixed_points = {inf, fin};
    else
      r.fixed_points = {fin, inf};
  }
  return r;
}

const char* isometry_kind_name(IsometryKind k) {
  switch (k) {
    case IsometryKind::identity: return "identity";
    case IsometryKind::elliptic: return "elliptic";
    case IsometryKind::parabolic: return "parabolic";
    case IsometryKind::loxodromic: return "loxodromic";
  }
  return "unknown";
}

StableNormReport stable_norm(const Mobius& g, const H3Point& o, std::int64_t n_max) {
  if (n_max < 8) throw std::invalid_argument("stable_norm requires n_max >= 8");
  int K = 0;
  while ((std::int64_t{1} << K) < n_max) ++K;

  Mobius h = basepoint_shift(o);
  Mobius h_inv = mobius_inverse(h);

  StableNormReport rep;
  ScaledMobius p{g, 0.0};
  p.renorm();
  double prev_dist = 0.0;
  double dist = 0.0;
  for (int i = 1; i <= K; ++i) {
    p.square();
    if (p.logscale + std::log(p.max_entry()) > kLogPrecisionLimit) rep.precision_loss = true;
    Mobius conj = raw_mul(h_inv, raw_mul(p.u, h));
    prev_dist = dist;
    dist = log_scaled_distance_from_j(conj, p.logscale);
    rep.ratios.push_back(dist / static_cast<double>(std::int64_t{1} << i));
  }
  double half = static_cast<double>(std::int64_t{1} << (K - 1));
  rep.value = std::max(0.0, (dist - prev_dist) / half);
  return rep;
}

TranslationStableReport translation_vs_stable_check(const Mobius& g, double delta_hat) {
  TranslationStableReport r;
  r.delta_hat = delta_hat;
  r.stable = stable_norm(g, H3Point{}, 1 << 16).value;

  std::vector<H3Point> samples{{Complex(0.0), 1.0}, {Complex(0.0), std::exp(1.0)},
                               {Complex(1.0, 0.0), 1.0}, {Complex(0.0, 1.0), 2.0}};
  IsometryClass cls = classify(g);
  // Points on (or near) the invariant axis realize the infimum of the
  // displacement; parabolic displacement decays toward the fixed point.
  if (cls.fixed_points.size() == 2 && !cls.fixed_points[0].at_infinity &&
      !cls.fixed_points[1].at_infinity) {
    Complex z1 = cls.fixed_points[0].z, z2 = cls.fixed_points[1].z;
    Complex m = (z1 + z2) / 2.0;
    double rad = std::abs(z2 - z1) / 2.0;
    if (rad > 1e-12) {
      Complex u = (z2 - z1) / (2.0 * rad);
      for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0})
        samples.push_back({m + rad * std::tanh(s) * u, rad / std::cosh(s)});
    }
  } else if (cls.fixed_points.size() == 2) {
    Complex z = cls.fixed_points[0].at_infinity ? cls.fixed_points[1].z
                                                : cls.fixed_points[0].z;
    for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) samples.push_back({z, std::exp(s)});
  } else if (cls.fixed_points.size() == 1) {
    if (cls.fixed_points[0].at_infinity) {
      for (double t : {10.0, 100.0, 1000.0, 10000.0}) samples.push_back({Complex(0.0), t});
    } else {
      for (double t : {0.1, 0.01, 0.001, 0.0001})
        samples.push_back({cls.fixed_points[0].z, t});
    }
  }

  double best = h3_distance(samples[0], act(g, samples[0]));
  for (const H3Point& p : samples) best = std::min(best, h3_distance(p, act(g, p)));
  r.l_hat = best;
  r.ok = r.stable <= r.l_hat + 1e-6 && r.l_hat <= r.stable + 16.0 * delta_hat + 1e-6;
  return r;
}

double delta_estimate(int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  H3Point base{};
  auto sample_point = [&]() {
    while (true) {
      H3Point p{Complex(coord(rng), coord(rng)), std::exp(coord(rng))};
      if (h3_distance(p, base) <= 10.0) return p;
    }
  };
  double best = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    H3Point w = sample_point(), x = sample_point(), y = sample_point(), z = sample_point();
    auto gp = [&](const H3Point& p, const H3Point& q) {
      return 0.5 * (h3_distance(p, w) + h3_distance(q, w) - h3_distance(p, q));
    };
    double defect = std::min(gp(x, y), gp(y, z)) - gp(x, z);
    best = std::max(best, defect);
  }
  return best;
}

double jorgensen_check(const Mobius& g, const Mobius& h) {
  Mobius comm = mobius_mul(mobius_mul(g, h), mobius_mul(mobius_inverse(g), mobius_inverse(h)));
  Complex tr2 = mobius_trace(g) * mobius_trace(g);
  return std::abs(tr2 - Complex(4.0)) + std::abs(mobius_trace(comm) - Complex(2.0));
}

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty complex literal");

  const char* p = s.c_str();
  auto read_signed = [&](double& out, bool& bare_sign) {
    bare_sign = false;
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) {
      // No digits: accept a bare sign (coefficient 1) ahead of 'i'.
      double sign = 1.0;
      if (*p == '+' || *p == '-') {
        if (*p == '-') sign = -1.0;
        ++p;
      }
      out = sign;
      bare_sign = true;
      return;
    }
    p = end;
    out = v;
  };

  double first = 0.0;
  bool bare = false;
  read_signed(first, bare);
  if (*p == 'i') {
    ++p;
    if (*p != '\0') throw std::invalid_argument("trailing characters in complex literal: " + s);
    return Complex(0.0, first);
  }
  if (bare) throw std::invalid_argument("malformed complex literal: " + s);
  if (*p == '\0') return Complex(first, 0.0);

  double second = 0.0;
  bool bare2 = false;
  if (*p != '+' && *p != '-')
    throw std::invalid_argument("malformed complex literal: " + s);
  read_signed(second, bare2);
  if (*p != 'i') throw std::invalid_argument("malformed complex literal: " + s);
  ++p;
  if (*p != '\0') throw std::invalid_argument("trailing characters in complex literal: " + s);
  return Complex(first, second);
}

std::string format_complex(Complex z) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // normalize -0
    return std::string(buf);
  };
  if (z.imag() == 0.0) return num(z.real());
  std::string im = num(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
  return num(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

Mobius parse_mobius(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  std::vector<std::string> entries;
  std::string cur;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '[') {
      if (++depth > 2) throw std::invalid_argument("matrix literal: too many '[' at position " +
                                                   std::to_string(i));
    } else if (ch == ']' || (ch == ',' && depth == 2)) {
      if (ch == ']') --depth;
      if (depth < 0) throw std::invalid_argument("matrix literal: unmatched ']' at position " +
                                                 std::to_string(i));
      if (!cur.empty()) {
        entries.push_back(cur);
        cur.clear();
      }
    } else if (ch == ',' && depth == 1) {
      // separator between the two rows
    } else {
      cur.push_back(ch);
    }
  }
  if (depth != 0 || entries.size() != 4)
    throw std::invalid_argument("matrix literal must have the form [[a,b],[c,d]]");
  return make_mobius(parse_complex(entries[0]), parse_complex(entries[1]),
                     parse_complex(entries[2]), parse_complex(entries[3]));
}

std::string format_mobius(const Mobius& g) {
  return "[[" + format_complex(g.a) + "," + format_complex(g.b) + "],[" + format_complex(g.c) +
         "," + format_complex(g.d) + "]]";
}

}  // namespace repstab
