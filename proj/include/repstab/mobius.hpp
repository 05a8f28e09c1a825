#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace repstab {

using Complex = std::complex<double>;

// Element of PSL(2,C), stored as an SL(2,C) matrix with ad - bc = 1
// (renormalized after every product). Equality is projective.
struct Mobius {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};
};

// Normalizes the determinant to 1; throws std::invalid_argument when the
// matrix is singular (|det| below 1e-300).
Mobius make_mobius(Complex a, Complex b, Complex c, Complex d);
Mobius mobius_identity();
Mobius mobius_mul(const Mobius& g, const Mobius& h);  // g * h, renormalized
Mobius mobius_inverse(const Mobius& g);
Complex mobius_trace(const Mobius& g);
bool mobius_equal(const Mobius& g, const Mobius& h, double tol = 1e-9);  // up to sign
bool mobius_is_identity(const Mobius& g, double tol = 1e-9);

// Upper half-space model: boundary coordinate x in C, height t > 0.
struct H3Point {
  Complex x{0.0};
  double t = 1.0;
};

// cosh d = 1 + (|x_p - x_q|^2 + (t_p - t_q)^2) / (2 t_p t_q).
double h3_distance(const H3Point& p, const H3Point& q);

// Poincare extension of the Mobius map, evaluated on the quaternion x + t j.
// Throws std::overflow_error when the image height underflows to zero.
H3Point act(const Mobius& g, const H3Point& p);

enum class IsometryKind { identity, elliptic, parabolic, loxodromic };

struct BoundaryPoint {
  Complex z{0.0};
  bool at_infinity = false;
};

struct IsometryClass {
  IsometryKind kind = IsometryKind::identity;
  double translation_length = 0.0;
  std::vector<BoundaryPoint> fixed_points;  // 2 for loxodromic/elliptic, 1 for parabolic
  bool near_boundary = false;  // |tr^2 - 4| within tol: ill-conditioned decision
  Complex trace_squared{4.0};
};

// Trace trichotomy: tr^2 real in [0,4) -> elliptic; tr^2 = 4 (within tol) and
// g != +-I -> parabolic; otherwise loxodromic with length 2 log|lambda_max|.
IsometryClass classify(const Mobius& g, double tol = 1e-9);

const char* isometry_kind_name(IsometryKind k);

struct StableNormReport {
  double value = 0.0;             // difference estimate (d_{2n} - d_n)/n at the top
  std::vector<double> ratios;     // d(o, g^(2^i) o) / 2^i along the squaring ladder
  bool precision_loss = false;    // unscaled entries would have exceeded 1e153
};

// d(o, g^n o)/n along the repeated-squaring ladder up to n_max (rounded up to
// a power of two, n_max >= 8). Powers are kept in a log-scaled form so the
// ladder never overflows; the headline value is the telescoped difference of
// the last two rungs, which cancels the additive offset of the raw ratio.
StableNormReport stable_norm(const Mobius& g, const H3Point& o, std::int64_t n_max);

struct TranslationStableReport {
  double stable = 0.0;   // N(g)
  double l_hat = 0.0;    // min sampled displacement (upper estimate of l(g))
  double delta_hat = 0.0;
  bool ok = false;       // N <= l_hat <= N + 16 delta_hat (within slack)
};

TranslationStableReport translation_vs_stable_check(const Mobius& g, double delta_hat);

// Max over sampled quadruples (w;x,y,z) in a radius-10 ball of
// min{<x,y>_w, <y,z>_w} - <x,z>_w, clamped at 0. Deterministic per seed.
double delta_estimate(int n_samples, std::uint64_t seed);

// |tr^2(g) - 4| + |tr([g,h]) - 2|; values < 1 flag a candidate witness
// against discreteness when <g,h> is non-elementary.
double jorgensen_check(const Mobius& g, const Mobius& h);

// Matrix literal "[[1,1],[0,1]]" with complex entries like "1+2i", "-0.5i".
Mobius parse_mobius(std::string_view text);
std::string format_mobius(const Mobius& g);
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

}  // namespace repstab
