#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "repstab/families.hpp"
#include "repstab/mobius.hpp"
#include "repstab/tree.hpp"
#include "repstab/word.hpp"

namespace repstab {

enum class TargetKind { H3, CayleyTree };

// A representation of F_k by isometries of the target, together with the
// basepoint of its orbit map.
struct Representation {
  TargetKind target = TargetKind::H3;
  int rank = 2;
  std::vector<Mobius> h3_images;          // one per generator when target == H3
  std::vector<TreeIsometry> tree_images;  // one per generator when target == CayleyTree
  H3Point h3_basepoint{};
  TreePoint tree_basepoint{};             // defaults to the identity vertex
};

Representation make_h3_representation(std::vector<Mobius> images,
                                      H3Point basepoint = H3Point{});
Representation make_tree_representation(std::vector<TreeIsometry> images);

// Built-in fixtures.
Representation schottky_representation(double lambda = 4.0, double rotation_angle = 0.7);
Representation degenerate_representation();            // both generators -> same loxodromic
Representation rotation_loxodromic_representation();   // elliptic + short loxodromic pair
Representation tree_left_multiplication_representation(int rank);

Mobius evaluate_h3(const Representation& rho, const ReducedWord& w);
TreeIsometry evaluate_tree(const Representation& rho, const ReducedWord& w);

// Translation length of rho(w) in the target (eigenvalue formula in H3,
// exact midpoint method in the tree).
double image_translation_length(const Representation& rho, const ReducedWord& w);

// Distance between the orbit-map images of u and v.
double orbit_distance(const Representation& rho, const ReducedWord& u, const ReducedWord& v);

// Conjugated representation h rho h^-1 with the basepoint moved along (H3).
Representation conjugate_representation(const Representation& rho, const Mobius& h);
// rho after phi: generator images become rho(phi(x_i)).
Representation precompose(const Representation& rho, const FreeAutomorphism& phi);

struct OrbitPathReport {
  double kappa = 0.0;                // max_s d(x, rho(s) x)
  std::vector<double> step_lengths;  // consecutive image distances
  bool lipschitz_ok = false;         // every step <= kappa (within 1e-9)
  std::vector<H3Point> h3_points;
  std::vector<TreePoint> tree_points;
};

// Orbit-map image of a geodesic edge-path (consecutive entries must differ
// by one generator; throws std::invalid_argument otherwise).
OrbitPathReport orbit_path(const Representation& rho, const std::vector<ReducedWord>& path);

// Exact axis line of gamma in the Cayley tree: vertex(i) is the point at
// signed arclength i along conjugator * (line of the cyclic core).
struct QuasiAxis {
  ReducedWord gamma;
  ReducedWord core;        // cyclically reduced
  ReducedWord conjugator;  // gamma = conjugator core conjugator^-1

  ReducedWord vertex(std::int64_t i) const;
};

QuasiAxis quasi_axis(const ReducedWord& gamma);  // rejects the identity

struct QuasiFit {
  double K = 1.0;
  double C = 0.0;
  std::size_t witness_i = 0, witness_j = 0;  // binding parameter pair
  bool not_embedding = false;  // fitted K pinned at K_hi: no QI fit at this scale
  std::string scope;
};

inline constexpr double kQuasiKHi = 1000.0;

// Minimal-K-then-minimal-C fit of (1/K)|s-t| - C <= D(s,t) <= K|s-t| + C:
// C(K) = max over pairs of max(D - K Delta, Delta/K - D, 0) is non-increasing
// in K, so the floor is C(K_hi) and the fit takes the least K reaching it.
QuasiFit quasi_fit(const std::vector<double>& params,
                   const std::vector<std::vector<double>>& dist);

struct LocalGlobalReport {
  bool local_pass = false;
  std::size_t violation_i = 0, violation_j = 0;  // first violated window pair
  QuasiFit global;
};

// Checks the (Kp, Cp) inequalities on every pair within parameter width M,
// then reports the unconstrained global fit alongside.
LocalGlobalReport local_global_check(const std::vector<double>& params,
                                     const std::vector<std::vector<double>>& dist, double Kp,
                                     double Cp, double M);

struct ElementDiagnostic {
  ReducedWord member;
  QuasiFit fit;
  bool local_ok = false;  // fit inequalities re-checked on windows of width <= M
};

struct StabilityCertificate {
  std::string family_label;
  int L = 0, M = 0;
  bool passed = false;
  double K = 1.0, C = 0.0;  // worst fit over the family
  std::optional<ReducedWord> failure_witness;
  std::vector<ElementDiagnostic> per_element;
  std::string scope;
};

// Fits the orbit image of each member's axis over [-L, L]; FAILED when any
// member's axis image admits no QI fit (bounded or collapsing image).
StabilityCertificate certify_stability(const Representation& rho, const TestFamily& family,
                                       int L, int M);

struct DisplacementFit {
  double J = 1.0;
  double B = 0.0;
  ReducedWord witness;  // binding member
  bool failed = false;  // lower bound unreachable at this scale
  std::string scope;
};

// Minimax fit of l_S(a)/J - B <= l(rho(a)) <= J l_S(a) + B over the family.
DisplacementFit fit_well_displacing(const Representation& rho, const TestFamily& family);

struct PingPongReport {
  bool ok = false;
  bool length_ok = false;    // min(|u|,|v|) >= 100 delta_S
  bool cross_ok = false;     // <u^{+-1}, v^{+-1}>_e <= min/2 - 20 delta_S
  bool self_u_ok = false;    // <u, u^-1>_e <= |u|/2 - 20 delta_S
  bool self_v_ok = false;
};

PingPongReport ping_pong_check(const ReducedWord& u, const ReducedWord& v, double delta_s = 0.0);

// Smallest N <= n_max with (gamma0^N, h gamma0^-N h^-1) a ping-pong pair.
// Rejects pairs whose cyclic cores are conjugate-power-related up to n_max
// (shared endpoints) with std::invalid_argument.
std::optional<int> ping_pong_search(const ReducedWord& gamma0, const ReducedWord& h, int n_max);

struct AlphaFit {
  std::int64_t alpha = 0;
  ReducedWord witness;  // extremal gamma
  std::size_t checked = 0;
};

// Minimal alpha with |gamma| <= 3 max{l_S(gamma), l_S(u gamma), l_S(v gamma)}
// + alpha for all |gamma| <= L (exhaustive). Requires a ping-pong pair.
AlphaFit l2_alpha_fit(const ReducedWord& u, const ReducedWord& v, int L,
                      std::size_t cap = global_cap());

struct DiscretenessReport {
  bool violation_found = false;
  std::optional<ReducedWord> witness;
  double witness_displacement = 0.0;
  std::int64_t witness_ls = 0;
  double min_jorgensen = 0.0;  // over ordered generator pairs
  double epsilon = 1e-3;
  double theta = 8.0;
  int L = 0;
  std::size_t searched = 0;
};

// Searches commutators (and their powers) with l_S <= L for elements with
// l_S >= theta but displacement < epsilon; cross-references jorgensen_check.
DiscretenessReport discreteness_experiment(const Representation& rho, int L,
                                           double epsilon = 1e-3, double theta = 8.0);

struct EndpointPathsReport {
  QuasiFit axis_fit;
  QuasiFit power_fit;
  bool agree = false;  // both finite or both not_embedding
};

// Compares the orbit-image fit of the exact axis of gamma against that of the
// power path {gamma^n * conjugator} of its minimal conjugacy representative.
EndpointPathsReport endpoint_paths_compare(const ReducedWord& gamma, const Representation& rho,
                                           int L);

}  // namespace repstab
