#pragma once

#include <optional>
#include <vector>

#include "normgeo/derivatives.hpp"
#include "normgeo/spaces.hpp"

namespace normgeo {

/// Result of a minimization-based orthogonality test.
struct OrthoVerdict {
  bool holds = false;
  double lambda_star = 0.0;  // argmin of ||x + lambda y||
  double min_norm = 0.0;     // value at lambda_star
  double dip = 0.0;          // ||x|| - min_norm (>= 0 up to float noise)
  double tol = 0.0;          // tolerance the verdict used
};

/// x is orthogonal to y iff ||x + lambda y|| >= ||x|| for every lambda.
/// Decided by golden-section minimization over [-L, L], L = 2||x||/||y|| + 1
/// (any lambda outside that bracket gives ||x + lambda y|| >= ||x|| by the
/// triangle inequality, so the global minimum is inside). holds iff the
/// minimum is >= ||x|| - tol.
OrthoVerdict is_birkhoff(const Space& s, std::span<const double> x,
                         std::span<const double> y, double tol = 1e-8);

/// y lies in the positive (negative) part of x: ||x + lambda y|| >= ||x||
/// for all lambda >= 0 (resp. lambda <= 0). Decided through the equivalent
/// derivative sign: rho_plus(x,y) >= -tol (resp. rho_minus(x,y) <= tol).
bool in_positive_part(const Space& s, std::span<const double> x,
                      std::span<const double> y, double tol = 1e-10);
bool in_negative_part(const Space& s, std::span<const double> x,
                      std::span<const double> y, double tol = 1e-10);

/// Strong orthogonality: ||x + lambda y|| > ||x|| strictly for lambda != 0.
/// For polyhedral spaces (p in {1, inf} leaves, possibly sum1-combined) this
/// is equivalent to strict slopes rho_plus > 0 > rho_minus; for a smooth lp
/// leaf it coincides with plain orthogonality (plus y != 0). Other spaces
/// have no implemented criterion and raise input_error.
bool is_strong_birkhoff(const Space& s, std::span<const double> x,
                        std::span<const double> y, double tol = 1e-10);

/// Definitional check of the same relation on a finite grid: lambda runs over
/// points_per_side log-spaced magnitudes in [1e-6, L] on each side, norms are
/// evaluated in quad precision, and every sampled ||x + lambda y|| must
/// exceed ||x||. A flat segment shorter than the smallest grid step is
/// invisible to this oracle; callers pair it with a slope margin.
bool is_strong_birkhoff_grid(const Space& s, std::span<const double> x,
                             std::span<const double> y,
                             int points_per_side = 500);

/// Approximate orthogonality with parameter eps in [0,1):
///   ||x + lambda y||^2 >= ||x||^2 - 2 eps ||x|| ||lambda y||  for all lambda.
struct ApproxVerdict {
  bool holds = false;
  double lambda_star = 0.0;
  /// min over lambda of ||x+ly||^2 - ||x||^2 + 2 eps ||x|| ||l y|| ; the
  /// relation holds iff this is >= -tol (scaled by max(1, ||x||^2)).
  double worst_gap = 0.0;
};
ApproxVerdict is_approx_birkhoff(const Space& s, std::span<const double> x,
                                 std::span<const double> y, double eps,
                                 double tol = 1e-8);

/// Pointwise variant of orthogonality for unit x, y: x is related to y iff
/// x is orthogonal to y and x is NOT orthogonal to any proper convex
/// combination t y + (1-t) x, t in (0,1). Equivalent to rho_minus(x,y) = 0.
/// Inputs are normalized to the unit sphere internally.
bool is_b_star(const Space& s, std::span<const double> x,
               std::span<const double> y, double tol = 1e-9);

/// The same relation read off its definition on a t-grid t_j = j/(grid+1),
/// j = 1..grid. Violations with |rho_minus| below roughly 1/grid sit between
/// grid points and are invisible; callers must keep a margin.
bool is_b_star_definitional(const Space& s, std::span<const double> x,
                            std::span<const double> y, int grid = 512);

/// Derivative-based orthogonality relations:
///   plus:  rho_plus(x,y) = 0,  minus: rho_minus(x,y) = 0,
///   mean:  rho_plus(x,y) + rho_minus(x,y) = 0,
/// each within tol.
struct RhoOrthogonality {
  bool plus = false;
  bool minus = false;
  bool mean = false;
};
RhoOrthogonality rho_orthogonal(const Space& s, std::span<const double> x,
                                std::span<const double> y, double tol = 1e-10);

/// Extreme points of the set of norming functionals of x (functionals f with
/// dual norm 1 and f(x) = ||x||). lp leaves only:
///   1 < p < inf : the unique functional f_i = sgn(x_i) |x_i|^(p-1) / ||x||^(p-1)
///   p = inf     : sgn(x_i) e_i over the max-attaining indices
///   p = 1       : f_i = sgn(x_i) on the support, each off-support entry +-1;
///                 the enumeration is capped at 2^10 patterns (truncated=true).
struct SupportSet {
  std::vector<vec> extreme;
  bool truncated = false;
  bool is_singleton() const { return extreme.size() == 1 && !truncated; }
};
SupportSet support_set(const Space& s, std::span<const double> x);

/// Functional route to orthogonality: some norming functional of x kills y,
/// which happens iff 0 lies within tol of the interval
/// [rho_minus(x,y), rho_plus(x,y)].
bool check_james(const Space& s, std::span<const double> x,
                 std::span<const double> y, double tol = 1e-9);

/// The set of directions w in span{x, y} with x orthogonal to w is a union
/// of a cone and its negative. Given unit x, y with x orthogonal to y, scan
/// w(theta) = cos(theta) x + sin(theta) y (y sits at theta = pi/2), locate
/// the arc component containing y, and return its boundary directions,
/// v1 at the clockwise end and v2 at the counterclockwise end, normalized.
/// At a smooth x the component collapses and v1 = v2 = y.
struct Cone2D {
  vec v1, v2;
  double theta1 = 0.0, theta2 = 0.0;  // frame angles of v1, v2
  bool degenerate = false;            // singleton component (smooth case)
};
Cone2D orthogonality_cone(const Space& s, std::span<const double> x,
                          std::span<const double> y, int resolution = 4096);

/// Randomized falsifiers for the symmetric-point characterizations.
/// Left: a counterexample is y with rho_plus(x,y) >= 0 but rho_plus(y,x) < 0
/// robustly, or rho_minus(x,y) <= 0 but rho_minus(y,x) > 0 robustly.
/// Right: the same clauses with the argument order swapped. Hypotheses are
/// accepted with slack 1e-12, conclusions must fail by at least 1e-8, so
/// boundary instances are never reported. Absence of a counterexample after
/// `trials` samples is evidence, not proof.
std::optional<vec> falsify_left_symmetric(const Space& s,
                                          std::span<const double> x,
                                          int trials, uint64_t seed);
std::optional<vec> falsify_right_symmetric(const Space& s,
                                           std::span<const double> x,
                                           int trials, uint64_t seed);

/// Whether the norm is differentiable at x (equivalently the norming
/// functional is unique). Closed rules per space kind; x = 0 raises
/// domain_error.
bool is_smooth_point(const Space& s, std::span<const double> x);

}  // namespace normgeo
