#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "normgeo/spaces.hpp"

namespace normgeo {

/// A bilinear map T : X x Y -> Z stored as the 3-index tensor
/// c[k][i][j] = (T(e_i, e_j))_k, flattened row-major as (k*dimX + i)*dimY + j.
/// All three spaces must have dimension >= 2.
class BilinearOp {
 public:
  BilinearOp(Space X, Space Y, Space Z, std::vector<double> coeffs);

  /// T(x, y) = f(x) g(y) z0 with f in X*, g in Y*.
  static BilinearOp rank_one(Space X, Space Y, Space Z,
                             std::vector<double> f, std::vector<double> g,
                             std::vector<double> z0);

  vec apply(std::span<const double> x, std::span<const double> y) const;

  const Space& domain_x() const { return x_; }
  const Space& domain_y() const { return y_; }
  const Space& codomain() const { return z_; }

  double coeff(int k, int i, int j) const;
  const std::vector<double>& coeffs() const { return c_; }

  /// this + lambda * other (same spaces required).
  BilinearOp combined(double lambda, const BilinearOp& other) const;
  BilinearOp scaled(double a) const;

  /// Matrix of the linear map x -> T(x, y), rows indexed by Z.
  std::vector<double> slice_x(std::span<const double> y) const;
  /// Matrix of the linear map y -> T(x, y), rows indexed by Z.
  std::vector<double> slice_y(std::span<const double> x) const;

 private:
  Space x_, y_, z_;
  std::vector<double> c_;
};

enum class NormMethod { alternating, multistart, grid };

/// Outcome of a norm computation. The search value is always a lower bound
/// on the true operator norm; only the grid method is an (approximate)
/// two-sided oracle at small dimension.
struct NormReport {
  double value = 0.0;
  vec x_star, y_star;   // attaining pair found, unit in their spaces
  NormMethod method = NormMethod::multistart;
  int restarts = 0;     // outer starts actually run
  long sweeps = 0;      // alternating half-sweeps executed in total
  bool converged = true;
};

/// ||T|| = sup ||T(x,y)|| over the unit spheres.
///   alternating: from `restarts` random starts, alternately maximize over x
///     (y fixed) and over y by duality ascent, 8 random inner restarts per
///     half-sweep, until a full sweep improves by < 1e-12.
///   multistart: scores 16*restarts random pairs, polishes the best
///     `restarts` of them with the alternating loop; the default.
///   grid: dense angular mesh on each factor sphere (factors of dimension
///     <= 3 only); reference oracle, resolution `grid_resolution` per circle.
NormReport operator_norm(const BilinearOp& T,
                         NormMethod method = NormMethod::multistart,
                         uint64_t seed = 0, int restarts = 32,
                         int grid_resolution = 721);

/// Norm attainment set, represented by clustered found maximizers.
/// Each (x, y) is canonicalized modulo sign flips of the factors (the first
/// coordinate of magnitude > 1e-9 is made positive in x, then in y), greedily
/// clustered at `cluster_radius` in the sup distance, and sorted; a single
/// representative corresponds to attainment exactly on one orbit
/// {(+-x0, +-y0)}.
struct AttainmentSet {
  std::vector<std::pair<vec, vec>> representatives;
  double norm_value = 0.0;
  double tol = 0.0;
  double cluster_radius = 0.0;
};
AttainmentSet attainment_set(const BilinearOp& T, uint64_t seed = 0,
                             int restarts = 64, double tol = 1e-6,
                             double cluster_radius = 1e-3);

/// Operator-level orthogonality, two independent routes.
/// Numeric route: golden-section minimization of lambda -> ||T + lambda A||
/// (computed by multistart) over the standard bracket; holds iff the minimum
/// stays >= ||T|| - tol. Certificate route: by the attainment-set
/// characterization, T is orthogonal to A iff some attaining pair puts
/// A(x,y) in the positive part of T(x,y) and some (possibly other) pair puts
/// it in the negative part.
struct OperatorOrthoVerdict {
  bool numeric_holds = false;
  double lambda_star = 0.0;
  double min_norm = 0.0;
  double dip = 0.0;  // ||T|| - min over lambda
  double norm_t = 0.0;

  bool certificate_holds = false;
  int plus_index = -1;   // representative index certifying the positive part
  int minus_index = -1;  // representative index certifying the negative part
  std::vector<std::pair<vec, vec>> representatives;
};
OperatorOrthoVerdict is_operator_birkhoff(const BilinearOp& T,
                                          const BilinearOp& A,
                                          double tol = 1e-8,
                                          uint64_t seed = 0);

/// The norming-sequence characterization, read at finite dimension where
/// norming sequences converge into the attainment set: clause (a) holds when
/// some attaining pair annihilates A (||A(x,y)|| ~ 0), clause (b) is the
/// two-pair positive/negative-part certificate. Either clause certifies
/// orthogonality.
struct NormingReport {
  bool clause_a = false;
  bool clause_b = false;
  bool certified = false;  // clause_a || clause_b
  int a_index = -1;        // representative annihilating A
  int plus_index = -1;
  int minus_index = -1;
  std::vector<std::pair<vec, vec>> representatives;
};
NormingReport norming_sequence_conditions(const BilinearOp& T,
                                          const BilinearOp& A,
                                          int samples = 64, uint64_t seed = 0);

/// T is a smooth point of the operator-norm unit sphere iff the norm is
/// attained on exactly one sign orbit (x0, y0) and T(x0, y0) is a smooth
/// point of Z.
struct OperatorSmoothVerdict {
  bool smooth = false;
  int representative_count = 0;
  bool image_smooth = false;
  std::string diagnosis;  // empty when smooth
};
OperatorSmoothVerdict is_operator_smooth(const BilinearOp& T,
                                         uint64_t seed = 0);

/// Approximate operator orthogonality, eps in [0,1):
///   ||T + lambda A||^2 >= ||T||^2 - 2 eps ||T|| ||A|| |lambda| for all lambda.
/// Numeric route minimizes the gap; certificate route checks the two-pair
/// characterization (one pair handles lambda >= 0, one lambda <= 0) on a
/// log-spaced lambda grid over the attainment representatives.
struct OperatorApproxVerdict {
  bool holds = false;
  double lambda_star = 0.0;
  double worst_gap = 0.0;
  double norm_t = 0.0, norm_a = 0.0;

  bool certificate_holds = false;
  int plus_index = -1;
  int minus_index = -1;
};
OperatorApproxVerdict is_operator_approx_birkhoff(const BilinearOp& T,
                                                  const BilinearOp& A,
                                                  double eps,
                                                  double tol = 1e-8,
                                                  uint64_t seed = 0);

}  // namespace normgeo
