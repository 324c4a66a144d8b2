#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "normgeo/spaces.hpp"

namespace normgeo {

/// A computation that failed to converge; carries the (lambda, quotient)
/// trace so the caller can see what the schedule produced.
struct numeric_error : std::runtime_error {
  numeric_error(const std::string& what, std::vector<std::pair<double, double>> t)
      : std::runtime_error(what), trace(std::move(t)) {}
  std::vector<std::pair<double, double>> trace;
};

/// One-sided derivatives of the norm at x in direction y:
///   rho_plus  = lim_{h -> 0+} (||x + h y|| - ||x||) / h
///   rho_minus = lim_{h -> 0-} (||x + h y|| - ||x||) / h
/// Always rho_minus <= rho_plus (convexity).
struct RhoResult {
  double rho_plus = 0.0;
  double rho_minus = 0.0;
  enum class Method { closed, numeric } method = Method::closed;
  /// numeric only: the (lambda, quotient) pairs actually evaluated,
  /// plus-side first then minus-side.
  std::vector<std::pair<double, double>> step_trace;
};

/// Difference-quotient limits at lambda_k = 2^-k, k = 4..48, stopping once two
/// successive quotients differ by < 1e-10 (norms evaluated in quad precision).
/// x = 0 returns (+||y||, -||y||) directly. Throws numeric_error with the
/// trace if a side fails to settle, which no lp-type space should produce.
RhoResult rho_numeric(const Space& s, std::span<const double> x,
                      std::span<const double> y);

/// Closed forms:
///   1 < p < inf : rho+ = rho- = [y, x]_p / ||x||
///   p = inf     : rho+ = max over tied-max i of sgn(x_i) y_i, rho- = min
///   p = 1       : S = sum_{x_i != 0} sgn(x_i) y_i, Z = sum_{x_i = 0} |y_i|,
///                 rho+ = S + Z, rho- = S - Z
///   sum1        : componentwise additive over the children (a zero child
///                 contributes +-||y_child||)
/// Throws domain_error for x = 0 and input_error for prodmax composites.
RhoResult rho_closed(const Space& s, std::span<const double> x,
                     std::span<const double> y);

/// Whether rho_closed supports s (an lp leaf or a sum1 tree of supported spaces).
bool rho_closed_available(const Space& s);

/// rho_closed when available and x != 0, otherwise rho_numeric.
RhoResult rho_auto(const Space& s, std::span<const double> x,
                   std::span<const double> y);

/// The direction-dependent sign conditions evaluated literally, independent of
/// the closed derivative formulas:
///   1 < p < inf : both flags test sgn( sum_i y_i x_i |x_i|^(p-2) )
///   p = inf     : exists a tied-max index i with sgn(x_i) y_i >= 0 (resp <= 0)
///   p = 1       : supports disjoint, or S + Z >= 0 (resp S - Z <= 0)
/// lp leaves only; throws input_error for composites, domain_error for x = 0.
struct SignConditions {
  bool plus_nonneg = false;   // holds iff rho_plus >= 0
  bool minus_nonpos = false;  // holds iff rho_minus <= 0
};
SignConditions rho_sign_conditions(const Space& s, std::span<const double> x,
                                   std::span<const double> y);

}  // namespace normgeo
