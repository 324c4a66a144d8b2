#include "normgeo/derivatives.hpp"

#include <algorithm>
#include <cmath>

#include "quad_eval.hpp"

namespace normgeo {

namespace {

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return t == 0.0; });
}

// One side of the quotient schedule. sign is +1 or -1.
double quotient_limit(const Space& s, std::span<const double> x,
                      std::span<const double> y, __float128 nx, int sign,
                      std::vector<std::pair<double, double>>& trace) {
  __float128 prev = 0;
  bool have_prev = false;
  for (int k = 4; k <= 48; ++k) {
    __float128 lam = ldexpq(1.0Q, -k) * sign;
    __float128 q = (detail::qnorm_shifted(s, x, y, lam) - nx) / lam;
    trace.emplace_back(static_cast<double>(lam), static_cast<double>(q));
    if (have_prev && fabsq(q - prev) < 1e-10Q) return static_cast<double>(q);
    prev = q;
    have_prev = true;
  }
  throw numeric_error("derivative quotients did not settle", trace);
}

void split_spans(const Space& s, std::span<const double> v,
                 std::span<const double>& l, std::span<const double>& r) {
  int nl = s.left().dim();
  l = v.subspan(0, nl);
  r = v.subspan(nl);
}

}  // namespace

RhoResult rho_numeric(const Space& s, std::span<const double> x,
                      std::span<const double> y) {
  if (static_cast<int>(x.size()) != s.dim() ||
      static_cast<int>(y.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  RhoResult r;
  r.method = RhoResult::Method::numeric;
  if (all_zero(x)) {
    double ny = norm(s, y);
    r.rho_plus = ny;
    r.rho_minus = -ny;
    return r;
  }
  __float128 nx = detail::qnorm_shifted(s, x, y, 0.0Q);
  r.rho_plus = quotient_limit(s, x, y, nx, +1, r.step_trace);
  r.rho_minus = quotient_limit(s, x, y, nx, -1, r.step_trace);
  return r;
}

bool rho_closed_available(const Space& s) {
  if (s.is_lp()) return true;
  if (s.kind() == Space::Kind::sum1)
    return rho_closed_available(s.left()) && rho_closed_available(s.right());
  return false;
}

namespace {

// lp leaves; assumes x != 0 on this leaf.
void rho_closed_lp(const Space& s, std::span<const double> x,
                   std::span<const double> y, double& plus, double& minus) {
  if (s.p().is_inf()) {
    double best_hi = -std::numeric_limits<double>::infinity();
    double best_lo = std::numeric_limits<double>::infinity();
    for (int i : max_index_set(x)) {
      double t = sgn(x[i]) * y[i];
      best_hi = std::max(best_hi, t);
      best_lo = std::min(best_lo, t);
    }
    plus = best_hi;
    minus = best_lo;
    return;
  }
  if (s.p().is_one()) {
    double scale = 0.0;
    for (double xi : x) scale += std::abs(xi);
    double sum_signed = 0.0, sum_off = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      if (effectively_zero(x[i], scale))
        sum_off += std::abs(y[i]);
      else
        sum_signed += sgn(x[i]) * y[i];
    }
    plus = sum_signed + sum_off;
    minus = sum_signed - sum_off;
    return;
  }
  double v = sip_lp(y, x, s.p().value()) / norm(s, x);
  plus = v;
  minus = v;
}

// Recursive over sum1 trees. Adds the node's contribution to plus/minus.
void rho_closed_node(const Space& s, std::span<const double> x,
                     std::span<const double> y, double& plus, double& minus) {
  if (s.is_lp()) {
    if (all_zero(x)) {
      // Derivative of ||.|| at 0 in direction y is +-||y||.
      double ny = norm(s, y);
      double p = ny, m = -ny;
      plus += p;
      minus += m;
      return;
    }
    double p = 0, m = 0;
    rho_closed_lp(s, x, y, p, m);
    plus += p;
    minus += m;
    return;
  }
  std::span<const double> xl, xr, yl, yr;
  split_spans(s, x, xl, xr);
  split_spans(s, y, yl, yr);
  rho_closed_node(s.left(), xl, yl, plus, minus);
  rho_closed_node(s.right(), xr, yr, plus, minus);
}

}  // namespace

RhoResult rho_closed(const Space& s, std::span<const double> x,
                     std::span<const double> y) {
  if (static_cast<int>(x.size()) != s.dim() ||
      static_cast<int>(y.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  if (!rho_closed_available(s))
    throw input_error("no closed derivative formula for " + s.describe());
  if (all_zero(x)) throw domain_error("derivative base point must be nonzero");
  RhoResult r;
  r.method = RhoResult::Method::closed;
  rho_closed_node(s, x, y, r.rho_plus, r.rho_minus);
  return r;
}

RhoResult rho_auto(const Space& s, std::span<const double> x,
                   std::span<const double> y) {
  if (static_cast<int>(x.size()) == s.dim() && !all_zero(x) &&
      rho_closed_available(s))
    return rho_closed(s, x, y);
  return rho_numeric(s, x, y);
}

SignConditions rho_sign_conditions(const Space& s, std::span<const double> x,
                                   std::span<const double> y) {
  if (!s.is_lp())
    throw input_error("sign conditions are defined for lp spaces only");
  if (static_cast<int>(x.size()) != s.dim() ||
      static_cast<int>(y.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  if (all_zero(x)) throw domain_error("sign conditions need a nonzero base point");

  SignConditions out;
  if (s.p().is_inf()) {
    for (int i : max_index_set(x)) {
      double t = sgn(x[i]) * y[i];
      if (t >= 0) out.plus_nonneg = true;
      if (t <= 0) out.minus_nonpos = true;
    }
    return out;
  }
  if (s.p().is_one()) {
    double scale = 0.0;
    for (double xi : x) scale += std::abs(xi);
    double yscale = 0.0;
    for (double yi : y) yscale = std::max(yscale, std::abs(yi));
    bool disjoint = true;
    double sum_signed = 0.0, sum_off = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      bool xz = effectively_zero(x[i], scale);
      if (!xz && !effectively_zero(y[i], yscale)) disjoint = false;
      if (xz)
        sum_off += std::abs(y[i]);
      else
        sum_signed += sgn(x[i]) * y[i];
    }
    out.plus_nonneg = disjoint || sum_signed + sum_off >= 0;
    out.minus_nonpos = disjoint || sum_signed - sum_off <= 0;
    return out;
  }
  double p = s.p().value();
  double v = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    v += y[i] * sgn(x[i]) * std::pow(std::abs(x[i]), p - 1.0);
  out.plus_nonneg = v >= 0;
  out.minus_nonpos = v <= 0;
  return out;
}

}  // namespace normgeo
