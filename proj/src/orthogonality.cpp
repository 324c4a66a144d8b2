#include "normgeo/orthogonality.hpp"

#include <algorithm>
#include <cmath>

#include "normgeo/minimize.hpp"
#include "quad_eval.hpp"

namespace normgeo {

namespace {

vec axpy(std::span<const double> x, double a, std::span<const double> y) {
  vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

vec unit_of(const Space& s, std::span<const double> v) {
  double n = norm(s, v);
  if (n <= 0) throw domain_error("cannot normalize the zero vector");
  vec out(v.begin(), v.end());
  for (double& c : out) c /= n;
  return out;
}

bool polyhedral_tree(const Space& s) {
  if (s.is_lp()) return s.p().is_one() || s.p().is_inf();
  if (s.kind() == Space::Kind::sum1)
    return polyhedral_tree(s.left()) && polyhedral_tree(s.right());
  return false;
}

void check_pair(const Space& s, std::span<const double> x,
                std::span<const double> y) {
  if (static_cast<int>(x.size()) != s.dim() ||
      static_cast<int>(y.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
}

}  // namespace

OrthoVerdict is_birkhoff(const Space& s, std::span<const double> x,
                         std::span<const double> y, double tol) {
  check_pair(s, x, y);
  OrthoVerdict v;
  v.tol = tol;
  double nx = norm(s, x), ny = norm(s, y);
  if (ny == 0.0) {  // ||x + lambda*0|| is constant
    v.holds = true;
    v.min_norm = nx;
    return v;
  }
  double L = 2.0 * nx / ny + 1.0;
  auto [lam, m] = golden_min(
      [&](double t) { return norm(s, axpy(x, t, y)); }, -L, L);
  v.lambda_star = lam;
  v.min_norm = m;
  v.dip = nx - m;
  v.holds = v.dip <= tol;
  return v;
}

bool in_positive_part(const Space& s, std::span<const double> x,
                      std::span<const double> y, double tol) {
  check_pair(s, x, y);
  return rho_auto(s, x, y).rho_plus >= -tol;
}

bool in_negative_part(const Space& s, std::span<const double> x,
                      std::span<const double> y, double tol) {
  check_pair(s, x, y);
  return rho_auto(s, x, y).rho_minus <= tol;
}

bool is_strong_birkhoff(const Space& s, std::span<const double> x,
                        std::span<const double> y, double tol) {
  check_pair(s, x, y);
  if (polyhedral_tree(s)) {
    auto r = rho_auto(s, x, y);
    return r.rho_plus > tol && r.rho_minus < -tol;
  }
  if (s.is_lp() && s.p().is_smooth())
    return norm(s, y) > 0 && is_birkhoff(s, x, y).holds;
  throw input_error("no strict-orthogonality criterion for " + s.describe());
}

bool is_strong_birkhoff_grid(const Space& s, std::span<const double> x,
                             std::span<const double> y, int points_per_side) {
  check_pair(s, x, y);
  if (points_per_side < 2) throw input_error("need at least 2 grid points");
  double nx = norm(s, x), ny = norm(s, y);
  if (ny == 0.0) return false;
  __float128 base = detail::qnorm_shifted(s, x, y, 0.0Q);
  __float128 thr = 1e-20Q * (nx > 1 ? nx : 1.0);
  double lo = 1e-6, hi = 2.0 * nx / ny + 1.0;
  double ratio = std::pow(hi / lo, 1.0 / (points_per_side - 1));
  double mag = lo;
  for (int i = 0; i < points_per_side; ++i, mag *= ratio) {
    for (int sign : {+1, -1}) {
      __float128 d =
          detail::qnorm_shifted(s, x, y, sign * (__float128)mag) - base;
      if (d <= thr) return false;
    }
  }
  return true;
}

ApproxVerdict is_approx_birkhoff(const Space& s, std::span<const double> x,
                                 std::span<const double> y, double eps,
                                 double tol) {
  check_pair(s, x, y);
  if (!(eps >= 0.0 && eps < 1.0))
    throw input_error("approximation parameter must lie in [0, 1)");
  ApproxVerdict v;
  double nx = norm(s, x), ny = norm(s, y);
  if (ny == 0.0 || nx == 0.0) {
    v.holds = true;
    return v;
  }
  double L = 2.0 * nx / ny + 1.0;
  auto gap = [&](double t) {
    double n = norm(s, axpy(x, t, y));
    return n * n - nx * nx + 2.0 * eps * nx * ny * std::abs(t);
  };
  auto [lam, g] = golden_min(gap, -L, L);
  v.lambda_star = lam;
  v.worst_gap = g;
  v.holds = g >= -tol * std::max(1.0, nx * nx);
  return v;
}

bool is_b_star(const Space& s, std::span<const double> x,
               std::span<const double> y, double tol) {
  check_pair(s, x, y);
  vec xu = unit_of(s, x), yu = unit_of(s, y);
  return std::abs(rho_auto(s, xu, yu).rho_minus) <= tol;
}

bool is_b_star_definitional(const Space& s, std::span<const double> x,
                            std::span<const double> y, int grid) {
  check_pair(s, x, y);
  if (grid < 1) throw input_error("grid must be positive");
  vec xu = unit_of(s, x), yu = unit_of(s, y);
  if (!is_birkhoff(s, xu, yu).holds) return false;
  vec u(s.dim());
  for (int j = 1; j <= grid; ++j) {
    double t = double(j) / (grid + 1);
    for (int i = 0; i < s.dim(); ++i) u[i] = t * yu[i] + (1 - t) * xu[i];
    if (is_birkhoff(s, xu, u).holds) return false;
  }
  return true;
}

RhoOrthogonality rho_orthogonal(const Space& s, std::span<const double> x,
                                std::span<const double> y, double tol) {
  check_pair(s, x, y);
  auto r = rho_auto(s, x, y);
  RhoOrthogonality o;
  o.plus = std::abs(r.rho_plus) <= tol;
  o.minus = std::abs(r.rho_minus) <= tol;
  o.mean = std::abs(r.rho_plus + r.rho_minus) <= tol;
  return o;
}

SupportSet support_set(const Space& s, std::span<const double> x) {
  if (!s.is_lp())
    throw input_error("norming-functional enumeration needs an lp space");
  if (static_cast<int>(x.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  double nx = norm(s, x);
  if (nx <= 0)
    throw domain_error("norming functionals of 0 are the whole dual ball");

  SupportSet out;
  if (s.p().is_inf()) {
    for (int i : max_index_set(x)) {
      vec f(s.dim(), 0.0);
      f[i] = sgn(x[i]);
      out.extreme.push_back(std::move(f));
    }
    return out;
  }
  if (s.p().is_one()) {
    std::vector<int> zeros;
    vec base(s.dim(), 0.0);
    for (int i = 0; i < s.dim(); ++i) {
      if (effectively_zero(x[i], nx))
        zeros.push_back(i);
      else
        base[i] = sgn(x[i]);
    }
    int free_bits = std::min<int>(zeros.size(), 10);
    out.truncated = static_cast<int>(zeros.size()) > 10;
    for (long mask = 0; mask < (1L << free_bits); ++mask) {
      vec f = base;
      for (size_t k = 0; k < zeros.size(); ++k)
        f[zeros[k]] = (k < static_cast<size_t>(free_bits) && (mask >> k & 1))
                          ? -1.0
                          : 1.0;
      out.extreme.push_back(std::move(f));
    }
    return out;
  }
  double p = s.p().value();
  vec f(s.dim());
  for (int i = 0; i < s.dim(); ++i)
    f[i] = sgn(x[i]) * std::pow(std::abs(x[i]) / nx, p - 1.0);
  out.extreme.push_back(std::move(f));
  return out;
}

bool check_james(const Space& s, std::span<const double> x,
                 std::span<const double> y, double tol) {
  check_pair(s, x, y);
  auto r = rho_auto(s, x, y);
  return r.rho_minus <= tol && r.rho_plus >= -tol;
}

Cone2D orthogonality_cone(const Space& s, std::span<const double> x,
                          std::span<const double> y, int resolution) {
  check_pair(s, x, y);
  if (resolution < 8) throw input_error("resolution too small");
  vec xu = unit_of(s, x), yu = unit_of(s, y);

  auto member = [&](double theta) {
    vec w(s.dim());
    double c = std::cos(theta), sn = std::sin(theta);
    for (int i = 0; i < s.dim(); ++i) w[i] = c * xu[i] + sn * yu[i];
    auto r = rho_auto(s, xu, w);
    return r.rho_plus >= -1e-10 && r.rho_minus <= 1e-10;
  };

  const double half_pi = std::acos(0.0);
  if (!member(half_pi))
    throw input_error("cone extraction requires x orthogonal to y");

  double step = 4.0 * half_pi / resolution;
  // Expand the arc component containing y (theta = pi/2) in each direction;
  // a component spanning a half circle would break the cone axioms, so the
  // walk stopping early is a bug signal, not an input condition.
  auto boundary = [&](int dir) {
    double inside = half_pi;
    for (int k = 1; k <= resolution / 2; ++k) {
      double probe = half_pi + dir * k * step;
      if (!member(probe)) {
        double out = probe;
        while (std::abs(out - inside) > 1e-9) {
          double mid = 0.5 * (out + inside);
          (member(mid) ? inside : out) = mid;
        }
        return inside;
      }
      inside = probe;
    }
    throw std::runtime_error(
        "orthogonal arc spans a half circle; cone structure violated");
  };

  Cone2D cone;
  cone.theta1 = boundary(-1);  // clockwise end
  cone.theta2 = boundary(+1);  // counterclockwise end
  cone.degenerate = cone.theta2 - cone.theta1 <= 1e-7;
  auto direction = [&](double theta) {
    vec w(s.dim());
    double c = std::cos(theta), sn = std::sin(theta);
    for (int i = 0; i < s.dim(); ++i) w[i] = c * xu[i] + sn * yu[i];
    return unit_of(s, w);
  };
  cone.v1 = direction(cone.theta1);
  cone.v2 = direction(cone.theta2);
  return cone;
}

namespace {

std::optional<vec> falsify_symmetric(const Space& s, std::span<const double> x,
                                     int trials, uint64_t seed, bool left) {
  if (static_cast<int>(x.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  if (trials < 1) throw input_error("trials must be positive");
  if (norm(s, x) <= 0) throw domain_error("base point must be nonzero");
  const double hyp_slack = 1e-12, fail_margin = 1e-8;
  for (const vec& y : sphere_sample(s, seed, trials)) {
    auto fwd = rho_auto(s, x, y);   // rho(x, y)
    auto bwd = rho_auto(s, y, x);   // rho(y, x)
    const auto& hyp = left ? fwd : bwd;
    const auto& con = left ? bwd : fwd;
    if (hyp.rho_plus >= -hyp_slack && con.rho_plus <= -fail_margin) return y;
    if (hyp.rho_minus <= hyp_slack && con.rho_minus >= fail_margin) return y;
  }
  return std::nullopt;
}

}  // namespace

std::optional<vec> falsify_left_symmetric(const Space& s,
                                          std::span<const double> x,
                                          int trials, uint64_t seed) {
  return falsify_symmetric(s, x, trials, seed, true);
}

std::optional<vec> falsify_right_symmetric(const Space& s,
                                           std::span<const double> x,
                                           int trials, uint64_t seed) {
  return falsify_symmetric(s, x, trials, seed, false);
}

namespace {

bool smooth_rec(const Space& s, std::span<const double> x) {
  double nx = norm(s, x);
  if (nx <= 0) return false;  // a zero part always fattens the dual set
  if (s.is_lp()) {
    if (s.p().is_smooth()) return true;
    if (s.p().is_inf()) return max_index_set(x).size() == 1;
    for (double xi : x)
      if (effectively_zero(xi, nx)) return false;
    return true;
  }
  std::span<const double> l = x.subspan(0, s.left().dim());
  std::span<const double> r = x.subspan(s.left().dim());
  if (s.kind() == Space::Kind::sum1)
    return smooth_rec(s.left(), l) && smooth_rec(s.right(), r);
  // prodmax: ties between the factors are corner points
  double nl = norm(s.left(), l), nr = norm(s.right(), r);
  if (std::abs(nl - nr) <= 1e-11 * std::max(nl, nr)) return false;
  return nl > nr ? smooth_rec(s.left(), l) : smooth_rec(s.right(), r);
}

}  // namespace

bool is_smooth_point(const Space& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  if (norm(s, x) <= 0)
    throw domain_error("smoothness is undefined at the origin");
  return smooth_rec(s, x);
}

}  // namespace normgeo
