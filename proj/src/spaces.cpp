#include "normgeo/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace normgeo {

PExp PExp::finite(double p) {
  if (!(p >= 1.0) || std::isinf(p) || std::isnan(p))
    throw input_error("lp exponent must satisfy 1 <= p < inf (use the inf tag)");
  return PExp(p, false);
}

double PExp::value() const {
  if (inf_) throw input_error("infinite exponent has no finite value");
  return p_;
}

Space Space::lp(PExp p, int n) {
  if (n < 1) throw input_error("lp dimension must be >= 1");
  Space s;
  s.kind_ = Kind::lp;
  s.p_ = p;
  s.dim_ = n;
  return s;
}

Space Space::sum1(Space left, Space right) {
  Space s;
  s.kind_ = Kind::sum1;
  s.dim_ = left.dim() + right.dim();
  s.left_ = std::make_shared<const Space>(std::move(left));
  s.right_ = std::make_shared<const Space>(std::move(right));
  return s;
}

Space Space::prodmax(Space left, Space right) {
  Space s = sum1(std::move(left), std::move(right));
  s.kind_ = Kind::prodmax;
  return s;
}

PExp Space::p() const {
  if (kind_ != Kind::lp) throw input_error("exponent requested on a composite space");
  return p_;
}

const Space& Space::left() const {
  if (!left_) throw input_error("child requested on an lp leaf");
  return *left_;
}

const Space& Space::right() const {
  if (!right_) throw input_error("child requested on an lp leaf");
  return *right_;
}

std::string Space::describe() const {
  switch (kind_) {
    case Kind::lp: {
      std::string ps = p_.is_inf() ? "inf" : [this] {
        double v = p_.value();
        if (v == static_cast<long long>(v))
          return std::to_string(static_cast<long long>(v));
        std::string s = std::to_string(v);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        return s;
      }();
      return "lp:" + ps + ":" + std::to_string(dim_);
    }
    case Kind::sum1:
      return "sum1(" + left_->describe() + "," + right_->describe() + ")";
    default:
      return "prodmax(" + left_->describe() + "," + right_->describe() + ")";
  }
}

namespace {

void check_dim(const Space& s, std::span<const double> v) {
  if (static_cast<int>(v.size()) != s.dim())
    throw input_error("vector has dimension " + std::to_string(v.size()) +
                      ", space " + s.describe() + " expects " + std::to_string(s.dim()));
}

double norm_unchecked(const Space& s, std::span<const double> v) {
  switch (s.kind()) {
    case Space::Kind::lp: {
      const PExp pe = s.p();
      if (pe.is_inf()) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::fabs(t));
        return m;
      }
      const double p = pe.value();
      if (p == 1.0) {
        double a = 0.0;
        for (double t : v) a += std::fabs(t);
        return a;
      }
      if (p == 2.0) {
        double a = 0.0;
        for (double t : v) a += t * t;
        return std::sqrt(a);
      }
      double a = 0.0;
      for (double t : v) a += std::pow(std::fabs(t), p);
      return std::pow(a, 1.0 / p);
    }
    case Space::Kind::sum1: {
      const int nl = s.left().dim();
      return norm_unchecked(s.left(), v.first(nl)) +
             norm_unchecked(s.right(), v.subspan(nl));
    }
    default: {
      const int nl = s.left().dim();
      return std::max(norm_unchecked(s.left(), v.first(nl)),
                      norm_unchecked(s.right(), v.subspan(nl)));
    }
  }
}

}  // namespace

double norm(const Space& s, std::span<const double> v) {
  check_dim(s, v);
  return norm_unchecked(s, v);
}

double sip_lp(std::span<const double> x, std::span<const double> y, double p) {
  if (!(p > 1.0) || std::isinf(p) || std::isnan(p))
    throw input_error("semi-inner product is defined for 1 < p < inf");
  if (x.size() != y.size()) throw input_error("sip_lp: mismatched dimensions");
  double ny = 0.0;
  for (double t : y) ny += std::pow(std::fabs(t), p);
  ny = std::pow(ny, 1.0 / p);
  if (ny == 0.0) throw domain_error("semi-inner product needs y != 0");
  double s = 0.0;
  for (size_t i = 0; i < y.size(); ++i)
    if (y[i] != 0.0) s += x[i] * sgn(y[i]) * std::pow(std::fabs(y[i]), p - 1.0);
  return std::pow(ny, 2.0 - p) * s;
}

// splitmix64; good enough statistics for sampling and fully portable.
std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

int Rng::uniform_int(int n) {
  return n <= 0 ? 0 : static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  have_spare_ = true;
  return u * m;
}

std::uint64_t Rng::split(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (0xA3EC647659359ACDULL * (stream + 1)));
  return r.next_u64();
}

namespace {

// Degenerate moves push gaussian samples onto the non-smooth strata that the
// randomized suites must exercise; plain gaussians hit them with probability 0.
void degenerate_move(const Space& s, std::span<double> v, Rng& rng) {
  switch (s.kind()) {
    case Space::Kind::lp: {
      const PExp pe = s.p();
      const int n = s.dim();
      if (pe.is_inf() && n >= 2 && rng.uniform() < 0.25) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::fabs(t));
        if (m == 0.0) m = 1.0;
        int k = 2 + rng.uniform_int(n - 1);  // tie k coordinates, 2 <= k <= n
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.uniform_int(n - i)]);
        for (int i = 0; i < k; ++i) {
          double& t = v[idx[i]];
          t = (t != 0.0 ? sgn(t) : (rng.uniform() < 0.5 ? 1.0 : -1.0)) * m;
        }
      } else if (pe.is_one() && n >= 2 && rng.uniform() < 0.25) {
        int k = 1 + rng.uniform_int(n - 1);  // zero k coordinates, keep >= 1
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.uniform_int(n - i)]);
        for (int i = 0; i < k; ++i) v[idx[i]] = 0.0;
      }
      return;
    }
    case Space::Kind::sum1: {
      const int nl = s.left().dim();
      degenerate_move(s.left(), v.first(nl), rng);
      degenerate_move(s.right(), v.subspan(nl), rng);
      if (rng.uniform() < 0.15) {
        auto half = rng.uniform() < 0.5 ? v.first(nl) : v.subspan(nl);
        std::fill(half.begin(), half.end(), 0.0);
      }
      return;
    }
    default: {
      const int nl = s.left().dim();
      degenerate_move(s.left(), v.first(nl), rng);
      degenerate_move(s.right(), v.subspan(nl), rng);
      if (rng.uniform() < 0.15) {
        // tie the child norms, landing on the non-smooth stratum of the max
        double a = norm_unchecked(s.left(), v.first(nl));
        double b = norm_unchecked(s.right(), v.subspan(nl));
        if (a > 0.0 && b > 0.0) {
          double f = a / b;
          for (auto& t : v.subspan(nl)) t *= f;
        }
      }
      return;
    }
  }
}

}  // namespace

std::vector<vec> sphere_sample(const Space& s, std::uint64_t seed, int count) {
  if (count < 0) throw input_error("sphere_sample: negative count");
  Rng rng(Rng::split(seed, 0x5f3759df));
  std::vector<vec> out;
  out.reserve(count);
  const int n = s.dim();
  while (static_cast<int>(out.size()) < count) {
    vec v(n);
    for (double& t : v) t = rng.gaussian();
    degenerate_move(s, std::span<double>(v), rng);
    double nv = norm_unchecked(s, v);
    if (nv < 1e-12) continue;  // essentially never; redraw
    for (double& t : v) t /= nv;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<int> max_index_set(std::span<const double> x) {
  double m = 0.0;
  for (double t : x) m = std::max(m, std::fabs(t));
  std::vector<int> idx;
  for (size_t i = 0; i < x.size(); ++i)
    if (std::fabs(x[i]) >= m * (1.0 - 1e-11)) idx.push_back(static_cast<int>(i));
  return idx;
}

bool effectively_zero(double xi, double scale) {
  return std::fabs(xi) <= 1e-12 * scale;
}

vec support_functional(const Space& s, std::span<const double> z) {
  check_dim(s, z);
  const double nz = norm_unchecked(s, z);
  if (nz == 0.0) throw domain_error("support functional needs z != 0");
  vec f(z.size(), 0.0);
  switch (s.kind()) {
    case Space::Kind::lp: {
      const PExp pe = s.p();
      if (pe.is_inf()) {
        int i0 = max_index_set(z).front();
        f[i0] = sgn(z[i0]);
      } else if (pe.is_one()) {
        for (size_t i = 0; i < z.size(); ++i) f[i] = sgn(z[i]);
      } else {
        const double p = pe.value();
        for (size_t i = 0; i < z.size(); ++i)
          if (z[i] != 0.0)
            f[i] = sgn(z[i]) * std::pow(std::fabs(z[i]) / nz, p - 1.0);
      }
      break;
    }
    case Space::Kind::sum1: {
      // dual of a sum1 pair carries the sup of child dual norms; support both halves
      const int nl = s.left().dim();
      auto zl = z.first(nl), zr = z.subspan(nl);
      if (norm_unchecked(s.left(), zl) > 0.0) {
        vec fl = support_functional(s.left(), zl);
        std::copy(fl.begin(), fl.end(), f.begin());
      }
      if (norm_unchecked(s.right(), zr) > 0.0) {
        vec fr = support_functional(s.right(), zr);
        std::copy(fr.begin(), fr.end(), f.begin() + nl);
      }
      break;
    }
    default: {
      // max norm: all dual weight on one maximal child
      const int nl = s.left().dim();
      auto zl = z.first(nl), zr = z.subspan(nl);
      const double a = norm_unchecked(s.left(), zl);
      const double b = norm_unchecked(s.right(), zr);
      if (a >= b) {
        vec fl = support_functional(s.left(), zl);
        std::copy(fl.begin(), fl.end(), f.begin());
      } else {
        vec fr = support_functional(s.right(), zr);
        std::copy(fr.begin(), fr.end(), f.begin() + nl);
      }
      break;
    }
  }
  return f;
}

std::pair<vec, double> dual_maximizer(const Space& s, std::span<const double> f) {
  check_dim(s, f);
  vec x(f.size(), 0.0);
  switch (s.kind()) {
    case Space::Kind::lp: {
      const PExp pe = s.p();
      if (pe.is_inf()) {
        double v = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
          x[i] = f[i] == 0.0 ? 1.0 : sgn(f[i]);
          v += std::fabs(f[i]);
        }
        return {x, v};
      }
      if (pe.is_one()) {
        size_t i0 = 0;
        for (size_t i = 1; i < f.size(); ++i)
          if (std::fabs(f[i]) > std::fabs(f[i0])) i0 = i;
        x[i0] = f[i0] == 0.0 ? 1.0 : sgn(f[i0]);
        return {x, std::fabs(f[i0])};
      }
      const double p = pe.value();
      const double q = p / (p - 1.0);
      double nq = 0.0;
      for (double t : f) nq += std::pow(std::fabs(t), q);
      nq = std::pow(nq, 1.0 / q);
      if (nq == 0.0) {
        x[0] = 1.0;
        return {x, 0.0};
      }
      for (size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0.0) x[i] = sgn(f[i]) * std::pow(std::fabs(f[i]), q - 1.0);
      double nx = norm_unchecked(s, x);
      for (double& t : x) t /= nx;
      return {x, nq};
    }
    case Space::Kind::sum1: {
      const int nl = s.left().dim();
      auto [xl, vl] = dual_maximizer(s.left(), f.first(nl));
      auto [xr, vr] = dual_maximizer(s.right(), f.subspan(nl));
      if (vl >= vr)
        std::copy(xl.begin(), xl.end(), x.begin());
      else
        std::copy(xr.begin(), xr.end(), x.begin() + nl);
      return {x, std::max(vl, vr)};
    }
    default: {
      const int nl = s.left().dim();
      auto [xl, vl] = dual_maximizer(s.left(), f.first(nl));
      auto [xr, vr] = dual_maximizer(s.right(), f.subspan(nl));
      std::copy(xl.begin(), xl.end(), x.begin());
      std::copy(xr.begin(), xr.end(), x.begin() + nl);
      return {x, vl + vr};
    }
  }
}

double dual_norm(const Space& s, std::span<const double> f) {
  return dual_maximizer(s, f).second;
}

}  // namespace normgeo
