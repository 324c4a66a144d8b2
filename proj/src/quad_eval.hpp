#pragma once

// Internal: norm of x + lambda*y evaluated in __float128.
//
// The difference ||x + h y|| - ||x|| loses ~2^k * eps of relative accuracy in
// double when h = 2^-k; the quotient schedule runs k up to 48, far past the
// point where double noise (not truncation) dominates. Quad keeps the noise
// at ~1e-33 so the schedule's own stopping rule stays meaningful.

#include <quadmath.h>

#include <span>

#include "normgeo/spaces.hpp"

namespace normgeo::detail {

inline __float128 qnorm_shifted(const Space& s, std::span<const double> x,
                                std::span<const double> y, __float128 lambda) {
  switch (s.kind()) {
    case Space::Kind::lp: {
      const PExp pe = s.p();
      const int n = s.dim();
      if (pe.is_inf()) {
        __float128 m = 0;
        for (int i = 0; i < n; ++i) {
          __float128 t = fabsq((__float128)x[i] + lambda * (__float128)y[i]);
          if (t > m) m = t;
        }
        return m;
      }
      if (pe.is_one()) {
        __float128 a = 0;
        for (int i = 0; i < n; ++i)
          a += fabsq((__float128)x[i] + lambda * (__float128)y[i]);
        return a;
      }
      const double p = pe.value();
      if (p == 2.0) {
        __float128 a = 0;
        for (int i = 0; i < n; ++i) {
          __float128 t = (__float128)x[i] + lambda * (__float128)y[i];
          a += t * t;
        }
        return sqrtq(a);
      }
      __float128 a = 0;
      const __float128 pq = p;
      for (int i = 0; i < n; ++i) {
        __float128 t = fabsq((__float128)x[i] + lambda * (__float128)y[i]);
        if (t > 0) a += powq(t, pq);
      }
      return a > 0 ? powq(a, 1 / pq) : 0;
    }
    case Space::Kind::sum1: {
      const int nl = s.left().dim();
      return qnorm_shifted(s.left(), x.first(nl), y.first(nl), lambda) +
             qnorm_shifted(s.right(), x.subspan(nl), y.subspan(nl), lambda);
    }
    default: {
      const int nl = s.left().dim();
      __float128 a = qnorm_shifted(s.left(), x.first(nl), y.first(nl), lambda);
      __float128 b = qnorm_shifted(s.right(), x.subspan(nl), y.subspan(nl), lambda);
      return a > b ? a : b;
    }
  }
}

}  // namespace normgeo::detail
