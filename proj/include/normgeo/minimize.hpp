#pragma once

#include <cmath>
#include <utility>

namespace normgeo {

/// Golden-section minimization of a unimodal (here: convex) f over [a, b],
/// refined until the bracket is narrower than `width`. Returns (argmin, min).
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double width = 1e-12) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace normgeo
