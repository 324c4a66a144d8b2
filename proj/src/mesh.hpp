#pragma once

#include <cmath>
#include <vector>

#include "normgeo/spaces.hpp"

namespace normgeo::detail {

// Angular mesh on the unit sphere of a space of dimension <= 3, `resolution`
// points per angle, normalized in the space's own norm.
inline std::vector<vec> sphere_mesh_points(const Space& s, int resolution) {
  if (s.dim() > 3) throw input_error("sphere mesh supports dimension <= 3");
  if (resolution < 2) throw input_error("mesh resolution too small");
  std::vector<vec> pts;
  auto push_unit = [&](vec v) {
    double n = norm(s, v);
    if (n <= 0) return;
    for (double& c : v) c /= n;
    pts.push_back(std::move(v));
  };
  const double two_pi = 8.0 * std::atan(1.0);
  if (s.dim() == 1) {
    push_unit({1.0});
    push_unit({-1.0});
    return pts;
  }
  if (s.dim() == 2) {
    pts.reserve(resolution);
    for (int j = 0; j < resolution; ++j) {
      double t = two_pi * j / resolution;
      push_unit({std::cos(t), std::sin(t)});
    }
    return pts;
  }
  pts.reserve(static_cast<size_t>(resolution) * resolution);
  for (int a = 0; a < resolution; ++a) {
    // offset keeps the poles from collapsing into duplicates
    double phi = (two_pi / 2.0) * (a + 0.5) / resolution;
    for (int b = 0; b < resolution; ++b) {
      double th = two_pi * b / resolution;
      push_unit({std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th),
                 std::cos(phi)});
    }
  }
  return pts;
}

}  // namespace normgeo::detail
