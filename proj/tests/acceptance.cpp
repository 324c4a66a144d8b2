// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
// Every randomized check runs from seed 42; target wall time < 120 s.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "normgeo/bilinear.hpp"
#include "normgeo/derivatives.hpp"
#include "normgeo/json.hpp"
#include "normgeo/oracle.hpp"
#include "normgeo/orthogonality.hpp"
#include "normgeo/spaces.hpp"

using namespace normgeo;

namespace {

constexpr uint64_t kSeed = 42;
int failures = 0;

void line(int idx, bool ok, const std::string& msg) {
  std::printf("criterion %2d: %s  %s\n", idx, ok ? "PASS" : "FAIL",
              msg.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// One suite at a fixed trial count; appends its tallies to the message.
bool suite_clean(const char* id, long trials, std::string& msg) {
  const auto rep = verify_theorem(id, trials, kSeed);
  msg += std::string(id) + " " + std::to_string(rep.trials) + " trials (" +
         std::to_string(rep.passes) + " pass, " +
         std::to_string(rep.skipped_boundary) + " skip, " +
         std::to_string(rep.counterexample_count) + " cx)  ";
  return rep.counterexample_count == 0;
}

double n2(const vec& v) {
  double s = 0;
  for (double t : v) s += t * t;
  return std::sqrt(s);
}

vec gaussian2(Rng& rng) {
  vec v(2);
  do {
    v[0] = rng.gaussian();
    v[1] = rng.gaussian();
  } while (n2(v) < 0.3);
  return v;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();

  // 1 — closed slopes against the difference-quotient limits
  {
    const std::vector<Space> fams = {
        Space::lp(1.0, 4), Space::lp(2.0, 4), Space::lp(3.0, 4),
        Space::lp_inf(4), Space::sum1(Space::lp(1.0, 2), Space::lp_inf(2))};
    long bad = 0;
    double worst = 0;
    for (size_t fi = 0; fi < fams.size(); ++fi) {
      const Space& s = fams[fi];
      const auto xs = sphere_sample(s, Rng::split(kSeed, 100 + 2 * fi), 10000);
      const auto ys = sphere_sample(s, Rng::split(kSeed, 101 + 2 * fi), 10000);
      for (int i = 0; i < 10000; ++i) {
        try {
          const auto c = rho_closed(s, xs[i], ys[i]);
          const auto n = rho_numeric(s, xs[i], ys[i]);
          const double d = std::max(std::abs(c.rho_plus - n.rho_plus),
                                    std::abs(c.rho_minus - n.rho_minus));
          worst = std::max(worst, d);
          if (!(d <= 1e-8)) ++bad;
        } catch (const std::exception&) {
          ++bad;
        }
      }
    }
    line(1, bad == 0,
         "closed vs numeric slopes within 1e-8 on 5 families x 10000 pairs "
         "(worst " + sci(worst) + ", violations " + std::to_string(bad) + ")");
  }

  // 2 — slope-sign membership equivalences, 10^4 per family
  {
    std::string msg;
    const bool a = suite_clean("T2.1", 50000, msg);
    const bool b = suite_clean("T2.2", 50000, msg);
    line(2, a && b, msg);
  }

  // 3 — per-norm sign theorems
  {
    std::string msg;
    bool ok = true;
    for (const char* id : {"TLP", "TLINF", "TL1P", "TL1M"})
      ok = suite_clean(id, 10000, msg) && ok;
    line(3, ok, msg);
  }

  // 4 — strict orthogonality vs the definitional lambda grid
  {
    std::string msg;
    const bool a = suite_clean("TSB", 10000, msg);
    const bool b = suite_clean("CSUM1", 10000, msg);
    line(4, a && b, msg);
  }

  // 5 — pointwise relation: slope method vs 512-point t-grid
  {
    std::string msg;
    line(5, suite_clean("TBSTAR", 3000, msg), msg);
  }

  // 6 — sandwich bound over extreme functionals and probe directions
  {
    std::string msg;
    line(6, suite_clean("L5416", 4000, msg), msg);
  }

  // 7 — functional route vs minimization route
  {
    std::string msg;
    line(7, suite_clean("JAMES", 50000, msg), msg);
  }

  // 8 — operator norm: alternating vs dense grid, rank-one analytic values
  {
    const Space e2 = Space::lp(2.0, 2);
    long bad = 0;
    double worst_gap = 0, worst_r1 = 0;
    for (int t = 0; t < 100; ++t) {
      Rng rng(Rng::split(kSeed, 800 + t));
      std::vector<double> c(8);
      for (auto& v : c) v = rng.uniform(-1.0, 1.0);
      const BilinearOp T(e2, e2, e2, std::move(c));
      const double alt =
          operator_norm(T, NormMethod::alternating, Rng::split(kSeed, 900 + t),
                        16)
              .value;
      const double grd = operator_norm(T, NormMethod::grid, 0, 16, 721).value;
      const double gap = std::abs(alt - grd);
      worst_gap = std::max(worst_gap, gap);
      if (!(gap <= 1e-3)) ++bad;
    }
    for (int t = 0; t < 20; ++t) {
      Rng rng(Rng::split(kSeed, 950 + t));
      const vec f = gaussian2(rng), g = gaussian2(rng), z = gaussian2(rng);
      const BilinearOp T = BilinearOp::rank_one(e2, e2, e2, f, g, z);
      const double analytic = n2(f) * n2(g) * n2(z);
      const double alt =
          operator_norm(T, NormMethod::alternating, Rng::split(kSeed, 970 + t),
                        16)
              .value;
      const double d = std::abs(alt - analytic);
      worst_r1 = std::max(worst_r1, d);
      if (!(d <= 1e-6)) ++bad;
    }
    line(8, bad == 0,
         "alternating vs 721-point grid on 100 random 2x2x2 tensors (worst "
         "gap " + sci(worst_gap) + "), 20 rank-one analytic values (worst " +
         sci(worst_r1) + ")");
  }

  // 9 — operator orthogonality: numeric verdict vs attainment certificate,
  //     plus the singleton-orbit image corollary
  {
    std::string msg;
    const bool a = suite_clean("BOP-ORTH", 200, msg);
    const bool b = suite_clean("BOP-COR", 200, msg);
    line(9, a && b, msg);
  }

  // 10 — smoothness classification fixtures
  {
    const Space e2 = Space::lp(2.0, 2);
    const auto va = is_operator_smooth(
        BilinearOp::rank_one(e2, e2, e2, {0.6, 0.8}, {1.0, 0.0}, {0.28, 0.96}),
        Rng::split(kSeed, 1001));
    const bool a =
        va.smooth && va.representative_count == 1 && va.diagnosis.empty();
    std::vector<double> dc(8, 0.0);
    dc[0] = 1.0;
    dc[7] = 1.0;
    const auto vb = is_operator_smooth(BilinearOp(e2, e2, e2, std::move(dc)),
                                       Rng::split(kSeed, 1002));
    const bool b = !vb.smooth && vb.representative_count == 2 &&
                   vb.diagnosis.find("multiple") != std::string::npos;
    const auto vc = is_operator_smooth(
        BilinearOp::rank_one(e2, e2, Space::lp_inf(2), {1.0, 0.0}, {1.0, 0.0},
                             {1.0, 1.0}),
        Rng::split(kSeed, 1003));
    const bool c = !vc.smooth && vc.representative_count == 1 &&
                   !vc.image_smooth &&
                   vc.diagnosis.find("smooth point") != std::string::npos;
    line(10, a && b && c,
         std::string("rank-one smooth: ") + (a ? "ok" : "WRONG") +
             ", two-orbit diagonal: " + (b ? "ok" : "WRONG") +
             ", tied sup-norm image: " + (c ? "ok" : "WRONG"));
  }

  // 11 — approximate orthogonality: eps = 0 degeneracy, monotonicity in eps,
  //      certificate agreement (all inside the suite)
  {
    std::string msg;
    line(11, suite_clean("BOP-APPROX", 200, msg), msg);
  }

  // 12 — reports are byte-identical across reruns and worker counts
  {
    struct Sub {
      const char* id;
      long n;
    };
    const Sub subs[] = {
        {"T2.1", 2000}, {"TSB", 2000}, {"TBSTAR", 600}, {"BOP-ORTH", 20}};
    bool ok = true;
    for (const auto& [id, n] : subs) {
      const auto a = jsonio::dump_canonical(verify_theorem(id, n, kSeed).to_json());
      set_max_threads(3);
      const auto b = jsonio::dump_canonical(verify_theorem(id, n, kSeed).to_json());
      set_max_threads(1);
      const auto c = jsonio::dump_canonical(verify_theorem(id, n, kSeed).to_json());
      set_max_threads(0);
      ok = ok && a == b && a == c;
    }
    line(12, ok,
         "reports byte-identical across reruns and 1/3/default workers "
         "(T2.1, TSB, TBSTAR, BOP-ORTH subset)");
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%d/12 criteria passed in %.1f s\n", 12 - failures, secs);
  return failures == 0 ? 0 : 1;
}
