#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "normgeo/json.hpp"
#include "normgeo/spaces.hpp"

namespace normgeo {

// Dense reference minimizer: scan `steps` points of [lo, hi], then refine the
// best bracket by golden section. For convex f the result is global.
std::pair<double, double> grid_min_lambda(const std::function<double(double)>& f,
                                          double lo, double hi,
                                          int steps = 100000);

// Angular mesh of the unit sphere, normalized in the space's norm.
// Dimension <= 3 only.
std::vector<vec> sphere_mesh(const Space& s, int resolution);

struct Counterexample {
  long trial = 0;           // global trial index within the run
  jsonio::json inputs;      // serialized instance + disagreement detail
  double residual = 0;
};

struct TheoremReport {
  std::string theorem_id;
  long trials = 0;
  long passes = 0;
  long skipped_boundary = 0;
  long counterexample_count = 0;
  std::vector<Counterexample> counterexamples;  // sample, capped
  double max_residual = 0;
  uint64_t seed = 0;
  double wall_time = 0;  // seconds; excluded from the canonical JSON form

  bool passed() const { return counterexample_count == 0; }
  jsonio::json to_json() const;  // canonical: deterministic for (id, trials, seed)
  std::string to_table() const;
};

// Registered theorem suites, in registry order.
std::vector<std::string> theorem_ids();
bool has_theorem(const std::string& id);
std::string theorem_description(const std::string& id);
long default_trials(const std::string& id);

// Run one suite. Reports are bit-identical for identical (id, trials, seed),
// independent of the worker-thread count.
TheoremReport verify_theorem(const std::string& id, long trials, uint64_t seed);

// Soft cap on worker threads (also capped by NORMGEO_THREADS); 0 = unset.
void set_max_threads(int n);

}  // namespace normgeo
