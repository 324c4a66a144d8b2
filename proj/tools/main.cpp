// normgeo command-line front end: JSON in, JSON/table out.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "normgeo/bilinear.hpp"
#include "normgeo/derivatives.hpp"
#include "normgeo/json.hpp"
#include "normgeo/oracle.hpp"
#include "normgeo/orthogonality.hpp"
#include "normgeo/spaces.hpp"

namespace {

using normgeo::BilinearOp;
using normgeo::domain_error;
using normgeo::input_error;
using normgeo::norm;
using normgeo::NormMethod;
using normgeo::Space;
using normgeo::vec;
using json = normgeo::jsonio::json;

const char* kSchemas = R"(JSON schemas
  space   {"kind":"lp","p":<number|"inf">,"n":<int>}
          {"kind":"sum1"|"prodmax","left":<space>,"right":<space>}
          compact form lp:<p>:<n> (p may be "inf") is accepted wherever a
          space is expected, including inside payload files
  vector  {"space":<space>,"v":[<reals>]}
  tensor  {"X":<space>,"Y":<space>,"Z":<space>,"c":[[[<reals>]]]}
          with c[k][i][j] the k-th codomain coordinate of T(e_i, e_j)
  pair    {"T":<tensor>,"A":<tensor>}

--input takes a file path or the payload inline (anything starting with
'{' or '[' is treated as inline JSON).

Exit codes
  0  computed; relation holds; verify found no counterexamples
  1  relation fails or a counterexample was found (output still written)
  2  malformed input (message on stderr)

Environment
  NORMGEO_THREADS  soft cap on verify worker threads (reports do not
                   depend on the thread count)
)";

// ---------------------------------------------------------------------------
// input plumbing

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read input file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json load_payload(const std::string& input) {
  size_t i = input.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && (input[i] == '{' || input[i] == '['))
    return normgeo::jsonio::must_parse(input);
  return normgeo::jsonio::must_parse(slurp(input));
}

BilinearOp tensor_arg(const json& j, const char* name) {
  if (!j.is_object()) throw input_error(std::string(name) + " must be a tensor object");
  return normgeo::jsonio::tensor_from_json(j);
}

void check_dim(const Space& s, const vec& v, const char* name) {
  if (static_cast<int>(v.size()) != s.dim())
    throw input_error(std::string(name) +
                      " has length " + std::to_string(v.size()) +
                      ", space has dimension " + std::to_string(s.dim()));
}

// ---------------------------------------------------------------------------
// output plumbing

json vec_json(const vec& v) { return json(v); }

void emit_table(const json& j, std::ostream& out) {
  size_t width = 0;
  for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : j.items()) {
    out << k << std::string(width - k.size() + 2, ' ');
    if (v.is_string())
      out << v.get<std::string>();
    else
      out << v.dump();
    out << "\n";
  }
}

void emit(const json& j, const std::string& format) {
  if (format == "table")
    emit_table(j, std::cout);
  else
    std::cout << j.dump(2) << "\n";
}

json report_json(const normgeo::TheoremReport& rep) { return rep.to_json(); }

void report_table_row(const normgeo::TheoremReport& rep, std::ostream& out) {
  out << rep.theorem_id << std::string(rep.theorem_id.size() < 14
                                           ? 14 - rep.theorem_id.size()
                                           : 1, ' ')
      << "trials " << rep.trials << "  passes " << rep.passes << "  skipped "
      << rep.skipped_boundary << "  counterexamples "
      << rep.counterexample_count << "  "
      << (rep.passed() ? "PASS" : "FAIL") << "\n";
}

// ---------------------------------------------------------------------------
// subcommand handlers

int run_derive(const Space& s, const vec& x, const vec& y,
               const std::string& method, const std::string& format) {
  check_dim(s, x, "--x");
  check_dim(s, y, "--y");
  normgeo::RhoResult r;
  if (method == "closed")
    r = normgeo::rho_closed(s, x, y);
  else if (method == "numeric")
    r = normgeo::rho_numeric(s, x, y);
  else
    r = normgeo::rho_auto(s, x, y);
  json out;
  out["space"] = normgeo::jsonio::space_to_json(s);
  out["rho_plus"] = r.rho_plus;
  out["rho_minus"] = r.rho_minus;
  out["norm"] = norm(s, x);
  out["method"] = r.method == normgeo::RhoResult::Method::closed ? "closed"
                                                                 : "numeric";
  if (!r.step_trace.empty()) {
    json trace = json::array();
    for (const auto& [lambda, quotient] : r.step_trace)
      trace.push_back(json::array({lambda, quotient}));
    out["step_trace"] = std::move(trace);
  }
  emit(out, format);
  return 0;
}

int run_ortho(const Space& s, const vec& x, const vec& y,
              const std::string& relation, double eps, bool eps_given,
              double tol, bool tol_given, const std::string& format) {
  check_dim(s, x, "--x");
  check_dim(s, y, "--y");
  json out;
  out["relation"] = relation;
  bool holds = false;
  json witness;
  double used_tol = 0.0;
  if (relation == "birkhoff") {
    used_tol = tol_given ? tol : 1e-8;
    auto v = normgeo::is_birkhoff(s, x, y, used_tol);
    holds = v.holds;
    witness["lambda_star"] = v.lambda_star;
    witness["min_norm"] = v.min_norm;
    witness["dip"] = v.dip;
  } else if (relation == "strong") {
    used_tol = tol_given ? tol : 1e-10;
    holds = normgeo::is_strong_birkhoff(s, x, y, used_tol);
    auto r = normgeo::rho_auto(s, x, y);
    witness["rho_plus"] = r.rho_plus;
    witness["rho_minus"] = r.rho_minus;
  } else if (relation == "approx") {
    if (!eps_given) throw input_error("--relation approx requires --eps");
    used_tol = tol_given ? tol : 1e-8;
    auto v = normgeo::is_approx_birkhoff(s, x, y, eps, used_tol);
    holds = v.holds;
    out["eps"] = eps;
    witness["lambda_star"] = v.lambda_star;
    witness["worst_gap"] = v.worst_gap;
  } else if (relation == "bstar") {
    used_tol = tol_given ? tol : 1e-9;
    holds = normgeo::is_b_star(s, x, y, used_tol);
    auto r = normgeo::rho_auto(s, x, y);
    witness["rho_plus"] = r.rho_plus;
    witness["rho_minus"] = r.rho_minus;
  } else if (relation == "james") {
    used_tol = tol_given ? tol : 1e-9;
    holds = normgeo::check_james(s, x, y, used_tol);
    auto r = normgeo::rho_auto(s, x, y);
    witness["rho_plus"] = r.rho_plus;
    witness["rho_minus"] = r.rho_minus;
  } else if (relation == "rho") {
    used_tol = tol_given ? tol : 1e-10;
    auto f = normgeo::rho_orthogonal(s, x, y, used_tol);
    holds = f.mean;
    auto r = normgeo::rho_auto(s, x, y);
    witness["plus"] = f.plus;
    witness["minus"] = f.minus;
    witness["mean"] = f.mean;
    witness["rho_plus"] = r.rho_plus;
    witness["rho_minus"] = r.rho_minus;
  } else {
    throw input_error("unknown relation: " + relation +
                      " (birkhoff, strong, approx, bstar, james, rho)");
  }
  out["holds"] = holds;
  out["tol"] = used_tol;
  out["witness"] = std::move(witness);
  emit(out, format);
  return holds ? 0 : 1;
}

int run_cone(const Space& s, const vec& x, const vec& y, int resolution,
             const std::string& format) {
  check_dim(s, x, "--x");
  check_dim(s, y, "--y");
  auto r = normgeo::rho_auto(s, x, y);
  json out;
  out["positive_part"] = normgeo::in_positive_part(s, x, y);
  out["negative_part"] = normgeo::in_negative_part(s, x, y);
  out["rho_plus"] = r.rho_plus;
  out["rho_minus"] = r.rho_minus;
  const bool orthogonal = normgeo::is_birkhoff(s, x, y).holds;
  out["orthogonal"] = orthogonal;
  if (orthogonal) {
    vec ux = x, uy = y;
    const double nx = norm(s, x), ny = norm(s, y);
    if (ny <= 0) throw domain_error("cone requires y != 0");
    for (auto& t : ux) t /= nx;
    for (auto& t : uy) t /= ny;
    auto cone = normgeo::orthogonality_cone(s, ux, uy, resolution);
    json c;
    c["v1"] = vec_json(cone.v1);
    c["v2"] = vec_json(cone.v2);
    c["theta1"] = cone.theta1;
    c["theta2"] = cone.theta2;
    c["degenerate"] = cone.degenerate;
    out["cone"] = std::move(c);
  } else {
    out["cone"] = nullptr;
  }
  emit(out, format);
  return 0;
}

int run_support(const Space& s, const vec& x, const std::string& format) {
  check_dim(s, x, "--x");
  auto set = normgeo::support_set(s, x);
  json out;
  json extreme = json::array();
  for (const auto& f : set.extreme) extreme.push_back(vec_json(f));
  out["extreme"] = std::move(extreme);
  out["truncated"] = set.truncated;
  out["singleton"] = set.is_singleton();
  out["smooth_point"] = normgeo::is_smooth_point(s, x);
  out["norm"] = norm(s, x);
  emit(out, format);
  return 0;
}

int run_bilinear_norm(const json& payload, const std::string& method,
                      int restarts, int resolution, uint64_t seed,
                      const std::string& format) {
  BilinearOp T = tensor_arg(payload, "--input");
  NormMethod m = NormMethod::multistart;
  if (method == "alternating")
    m = NormMethod::alternating;
  else if (method == "grid")
    m = NormMethod::grid;
  else if (method != "multistart")
    throw input_error("unknown method: " + method +
                      " (multistart, alternating, grid)");
  auto rep = normgeo::operator_norm(T, m, seed, restarts, resolution);
  json out;
  out["value"] = rep.value;
  out["x_star"] = vec_json(rep.x_star);
  out["y_star"] = vec_json(rep.y_star);
  out["method"] = method;
  out["restarts"] = rep.restarts;
  out["sweeps"] = rep.sweeps;
  out["converged"] = rep.converged;
  emit(out, format);
  return 0;
}

int run_bilinear_ortho(const json& payload, double eps, bool eps_given,
                       double tol, uint64_t seed, const std::string& format) {
  if (!payload.is_object() || !payload.contains("T") || !payload.contains("A"))
    throw input_error("bilinear-ortho payload needs \"T\" and \"A\"");
  BilinearOp T = tensor_arg(payload["T"], "T");
  BilinearOp A = tensor_arg(payload["A"], "A");
  json out;
  bool holds = false;
  if (eps_given) {
    auto v = normgeo::is_operator_approx_birkhoff(T, A, eps, tol, seed);
    holds = v.holds;
    out["mode"] = "approx";
    out["eps"] = eps;
    out["holds"] = v.holds;
    out["lambda_star"] = v.lambda_star;
    out["worst_gap"] = v.worst_gap;
    out["norm_t"] = v.norm_t;
    out["norm_a"] = v.norm_a;
    out["certificate_holds"] = v.certificate_holds;
    out["plus_index"] = v.plus_index;
    out["minus_index"] = v.minus_index;
  } else {
    auto v = normgeo::is_operator_birkhoff(T, A, tol, seed);
    holds = v.numeric_holds;
    out["mode"] = "exact";
    out["holds"] = v.numeric_holds;
    out["lambda_star"] = v.lambda_star;
    out["min_norm"] = v.min_norm;
    out["dip"] = v.dip;
    out["norm_t"] = v.norm_t;
    out["certificate_holds"] = v.certificate_holds;
    out["plus_index"] = v.plus_index;
    out["minus_index"] = v.minus_index;
    json reps = json::array();
    for (const auto& [rx, ry] : v.representatives) {
      json r;
      r["x"] = vec_json(rx);
      r["y"] = vec_json(ry);
      reps.push_back(std::move(r));
    }
    out["representatives"] = std::move(reps);
  }
  out["tol"] = tol;
  emit(out, format);
  return holds ? 0 : 1;
}

int run_bilinear_smooth(const json& payload, uint64_t seed,
                        const std::string& format) {
  BilinearOp T = tensor_arg(payload, "--input");
  auto v = normgeo::is_operator_smooth(T, seed);
  json out;
  out["smooth"] = v.smooth;
  out["representative_count"] = v.representative_count;
  out["image_smooth"] = v.image_smooth;
  out["diagnosis"] = v.diagnosis;
  emit(out, format);
  return v.smooth ? 0 : 1;
}

int run_verify(const std::string& theorem, long trials, bool trials_given,
               uint64_t seed, const std::string& format) {
  if (!theorem.empty()) {
    long n = trials_given ? trials : normgeo::default_trials(theorem);
    auto rep = normgeo::verify_theorem(theorem, n, seed);
    if (format == "table")
      report_table_row(rep, std::cout);
    else
      std::cout << report_json(rep).dump(2) << "\n";
    return rep.passed() ? 0 : 1;
  }
  // no id: run every registered suite and aggregate
  json reports = json::array();
  long total_trials = 0, total_passes = 0, total_skipped = 0, total_cx = 0;
  std::ostringstream table;
  for (const auto& id : normgeo::theorem_ids()) {
    long n = trials_given ? trials : normgeo::default_trials(id);
    auto rep = normgeo::verify_theorem(id, n, seed);
    total_trials += rep.trials;
    total_passes += rep.passes;
    total_skipped += rep.skipped_boundary;
    total_cx += rep.counterexample_count;
    reports.push_back(report_json(rep));
    report_table_row(rep, table);
  }
  json out;
  out["reports"] = std::move(reports);
  out["total_trials"] = total_trials;
  out["total_passes"] = total_passes;
  out["total_skipped"] = total_skipped;
  out["total_counterexamples"] = total_cx;
  out["all_passed"] = total_cx == 0;
  if (format == "table") {
    table << "total         trials " << total_trials << "  passes "
          << total_passes << "  skipped " << total_skipped
          << "  counterexamples " << total_cx << "  "
          << (total_cx == 0 ? "PASS" : "FAIL") << "\n";
    std::cout << table.str();
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return total_cx == 0 ? 0 : 1;
}

int run_list_theorems(const std::string& format) {
  json out;
  json list = json::array();
  for (const auto& id : normgeo::theorem_ids()) {
    json t;
    t["id"] = id;
    t["description"] = normgeo::theorem_description(id);
    t["default_trials"] = normgeo::default_trials(id);
    list.push_back(std::move(t));
  }
  out["theorems"] = std::move(list);
  if (format == "table") {
    size_t width = 0;
    for (const auto& id : normgeo::theorem_ids())
      width = std::max(width, id.size());
    for (const auto& t : out["theorems"])
      std::cout << t["id"].get<std::string>()
                << std::string(width + 2 - t["id"].get<std::string>().size(),
                               ' ')
                << t["default_trials"].get<long>() << "  "
                << t["description"].get<std::string>() << "\n";
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normgeo: norm derivatives, orthogonality relations, and "
               "bilinear operator geometry on finite-dimensional lp spaces"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  app.fallthrough();  // parent options (--format) usable after the subcommand

  std::string format = "json";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  std::string space_text, x_text, y_text, input_text;
  std::string relation = "birkhoff", method, theorem;
  double eps = 0.0, tol = 1e-8;
  uint64_t seed = 0;
  long trials = 0;
  int restarts = 32, resolution = 721, cone_resolution = 4096;

  auto* derive = app.add_subcommand(
      "derive", "one-sided norm derivatives rho± of ||x + t y|| at t = 0");
  derive->add_option("--space", space_text, "space (JSON or lp:<p>:<n>)")
      ->required();
  derive->add_option("--x", x_text, "base point, JSON array")->required();
  derive->add_option("--y", y_text, "direction, JSON array")->required();
  derive->add_option("--method", method,
                     "auto (default), closed, or numeric");

  auto* ortho = app.add_subcommand(
      "ortho", "orthogonality relations between two vectors");
  ortho->add_option("--relation", relation,
                    "birkhoff, strong, approx, bstar, james, rho")
      ->capture_default_str();
  ortho->add_option("--space", space_text, "space (JSON or lp:<p>:<n>)")
      ->required();
  ortho->add_option("--x", x_text, "JSON array")->required();
  ortho->add_option("--y", y_text, "JSON array")->required();
  auto* ortho_eps = ortho->add_option("--eps", eps,
                                      "approximation parameter in [0,1)");
  auto* ortho_tol = ortho->add_option("--tol", tol, "verdict tolerance");

  auto* cone = app.add_subcommand(
      "cone", "positive/negative part membership of y at x; when x is "
              "orthogonal to y, the boundary of the orthogonal cone "
              "component through y in span{x,y}");
  cone->add_option("--space", space_text, "space (JSON or lp:<p>:<n>)")
      ->required();
  cone->add_option("--x", x_text, "JSON array")->required();
  cone->add_option("--y", y_text, "JSON array")->required();
  cone->add_option("--resolution", cone_resolution, "angular scan points")
      ->capture_default_str();

  auto* support = app.add_subcommand(
      "support", "extreme norming functionals of x (lp leaves)");
  support->add_option("--space", space_text, "space (JSON or lp:<p>:<n>)")
      ->required();
  support->add_option("--x", x_text, "JSON array")->required();

  auto* bnorm = app.add_subcommand(
      "bilinear-norm", "operator norm of a bilinear map given as a tensor");
  bnorm->add_option("--input", input_text, "tensor payload (path or inline)")
      ->required();
  bnorm->add_option("--method", method,
                    "multistart (default), alternating, grid");
  bnorm->add_option("--restarts", restarts, "search restarts")
      ->capture_default_str();
  bnorm->add_option("--resolution", resolution, "grid points per circle")
      ->capture_default_str();
  bnorm->add_option("--seed", seed, "rng seed")->capture_default_str();

  auto* bortho = app.add_subcommand(
      "bilinear-ortho", "operator Birkhoff-James orthogonality T vs A; with "
                        "--eps the approximate relation");
  bortho->add_option("--input", input_text,
                     "payload {\"T\":tensor,\"A\":tensor} (path or inline)")
      ->required();
  auto* bortho_eps = bortho->add_option("--eps", eps,
                                        "approximation parameter in [0,1)");
  bortho->add_option("--tol", tol, "verdict tolerance")->capture_default_str();
  bortho->add_option("--seed", seed, "rng seed")->capture_default_str();

  auto* bsmooth = app.add_subcommand(
      "bilinear-smooth", "smoothness of T on the operator-norm sphere "
                         "(exit 1 when not smooth)");
  bsmooth->add_option("--input", input_text, "tensor payload (path or inline)")
      ->required();
  bsmooth->add_option("--seed", seed, "rng seed")->capture_default_str();

  auto* verify = app.add_subcommand(
      "verify", "run a theorem suite (or, with no --theorem, every "
                "registered suite) against its independent oracle");
  verify->add_option("--theorem", theorem, "suite id (see list-theorems)");
  auto* verify_trials = verify->add_option(
      "--trials", trials, "trial count (default: per-suite default)");
  verify->add_option("--seed", seed, "rng seed")->capture_default_str();

  auto* list = app.add_subcommand("list-theorems", "registered suite ids");
  (void)list;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    (void)app.exit(e);  // prints the message on stderr
    return 2;
  }

  try {
    if (derive->parsed()) {
      Space s = normgeo::jsonio::parse_space(space_text);
      return run_derive(s, normgeo::jsonio::parse_vector(x_text),
                        normgeo::jsonio::parse_vector(y_text),
                        method.empty() ? "auto" : method, format);
    }
    if (ortho->parsed()) {
      Space s = normgeo::jsonio::parse_space(space_text);
      return run_ortho(s, normgeo::jsonio::parse_vector(x_text),
                       normgeo::jsonio::parse_vector(y_text), relation, eps,
                       ortho_eps->count() > 0, tol, ortho_tol->count() > 0,
                       format);
    }
    if (cone->parsed()) {
      Space s = normgeo::jsonio::parse_space(space_text);
      return run_cone(s, normgeo::jsonio::parse_vector(x_text),
                      normgeo::jsonio::parse_vector(y_text), cone_resolution,
                      format);
    }
    if (support->parsed()) {
      Space s = normgeo::jsonio::parse_space(space_text);
      return run_support(s, normgeo::jsonio::parse_vector(x_text), format);
    }
    if (bnorm->parsed())
      return run_bilinear_norm(load_payload(input_text),
                               method.empty() ? "multistart" : method,
                               restarts, resolution, seed, format);
    if (bortho->parsed())
      return run_bilinear_ortho(load_payload(input_text), eps,
                                bortho_eps->count() > 0, tol, seed, format);
    if (bsmooth->parsed())
      return run_bilinear_smooth(load_payload(input_text), seed, format);
    if (verify->parsed())
      return run_verify(theorem, trials, verify_trials->count() > 0, seed,
                        format);
    if (list->parsed()) return run_list_theorems(format);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
