#include "normgeo/json.hpp"

#include <charconv>

namespace normgeo::jsonio {

json space_to_json(const Space& s) {
  json j;
  switch (s.kind()) {
    case Space::Kind::lp:
      j["kind"] = "lp";
      if (s.p().is_inf())
        j["p"] = "inf";
      else
        j["p"] = s.p().value();
      j["n"] = s.dim();
      break;
    case Space::Kind::sum1:
    case Space::Kind::prodmax:
      j["kind"] = s.kind() == Space::Kind::sum1 ? "sum1" : "prodmax";
      j["left"] = space_to_json(s.left());
      j["right"] = space_to_json(s.right());
      break;
  }
  return j;
}

Space space_from_json(const json& j) {
  if (j.is_string()) return parse_space(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw input_error("space spec must be an object with a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "lp") {
    if (!j.contains("p") || !j.contains("n"))
      throw input_error("lp space spec needs \"p\" and \"n\"");
    if (!j["n"].is_number_integer())
      throw input_error("space dimension must be an integer");
    int n = j["n"].get<int>();
    const json& p = j["p"];
    if (p.is_string()) {
      if (p.get<std::string>() != "inf")
        throw input_error("exponent must be a number or \"inf\"");
      return Space::lp_inf(n);
    }
    if (!p.is_number()) throw input_error("exponent must be a number or \"inf\"");
    return Space::lp(p.get<double>(), n);
  }
  if (kind == "sum1" || kind == "prodmax") {
    if (!j.contains("left") || !j.contains("right"))
      throw input_error("composite space spec needs \"left\" and \"right\"");
    Space l = space_from_json(j["left"]);
    Space r = space_from_json(j["right"]);
    return kind == "sum1" ? Space::sum1(std::move(l), std::move(r))
                          : Space::prodmax(std::move(l), std::move(r));
  }
  throw input_error("unknown space kind: " + kind);
}

json must_parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw input_error("malformed JSON: " + text);
  return j;
}

Space parse_space(const std::string& text) {
  if (text.rfind("lp:", 0) == 0) {
    size_t colon = text.find(':', 3);
    if (colon == std::string::npos)
      throw input_error("compact space syntax is lp:<p>:<n>");
    std::string ps = text.substr(3, colon - 3);
    std::string ns = text.substr(colon + 1);
    int n = 0;
    auto [end, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
    if (ec != std::errc() || end != ns.data() + ns.size())
      throw input_error("bad dimension in compact space syntax: " + ns);
    if (ps == "inf") return Space::lp_inf(n);
    double p = 0;
    char* pend = nullptr;
    p = std::strtod(ps.c_str(), &pend);
    if (pend != ps.c_str() + ps.size() || ps.empty())
      throw input_error("bad exponent in compact space syntax: " + ps);
    return Space::lp(p, n);
  }
  return space_from_json(must_parse(text));
}

vec parse_vector(const std::string& text) {
  json j = must_parse(text);
  if (!j.is_array()) throw input_error("vector literal must be a JSON array");
  vec v;
  v.reserve(j.size());
  for (const json& c : j) {
    if (!c.is_number()) throw input_error("vector entries must be numbers");
    v.push_back(c.get<double>());
  }
  return v;
}

json vector_payload(const Space& s, const vec& v) {
  json j;
  j["space"] = space_to_json(s);
  j["v"] = v;
  return j;
}

std::pair<Space, vec> vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("v"))
    throw input_error("vector payload needs \"space\" and \"v\"");
  Space s = space_from_json(j["space"]);
  if (!j["v"].is_array()) throw input_error("\"v\" must be a JSON array");
  vec v;
  for (const json& c : j["v"]) {
    if (!c.is_number()) throw input_error("vector entries must be numbers");
    v.push_back(c.get<double>());
  }
  if (static_cast<int>(v.size()) != s.dim())
    throw input_error("vector length does not match space dimension");
  return {std::move(s), std::move(v)};
}

json tensor_to_json(const BilinearOp& T) {
  json j;
  j["X"] = space_to_json(T.domain_x());
  j["Y"] = space_to_json(T.domain_y());
  j["Z"] = space_to_json(T.codomain());
  int dx = T.domain_x().dim(), dy = T.domain_y().dim(), dz = T.codomain().dim();
  json c = json::array();
  for (int k = 0; k < dz; ++k) {
    json plane = json::array();
    for (int i = 0; i < dx; ++i) {
      json row = json::array();
      for (int jj = 0; jj < dy; ++jj) row.push_back(T.coeff(k, i, jj));
      plane.push_back(std::move(row));
    }
    c.push_back(std::move(plane));
  }
  j["c"] = std::move(c);
  return j;
}

BilinearOp tensor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("X") || !j.contains("Y") ||
      !j.contains("Z") || !j.contains("c"))
    throw input_error("tensor payload needs \"X\", \"Y\", \"Z\", and \"c\"");
  Space X = space_from_json(j["X"]);
  Space Y = space_from_json(j["Y"]);
  Space Z = space_from_json(j["Z"]);
  const json& c = j["c"];
  if (!c.is_array() || static_cast<int>(c.size()) != Z.dim())
    throw input_error("\"c\" must be an array of dim(Z) planes");
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(Z.dim()) * X.dim() * Y.dim());
  for (const json& plane : c) {
    if (!plane.is_array() || static_cast<int>(plane.size()) != X.dim())
      throw input_error("each tensor plane must hold dim(X) rows");
    for (const json& row : plane) {
      if (!row.is_array() || static_cast<int>(row.size()) != Y.dim())
        throw input_error("each tensor row must hold dim(Y) numbers");
      for (const json& e : row) {
        if (!e.is_number()) throw input_error("tensor entries must be numbers");
        flat.push_back(e.get<double>());
      }
    }
  }
  return BilinearOp(std::move(X), std::move(Y), std::move(Z), std::move(flat));
}

std::string dump_canonical(const json& j) { return j.dump(); }

}  // namespace normgeo::jsonio
