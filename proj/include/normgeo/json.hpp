#pragma once

#include <json.hpp>
#include <string>
#include <utility>

#include "normgeo/bilinear.hpp"
#include "normgeo/spaces.hpp"

namespace normgeo::jsonio {

using json = nlohmann::json;

// Space schema: {"kind":"lp","p":<number>|"inf","n":<int>}
//            or {"kind":"sum1"|"prodmax","left":<space>,"right":<space>}
json space_to_json(const Space& s);
Space space_from_json(const json& j);

// Accepts the compact form lp:<p>:<n> (p may be "inf") or full JSON.
Space parse_space(const std::string& text);

// A bare JSON array of reals.
vec parse_vector(const std::string& text);

// Vector payload: {"space": <space>, "v": [reals]}
json vector_payload(const Space& s, const vec& v);
std::pair<Space, vec> vector_from_json(const json& j);

// Tensor payload: {"X": <space>, "Y": <space>, "Z": <space>,
//                  "c": [[[reals]]]} with c[k][i][j].
json tensor_to_json(const BilinearOp& T);
BilinearOp tensor_from_json(const json& j);

// Parse helpers that map malformed input onto input_error.
json must_parse(const std::string& text);

// Canonical text form: sorted keys, no whitespace, round-trip floats.
std::string dump_canonical(const json& j);

}  // namespace normgeo::jsonio
