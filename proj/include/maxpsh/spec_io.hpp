#pragma once

// JSON body/model specifications and report serialization.
//
// Body:
//   {"type":"polytope","halfspaces":[{"a":[...],"b":...},...]}
//   {"type":"ellipsoid","Q":[[...],...], "center":[...]}          center optional
//   {"type":"smooth","kind":"superellipse",
//    "params":{"exponent":q,"semi_axes":[...],"center":[...]}}     center optional
// Model:
//   {"model":"strip1d"|"disc1d"|"striptube"|"elliptictube","body":<body>}
//   <body>   shorthand for {"model":"elliptictube","body":<body>}

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxpsh/convex_body.hpp"
#include "maxpsh/errors.hpp"
#include "maxpsh/gauge.hpp"
#include "maxpsh/levi.hpp"
#include "maxpsh/models.hpp"

namespace maxpsh {

using json = nlohmann::json;

namespace detail {

inline RealVector vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw SpecError(std::string(what) + ": expected a non-empty array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SpecError(std::string(what) + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  if (!v.allFinite()) throw SpecError(std::string(what) + ": non-finite entry");
  return v;
}

inline RealMatrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw SpecError(std::string(what) + ": expected a row-major array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  RealMatrix M;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const RealVector row = vector_from_json(j[static_cast<std::size_t>(r)], what);
    if (r == 0) M.resize(rows, row.size());
    if (row.size() != M.cols()) throw SpecError(std::string(what) + ": ragged matrix");
    M.row(r) = row.transpose();
  }
  return M;
}

inline json vector_to_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace detail

inline ConvexBody body_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw SpecError("body: missing \"type\"");
  const std::string type = j["type"];
  if (type == "polytope") {
    if (!j.contains("halfspaces") || !j["halfspaces"].is_array()) throw SpecError("polytope: missing \"halfspaces\"");
    std::vector<Halfspace> hs;
    for (const auto& h : j["halfspaces"]) {
      if (!h.is_object() || !h.contains("a") || !h.contains("b") || !h["b"].is_number()) {
        throw SpecError("polytope: each halfspace needs \"a\" and \"b\"");
      }
      hs.push_back({detail::vector_from_json(h["a"], "halfspace.a"), h["b"].get<double>()});
    }
    return ConvexBody::polytope(std::move(hs));
  }
  if (type == "ellipsoid") {
    if (!j.contains("Q")) throw SpecError("ellipsoid: missing \"Q\"");
    RealVector center;
    if (j.contains("center")) center = detail::vector_from_json(j["center"], "ellipsoid.center");
    return ConvexBody::ellipsoid(detail::matrix_from_json(j["Q"], "ellipsoid.Q"), center);
  }
  if (type == "smooth") {
    const std::string kind = j.value("kind", "");
    if (kind != "superellipse") throw SpecError("smooth: unknown kind \"" + kind + "\" (supported: superellipse)");
    if (!j.contains("params") || !j["params"].is_object()) throw SpecError("smooth: missing \"params\"");
    const json& p = j["params"];
    if (!p.contains("exponent") || !p["exponent"].is_number()) throw SpecError("superellipse: missing \"exponent\"");
    if (!p.contains("semi_axes")) throw SpecError("superellipse: missing \"semi_axes\"");
    RealVector center;
    if (p.contains("center")) center = detail::vector_from_json(p["center"], "superellipse.center");
    return ConvexBody::superellipse(p["exponent"].get<double>(), detail::vector_from_json(p["semi_axes"], "superellipse.semi_axes"), center);
  }
  throw SpecError("body: unknown type \"" + type + "\"");
}

/// A bare body object (no "model" key) is read as the elliptic tube over it.
inline Model model_from_json(const json& j) {
  if (j.is_object() && !j.contains("model") && j.contains("type")) return Model::elliptic_tube(body_from_json(j));
  if (!j.is_object() || !j.contains("model") || !j["model"].is_string()) throw SpecError("model: missing \"model\"");
  const std::string name = j["model"];
  if (name == "strip1d") return Model::strip1d();
  if (name == "disc1d") return Model::disc1d();
  if (name == "striptube" || name == "elliptictube") {
    if (!j.contains("body")) throw SpecError(name + ": missing \"body\"");
    ConvexBody body = body_from_json(j["body"]);
    if (name == "striptube") return Model::strip_tube(Gauge(std::move(body)));
    return Model::elliptic_tube(std::move(body));
  }
  throw SpecError("model: unknown model \"" + name + "\"");
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open model spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(parse_json_text(ss.str()));
}

inline json point_to_json(const ComplexPoint& z) {
  return json{{"re", detail::vector_to_json(z.x)}, {"im", detail::vector_to_json(z.y)}};
}

/// {check, model, samples, h, tol, worst_point, worst_value, pass}
inline json report_to_json(const CheckReport& r) {
  json j;
  j["check"] = r.check;
  j["model"] = r.model;
  j["samples"] = r.samples;
  j["h"] = r.h;
  j["tol"] = r.tol;
  j["worst_point"] = r.worst_point.dim() > 0 ? point_to_json(r.worst_point) : json(nullptr);
  j["worst_value"] = r.worst_value;
  j["pass"] = r.pass;
  return j;
}

}  // namespace maxpsh
