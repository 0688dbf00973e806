#include "widthslab/classio.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "widthslab/classes.hpp"

namespace widthslab {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw ParameterError("class description: " + what);
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    malformed(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

std::size_t size_field(const json& j, const char* key) {
  double v = number_field(j, key);
  if (v < 0 || v != std::floor(v)) malformed(std::string(key) + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

// "p" may be a number or the string "inf".
double exponent_field(const json& j) {
  if (!j.contains("p")) malformed("missing field 'p'");
  const json& p = j["p"];
  if (p.is_string()) {
    std::string s = p.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity")
      return std::numeric_limits<double>::infinity();
    malformed("unrecognized exponent '" + s + "'");
  }
  if (!p.is_number()) malformed("'p' must be a number or \"inf\"");
  return p.get<double>();
}

Vec vec_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    malformed(std::string("missing array field '") + key + "'");
  Vec out;
  for (const json& e : j[key]) {
    if (!e.is_number()) malformed(std::string(key) + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Matrix matrix_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    malformed(std::string("missing row-array field '") + key + "'");
  const json& rows = j[key];
  std::size_t cols = 0;
  std::vector<Vec> data;
  for (const json& row : rows) {
    if (!row.is_array()) malformed(std::string(key) + " must hold rows");
    Vec r;
    for (const json& e : row) {
      if (!e.is_number()) malformed(std::string(key) + " must hold numbers");
      r.push_back(e.get<double>());
    }
    if (cols == 0) cols = r.size();
    if (r.size() != cols || cols == 0)
      malformed(std::string(key) + " rows must share a positive length");
    data.push_back(std::move(r));
  }
  Matrix M(data.size(), cols);
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t c = 0; c < cols; ++c) M(i, c) = data[i][c];
  return M;
}

void check_m(const json& j, std::size_t actual) {
  if (j.contains("m") && size_field(j, "m") != actual)
    malformed("'m' contradicts the data dimensions");
}

FunctionClass build(const json& j) {
  if (!j.is_object()) malformed("top level must be an object");
  if (!j.contains("type") || !j["type"].is_string())
    malformed("missing string field 'type'");
  const std::string type = j["type"].get<std::string>();
  std::string id = j.value("id", std::string{});
  const bool symmetric = j.value("symmetric", false);

  if (type == "vpolytope") {
    Matrix V = matrix_field(j, "vertices");
    check_m(j, V.cols());
    if (id.empty()) id = "vpolytope";
    return FunctionClass(std::move(id), VPolytope{std::move(V)}, symmetric);
  }
  if (type == "hpolytope") {
    Matrix rows = matrix_field(j, "rows");
    Vec bounds = vec_field(j, "bounds");
    if (bounds.size() != rows.rows())
      malformed("'bounds' length must match the row count");
    std::size_t aux = j.contains("aux") ? size_field(j, "aux") : 0;
    if (aux >= rows.cols())
      malformed("'aux' must leave at least one function coordinate");
    check_m(j, rows.cols() - aux);
    if (id.empty()) id = "hpolytope";
    return FunctionClass(
        std::move(id),
        HPolytope{std::move(rows), std::move(bounds), static_cast<int>(aux)},
        symmetric);
  }
  if (type == "ellipsoid") {
    Vec center = vec_field(j, "center");
    Matrix M = matrix_field(j, "map");
    if (M.rows() != M.cols() || M.rows() != center.size())
      malformed("'map' must be square and match 'center'");
    check_m(j, center.size());
    if (id.empty()) id = "ellipsoid";
    return FunctionClass(std::move(id),
                         Ellipsoid{std::move(center), std::move(M)},
                         symmetric);
  }
  if (type == "pball") {
    Matrix M = matrix_field(j, "map");
    if (M.rows() != M.cols()) malformed("'map' must be square");
    check_m(j, M.rows());
    double p = exponent_field(j);
    if (!(p > 0.0 && p <= 1.0))
      malformed("ball exponent must lie in (0, 1]");
    if (id.empty()) id = "pball";
    // symmetric by construction; an explicit flag may not deny it
    return FunctionClass(std::move(id), PBall{std::move(M), p}, true);
  }
  if (type == "sobolev") {
    SobolevSpec spec;
    spec.m = size_field(j, "m");
    spec.s = static_cast<int>(size_field(j, "s"));
    spec.p = exponent_field(j);
    return sobolev_ball(spec, std::move(id));
  }
  if (type == "lpball") {
    return lp_ball(size_field(j, "m"), exponent_field(j), std::move(id));
  }
  if (type == "random_vpolytope") {
    double radius = j.contains("radius") ? number_field(j, "radius") : 1.0;
    std::uint64_t seed = j.contains("seed")
                             ? static_cast<std::uint64_t>(size_field(j, "seed"))
                             : 1;
    bool symmetrize = j.value("symmetrize", false);
    return random_vpolytope(size_field(j, "m"), size_field(j, "k"), radius,
                            seed, symmetrize, std::move(id));
  }
  malformed("unknown type '" + type + "'");
}

}  // namespace

FunctionClass class_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("unparsable JSON: ") + e.what());
  }
  FunctionClass F = build(j);
  if (j.contains("convex")) {
    if (!j["convex"].is_boolean()) malformed("'convex' must be a boolean");
    F.override_convex(j["convex"].get<bool>());
  }
  return F;
}

FunctionClass load_class(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read class file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return class_from_json(buf.str());
}

}  // namespace widthslab
