#include "steer/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "steer/errors.hpp"

namespace steer {

using nlohmann::json;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

namespace {

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

Vec3 parse_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector");
  Vec3 v{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ConfigError("expected numeric vector components");
    v[i] = j[i].get<double>();
  }
  return v;
}

std::array<std::array<double, 4>, 4> parse_4x4(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 4) throw ConfigError(std::string("'") + key + "' must be a 4x4 array");
  std::array<std::array<double, 4>, 4> out{};
  for (std::size_t r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw ConfigError(std::string("'") + key + "' must be a 4x4 array");
    for (std::size_t c = 0; c < 4; ++c) {
      if (!j[r][c].is_number()) throw ConfigError(std::string("'") + key + "' has a non-numeric entry");
      out[r][c] = j[r][c].get<double>();
    }
  }
  return out;
}

}  // namespace

StateSpec parse_state(const json& j) {
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "werner") {
    if (j.contains("W") == j.contains("F")) throw ConfigError("werner state: give exactly one of 'W' or 'F'");
    if (j.contains("F")) {
      const double f = get_field<double>(j, "F");
      if (!(f >= 0.25 && f <= 1.0)) throw ConfigError("werner state: F must lie in [0.25, 1]");
      return WernerSpec{closest_werner_parameter(f)};
    }
    const double w = get_field<double>(j, "W");
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("werner state: W must lie in [0, 1]");
    return WernerSpec{w};
  }
  if (kind == "matrix") {
    const auto re = parse_4x4(get_field<json>(j, "re"), "re");
    const auto im = j.contains("im") ? parse_4x4(j.at("im"), "im") : std::array<std::array<double, 4>, 4>{};
    MatrixSpec spec;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) spec.entries[r * 4 + c] = Complex(re[r][c], im[r][c]);
    const auto diag = validate_state(DensityMatrix::unchecked(spec.entries));
    if (!diag.pass()) throw ConfigError("matrix state is not a valid density matrix: " + diag.summary());
    return spec;
  }
  throw ConfigError("unknown state kind '" + kind + "'");
}

FrameSpec parse_frame(const json& j) {
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "named") {
    auto name = get_field<std::string>(j, "name");
    if (name != "standard_triad" && name != "misaligned_triad" && name != "tetrahedron")
      throw ConfigError("unknown named frame '" + name + "'");
    return NamedFrameSpec{std::move(name)};
  }
  if (kind == "pair") {
    PairFrameSpec p;
    p.normal = parse_vec3(get_field<json>(j, "normal"));
    if (!(norm(p.normal) > 0.0)) throw ConfigError("pair frame: normal must be nonzero");
    p.phi_deg = j.value("phi_deg", 0.0);
    p.alpha_deg = j.value("alpha_deg", 0.0);
    return p;
  }
  if (kind == "explicit") {
    const auto dirs = get_field<json>(j, "directions");
    if (!dirs.is_array() || dirs.empty() || dirs.size() > 3)
      throw ConfigError("explicit frame: need between 1 and 3 directions");
    ExplicitFrameSpec e;
    for (const auto& d : dirs) {
      const Vec3 v = parse_vec3(d);
      if (std::abs(norm(v) - 1.0) > 1e-9) throw ConfigError("explicit frame: directions must be unit vectors");
      e.directions.push_back(v);
    }
    return e;
  }
  throw ConfigError("unknown frame kind '" + kind + "'");
}

DensityMatrix build_state(const StateSpec& spec) {
  if (const auto* w = std::get_if<WernerSpec>(&spec)) return werner_state(w->w);
  return DensityMatrix::from_entries(std::get<MatrixSpec>(spec).entries);
}

std::optional<double> werner_parameter(const StateSpec& spec) {
  if (const auto* w = std::get_if<WernerSpec>(&spec)) return w->w;
  return std::nullopt;
}

MeasurementFrame build_frame(const FrameSpec& spec) {
  if (const auto* n = std::get_if<NamedFrameSpec>(&spec)) {
    if (n->name == "standard_triad") return standard_triad();
    if (n->name == "misaligned_triad") return misaligned_triad();
    if (n->name == "tetrahedron") return tetrahedron_frame();
    throw ConfigError("unknown named frame '" + n->name + "'");
  }
  if (const auto* p = std::get_if<PairFrameSpec>(&spec))
    return tilted_pair(deg_to_rad(p->phi_deg), deg_to_rad(p->alpha_deg), Direction::normalize(p->normal));
  std::vector<Direction> dirs;
  for (const auto& v : std::get<ExplicitFrameSpec>(spec).directions) dirs.push_back(Direction::normalize(v));
  return MeasurementFrame(std::move(dirs));
}

json to_json(const StateSpec& spec) {
  if (const auto* w = std::get_if<WernerSpec>(&spec)) return {{"kind", "werner"}, {"W", w->w}};
  const auto& e = std::get<MatrixSpec>(spec).entries;
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < 4; ++r) {
    json rr = json::array(), ii = json::array();
    for (std::size_t c = 0; c < 4; ++c) {
      rr.push_back(e[r * 4 + c].real());
      ii.push_back(e[r * 4 + c].imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"kind", "matrix"}, {"re", re}, {"im", im}};
}

json to_json(const FrameSpec& spec) {
  if (const auto* n = std::get_if<NamedFrameSpec>(&spec)) return {{"kind", "named"}, {"name", n->name}};
  if (const auto* p = std::get_if<PairFrameSpec>(&spec))
    return {{"kind", "pair"}, {"normal", p->normal}, {"phi_deg", p->phi_deg}, {"alpha_deg", p->alpha_deg}};
  json dirs = json::array();
  for (const auto& v : std::get<ExplicitFrameSpec>(spec).directions) dirs.push_back(v);
  return {{"kind", "explicit"}, {"directions", dirs}};
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw ConfigError("matrix must have between 1 and 3 rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0 || cols > 3) throw ConfigError("matrix must have between 1 and 3 columns");
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError("matrix has a non-numeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace steer
