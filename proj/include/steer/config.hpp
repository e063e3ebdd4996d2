#pragma once

// JSON descriptions of states, frames and scenarios.
//
//   state:  {"kind":"werner","W":0.985}
//           {"kind":"werner","F":0.984}   (singlet fidelity, W = (4F - 1)/3)
//           {"kind":"matrix","re":[[...4]...4],"im":[[...]...]}
//   frame:  {"kind":"named","name":"standard_triad"|"misaligned_triad"|"tetrahedron"}
//           {"kind":"pair","normal":[x,y,z],"phi_deg":0,"alpha_deg":0}
//           {"kind":"explicit","directions":[[x,y,z],...]}
//
// Parse errors throw ConfigError.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "steer/geometry.hpp"
#include "steer/quantum.hpp"
#include "steer/steering.hpp"

namespace steer {

struct WernerSpec {
  double w = 1.0;
};
struct MatrixSpec {
  DensityMatrix::Entries entries{};
};
using StateSpec = std::variant<WernerSpec, MatrixSpec>;

struct NamedFrameSpec {
  std::string name;
};
struct PairFrameSpec {
  Vec3 normal{0, 1, 0};
  double phi_deg = 0.0;
  double alpha_deg = 0.0;
};
struct ExplicitFrameSpec {
  std::vector<Vec3> directions;
};
using FrameSpec = std::variant<NamedFrameSpec, PairFrameSpec, ExplicitFrameSpec>;

DensityMatrix build_state(const StateSpec& spec);
/// Werner parameter if the spec is a Werner state.
std::optional<double> werner_parameter(const StateSpec& spec);
MeasurementFrame build_frame(const FrameSpec& spec);

StateSpec parse_state(const nlohmann::json& j);
FrameSpec parse_frame(const nlohmann::json& j);
nlohmann::json to_json(const StateSpec& spec);
nlohmann::json to_json(const FrameSpec& spec);

/// Correlation matrix as nested arrays [[...], ...].
Matrix parse_matrix(const nlohmann::json& j);
nlohmann::json to_json(const Matrix& m);

nlohmann::json load_json_file(const std::string& path);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

}  // namespace steer
