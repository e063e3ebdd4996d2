#pragma once

// Finite-statistics model of the photon-counting steering experiment:
// Born-rule outcome probabilities, Poisson/multinomial coincidence counts,
// correlation estimates with statistical and systematic errors, and the
// scenario runner used for the alpha sweeps.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "steer/config.hpp"
#include "steer/geometry.hpp"
#include "steer/quantum.hpp"
#include "steer/steering.hpp"

namespace steer {

struct SourceModel {
  StateSpec state = WernerSpec{1.0};
  std::uint64_t pairs_per_setting = 100000;
  /// Standard deviation of the per-run drift: Werner states jitter W, other
  /// states are depolarized by |N(0, sigma)|. Zero disables drift.
  double drift_sigma = 0.0;

  /// The nominal state, or a drifted copy when drift is enabled.
  DensityMatrix realize(std::mt19937_64& gen) const;
};

/// p(+,+), p(+,-), p(-,+), p(-,-)
struct OutcomeProbabilities {
  std::array<double, 4> p{};
  double correlation() const { return p[0] - p[1] - p[2] + p[3]; }
};

OutcomeProbabilities outcome_probabilities(const DensityMatrix& rho, const Direction& a, const Direction& b);

struct SettingCounts {
  std::array<std::uint64_t, 4> n{};  // N++, N+-, N-+, N--
  std::uint64_t total() const { return n[0] + n[1] + n[2] + n[3]; }
  friend bool operator==(const SettingCounts&, const SettingCounts&) = default;
};

struct CountsRecord {
  MeasurementFrame alice;
  MeasurementFrame bob;
  std::vector<SettingCounts> counts;  // row-major m x n
  std::uint64_t seed = 0;

  const SettingCounts& at(std::size_t j, std::size_t k) const { return counts[j * bob.size() + k]; }
};

/// Poisson total per setting pair (mean pairs_per_setting), multinomial split.
CountsRecord simulate_counts(const SourceModel& source, const MeasurementFrame& alice, const MeasurementFrame& bob,
                             std::uint64_t seed);

/// Pseudo-counts round(N p) with no sampling noise.
CountsRecord expected_counts(const DensityMatrix& rho, const MeasurementFrame& alice, const MeasurementFrame& bob,
                             std::uint64_t pairs);

struct EstimatedCorrelation {
  CorrelationMatrix m_hat;
  Matrix delta;  // sqrt(sys^2 + stat^2)
  Matrix sys;
  Matrix stat;
};

/// Estimates M from counts. The systematic part is the largest change of
/// a_j^T T b_k when b_k is tilted by sys_angle towards either transverse
/// axis (both signs); T is the reference spin correlation of the source.
EstimatedCorrelation estimate_correlation(const CountsRecord& counts, double sys_angle,
                                          const SpinCorrelationMatrix& reference_t);

struct ParameterEstimate {
  double value = 0.0;        // parameter of the point estimate M_hat
  double mean = 0.0;         // bootstrap mean
  double uncertainty = 0.0;  // bootstrap standard deviation
};

/// Parametric bootstrap: M_jk ~ clamp(N(M_hat_jk, delta_jk), -1, 1).
ParameterEstimate propagate_uncertainty(const EstimatedCorrelation& est, Inequality which, std::size_t n_resamples,
                                        std::uint64_t seed);

struct Scenario {
  SourceModel source;
  FrameSpec alice = NamedFrameSpec{"standard_triad"};
  FrameSpec bob = NamedFrameSpec{"standard_triad"};
  std::vector<double> alpha_deg;  // sweep; empty -> single point with the frames as given
  std::optional<double> phi_deg;  // overrides the tilt of a pair-kind Alice frame
  double sys_angle_deg = 0.5;
  std::uint64_t seed = 1;
  std::vector<Inequality> inequalities{Inequality::kRis, Inequality::kNss};
  std::size_t resamples = 200;
};

struct ScenarioRow {
  std::optional<double> alpha_deg;
  double ris_pred = std::nan("");
  double ris_sim = std::nan("");
  double ris_err = std::nan("");
  double nss_pred = std::nan("");
  double nss_sim = std::nan("");
  double nss_err = std::nan("");
  double ris_bound = std::nan("");
  double nss_bound = std::nan("");
  bool ris_violated = false;
  bool nss_violated = false;
};

/// Alice's frame at one sweep point.
MeasurementFrame scenario_alice_frame(const Scenario& s, std::optional<double> alpha_deg);

/// Infinite-statistics RIS value; uses the projector form when both frames
/// are orthonormal, the general M = A^T T B path otherwise.
double predicted_ris(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob);
/// Infinite-statistics NSS value (Alice must have two settings).
double predicted_nss(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob);

/// One row per sweep point, in sweep order. Points run in parallel with
/// independent seeded streams derived from (seed, index).
std::vector<ScenarioRow> run_scenario(const Scenario& s);

Scenario parse_scenario(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

inline constexpr const char* kScenarioCsvHeader =
    "alpha_deg,ris_pred,ris_sim,ris_err,nss_pred,nss_sim,nss_err,ris_bound,nss_bound,ris_violated,nss_violated";

/// Numbers with 6 significant digits. The violated flags are recomputed from
/// the printed numbers (sim - bound > err) so that the file is self-consistent.
void write_scenario_csv(std::ostream& os, const std::vector<ScenarioRow>& rows);
std::vector<ScenarioRow> read_scenario_csv(std::istream& is);
nlohmann::json scenario_rows_to_json(const std::vector<ScenarioRow>& rows);

/// 6 significant digits, "nan" for NaN.
std::string format_number(double x);

}  // namespace steer
