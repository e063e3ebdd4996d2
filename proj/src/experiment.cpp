#include "steer/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "steer/errors.hpp"
#include "steer/rng.hpp"

namespace steer {

using nlohmann::json;

DensityMatrix SourceModel::realize(std::mt19937_64& gen) const {
  if (drift_sigma <= 0.0) return build_state(state);
  std::normal_distribution<double> jitter(0.0, drift_sigma);
  if (const auto w = werner_parameter(state)) return werner_state(std::clamp(*w + jitter(gen), 0.0, 1.0));
  const double v = std::clamp(1.0 - std::abs(jitter(gen)), 0.0, 1.0);
  return build_state(state).mix(maximally_mixed_state(), v);
}

namespace {

std::array<Complex, 4> projector(const Vec3& v, double sign) {
  return {Complex(0.5 * (1.0 + sign * v[2])), Complex(0.5 * sign * v[0], -0.5 * sign * v[1]),
          Complex(0.5 * sign * v[0], 0.5 * sign * v[1]), Complex(0.5 * (1.0 - sign * v[2]))};
}

}  // namespace

OutcomeProbabilities outcome_probabilities(const DensityMatrix& rho, const Direction& a, const Direction& b) {
  OutcomeProbabilities out;
  std::size_t idx = 0;
  for (double s : {1.0, -1.0})
    for (double t : {1.0, -1.0}) {
      const Complex p = expectation(rho, projector(a.vec(), s), projector(b.vec(), t));
      out.p[idx++] = std::max(0.0, p.real());
    }
  return out;
}

namespace {

SettingCounts draw_counts(const OutcomeProbabilities& probs, std::uint64_t mean_pairs, std::mt19937_64& gen) {
  std::poisson_distribution<std::uint64_t> poisson(static_cast<double>(mean_pairs));
  std::uint64_t remaining = poisson(gen);
  double mass = 1.0;
  SettingCounts c;
  for (std::size_t i = 0; i < 3; ++i) {
    const double q = mass > 0.0 ? std::clamp(probs.p[i] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> binom(remaining, q);
    c.n[i] = remaining > 0 ? binom(gen) : 0;
    remaining -= c.n[i];
    mass -= probs.p[i];
  }
  c.n[3] = remaining;
  return c;
}

}  // namespace

CountsRecord simulate_counts(const SourceModel& source, const MeasurementFrame& alice, const MeasurementFrame& bob,
                             std::uint64_t seed) {
  if (source.pairs_per_setting < 1) throw InvalidArgument("simulate_counts: pairs_per_setting must be >= 1");
  std::mt19937_64 gen(seed);
  const DensityMatrix rho = source.realize(gen);
  CountsRecord rec{alice, bob, {}, seed};
  rec.counts.reserve(alice.size() * bob.size());
  for (std::size_t j = 0; j < alice.size(); ++j)
    for (std::size_t k = 0; k < bob.size(); ++k)
      rec.counts.push_back(draw_counts(outcome_probabilities(rho, alice[j], bob[k]), source.pairs_per_setting, gen));
  return rec;
}

CountsRecord expected_counts(const DensityMatrix& rho, const MeasurementFrame& alice, const MeasurementFrame& bob,
                             std::uint64_t pairs) {
  CountsRecord rec{alice, bob, {}, 0};
  for (std::size_t j = 0; j < alice.size(); ++j)
    for (std::size_t k = 0; k < bob.size(); ++k) {
      const auto probs = outcome_probabilities(rho, alice[j], bob[k]);
      SettingCounts c;
      for (std::size_t i = 0; i < 4; ++i) c.n[i] = static_cast<std::uint64_t>(std::llround(pairs * probs.p[i]));
      rec.counts.push_back(c);
    }
  return rec;
}

namespace {

std::pair<Vec3, Vec3> transverse_axes(const Vec3& b) {
  // Seed with the coordinate axis least aligned with b.
  std::size_t axis = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(b[i]) < std::abs(b[axis])) axis = i;
  Vec3 e{};
  e[axis] = 1.0;
  const Vec3 e1 = normalized(e - dot(e, b) * b);
  return {e1, cross(b, e1)};
}

}  // namespace

EstimatedCorrelation estimate_correlation(const CountsRecord& counts, double sys_angle,
                                          const SpinCorrelationMatrix& reference_t) {
  const std::size_t m = counts.alice.size();
  const std::size_t n = counts.bob.size();
  Matrix m_hat(m, n), stat(m, n), sys(m, n), delta(m, n);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const auto& c = counts.at(j, k);
      const auto total = c.total();
      if (total == 0) throw InvalidArgument("estimate_correlation: zero coincidences for a setting pair");
      const double nt = static_cast<double>(total);
      const double e = (static_cast<double>(c.n[0]) + static_cast<double>(c.n[3]) - static_cast<double>(c.n[1]) -
                        static_cast<double>(c.n[2])) /
                       nt;
      m_hat(j, k) = e;
      stat(j, k) = std::sqrt(std::max(0.0, 1.0 - e * e) / nt);

      const Vec3& a = counts.alice[j].vec();
      const Vec3& b = counts.bob[k].vec();
      const Vec3 ta = reference_t.transpose() * a;  // a^T T as a vector
      const double base = dot(ta, b);
      const auto [e1, e2] = transverse_axes(b);
      double worst = 0.0;
      for (const Vec3& dir : {e1, e2, -1.0 * e1, -1.0 * e2}) {
        const Vec3 tilted = std::cos(sys_angle) * b + std::sin(sys_angle) * dir;
        worst = std::max(worst, std::abs(dot(ta, tilted) - base));
      }
      sys(j, k) = worst;
      delta(j, k) = std::sqrt(worst * worst + stat(j, k) * stat(j, k));
    }
  return {CorrelationMatrix(m_hat), delta, sys, stat};
}

namespace {

double parameter_of(const CorrelationMatrix& m, Inequality which) {
  return which == Inequality::kRis ? trace_norm(m) : nss_parameter(m);
}

}  // namespace

ParameterEstimate propagate_uncertainty(const EstimatedCorrelation& est, Inequality which, std::size_t n_resamples,
                                        std::uint64_t seed) {
  ParameterEstimate out;
  out.value = parameter_of(est.m_hat, which);
  if (n_resamples < 2) {
    out.mean = out.value;
    return out;
  }
  const Matrix& base = est.m_hat.matrix();
  std::vector<double> samples(n_resamples);
  const auto count = static_cast<std::ptrdiff_t>(n_resamples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    std::mt19937_64 gen(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m = base;
    for (std::size_t j = 0; j < m.rows(); ++j)
      for (std::size_t k = 0; k < m.cols(); ++k)
        m(j, k) = std::clamp(base(j, k) + est.delta(j, k) * normal(gen), -1.0, 1.0);
    samples[static_cast<std::size_t>(r)] = parameter_of(CorrelationMatrix(m), which);
  }
  // Shifted sums: identical samples give exactly zero spread.
  const double shift = samples.front();
  double sum = 0.0;
  for (double s : samples) sum += s - shift;
  const double offset = sum / static_cast<double>(n_resamples);
  out.mean = shift + offset;
  double ss = 0.0;
  for (double s : samples) ss += (s - shift - offset) * (s - shift - offset);
  out.uncertainty = std::sqrt(ss / static_cast<double>(n_resamples - 1));
  return out;
}

// ---------------------------------------------------------------------------

MeasurementFrame scenario_alice_frame(const Scenario& s, std::optional<double> alpha_deg) {
  if (const auto* pair = std::get_if<PairFrameSpec>(&s.alice)) {
    PairFrameSpec p = *pair;
    if (alpha_deg) p.alpha_deg = *alpha_deg;
    if (s.phi_deg) p.phi_deg = *s.phi_deg;
    return build_frame(p);
  }
  if (alpha_deg) throw ConfigError("an alpha sweep needs a pair-kind alice_frame");
  return build_frame(s.alice);
}

double predicted_ris(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob) {
  if (alice.orthonormal() && bob.orthonormal()) return ris_predicted(t, alice, bob);
  return trace_norm(predicted_correlation(t, alice, bob));
}

double predicted_nss(const SpinCorrelationMatrix& t, const MeasurementFrame& alice, const MeasurementFrame& bob) {
  if (alice.orthonormal() && bob.orthonormal()) return nss_predicted(t, alice, bob);
  return nss_parameter(predicted_correlation(t, alice, bob));
}

namespace {

bool wants(const Scenario& s, Inequality which) {
  return std::find(s.inequalities.begin(), s.inequalities.end(), which) != s.inequalities.end();
}

ScenarioRow run_point(const Scenario& s, const SpinCorrelationMatrix& t, std::optional<double> alpha_deg,
                      std::uint64_t point_seed) {
  const MeasurementFrame alice = scenario_alice_frame(s, alpha_deg);
  const MeasurementFrame bob = build_frame(s.bob);
  ScenarioRow row;
  row.alpha_deg = alpha_deg;
  if (!alpha_deg) {
    if (const auto* p = std::get_if<PairFrameSpec>(&s.alice)) row.alpha_deg = p->alpha_deg;
  }

  const CountsRecord counts = simulate_counts(s.source, alice, bob, derive_seed(point_seed, 0));
  const EstimatedCorrelation est = estimate_correlation(counts, deg_to_rad(s.sys_angle_deg), t);

  if (wants(s, Inequality::kRis)) {
    row.ris_bound = std::sqrt(static_cast<double>(alice.size()));
    row.ris_pred = predicted_ris(t, alice, bob);
    const auto e = propagate_uncertainty(est, Inequality::kRis, s.resamples, derive_seed(point_seed, 1));
    row.ris_sim = e.value;
    row.ris_err = e.uncertainty;
    row.ris_violated = make_assessment(Inequality::kRis, e.value, row.ris_bound, e.uncertainty).violated;
  }
  if (wants(s, Inequality::kNss) && alice.size() == 2) {
    row.nss_bound = std::sqrt(2.0);
    row.nss_pred = predicted_nss(t, alice, bob);
    const auto e = propagate_uncertainty(est, Inequality::kNss, s.resamples, derive_seed(point_seed, 2));
    row.nss_sim = e.value;
    row.nss_err = e.uncertainty;
    row.nss_violated = make_assessment(Inequality::kNss, e.value, row.nss_bound, e.uncertainty).violated;
  }
  return row;
}

}  // namespace

std::vector<ScenarioRow> run_scenario(const Scenario& s) {
  const SpinCorrelationMatrix t = spin_correlation_matrix(build_state(s.source.state));
  std::vector<std::optional<double>> points;
  if (s.alpha_deg.empty()) {
    points.emplace_back(std::nullopt);
  } else {
    for (double a : s.alpha_deg) points.emplace_back(a);
  }
  // Validate once up front so configuration errors surface outside the parallel region.
  (void)scenario_alice_frame(s, points.front());
  (void)build_frame(s.bob);

  std::vector<ScenarioRow> rows(points.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    rows[static_cast<std::size_t>(i)] =
        run_point(s, t, points[static_cast<std::size_t>(i)], derive_seed(s.seed, static_cast<std::uint64_t>(i)));
  return rows;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  Scenario s;
  try {
    if (!j.contains("state")) throw ConfigError("scenario: missing 'state'");
    s.source.state = parse_state(j.at("state"));
    if (j.contains("alice_frame")) s.alice = parse_frame(j.at("alice_frame"));
    if (j.contains("bob_frame")) s.bob = parse_frame(j.at("bob_frame"));
    if (j.contains("sweep")) {
      const auto& sw = j.at("sweep");
      if (!sw.is_object() || !sw.contains("alpha_deg") || !sw.at("alpha_deg").is_array())
        throw ConfigError("scenario: 'sweep' needs an 'alpha_deg' array");
      s.alpha_deg = sw.at("alpha_deg").get<std::vector<double>>();
    }
    if (j.contains("phi_deg")) s.phi_deg = j.at("phi_deg").get<double>();
    if (j.contains("pairs_per_setting")) {
      const auto pairs = j.at("pairs_per_setting").get<double>();
      if (!(pairs >= 1.0)) throw ConfigError("scenario: pairs_per_setting must be >= 1");
      s.source.pairs_per_setting = static_cast<std::uint64_t>(pairs);
    }
    s.source.drift_sigma = j.value("drift_sigma", 0.0);
    if (s.source.drift_sigma < 0.0) throw ConfigError("scenario: drift_sigma must be >= 0");
    s.sys_angle_deg = j.value("sys_angle_deg", s.sys_angle_deg);
    if (!(s.sys_angle_deg >= 0.0 && s.sys_angle_deg < 90.0)) throw ConfigError("scenario: sys_angle_deg out of range");
    s.seed = j.value("seed", s.seed);
    s.resamples = j.value("resamples", s.resamples);
    if (j.contains("inequalities")) {
      s.inequalities.clear();
      for (const auto& name : j.at("inequalities")) s.inequalities.push_back(inequality_from_string(name.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["state"] = to_json(s.source.state);
  j["alice_frame"] = to_json(s.alice);
  j["bob_frame"] = to_json(s.bob);
  if (!s.alpha_deg.empty()) j["sweep"] = {{"alpha_deg", s.alpha_deg}};
  if (s.phi_deg) j["phi_deg"] = *s.phi_deg;
  j["pairs_per_setting"] = s.source.pairs_per_setting;
  j["sys_angle_deg"] = s.sys_angle_deg;
  j["seed"] = s.seed;
  if (s.source.drift_sigma > 0.0) j["drift_sigma"] = s.source.drift_sigma;
  j["resamples"] = s.resamples;
  json ineq = json::array();
  for (auto i : s.inequalities) ineq.push_back(std::string(to_string(i)));
  j["inequalities"] = ineq;
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

namespace {

bool printed_violation(const std::string& sim, const std::string& bound, const std::string& err) {
  const double s = std::strtod(sim.c_str(), nullptr);
  const double b = std::strtod(bound.c_str(), nullptr);
  const double e = std::strtod(err.c_str(), nullptr);
  if (std::isnan(s) || std::isnan(b)) return false;
  return s - b > (std::isnan(e) ? 0.0 : e);
}

}  // namespace

void write_scenario_csv(std::ostream& os, const std::vector<ScenarioRow>& rows) {
  os << kScenarioCsvHeader << '\n';
  for (const auto& r : rows) {
    const std::string ris_sim = format_number(r.ris_sim), ris_err = format_number(r.ris_err);
    const std::string nss_sim = format_number(r.nss_sim), nss_err = format_number(r.nss_err);
    const std::string ris_bound = format_number(r.ris_bound), nss_bound = format_number(r.nss_bound);
    os << format_number(r.alpha_deg.value_or(std::nan(""))) << ',' << format_number(r.ris_pred) << ',' << ris_sim
       << ',' << ris_err << ',' << format_number(r.nss_pred) << ',' << nss_sim << ',' << nss_err << ',' << ris_bound
       << ',' << nss_bound << ',' << (printed_violation(ris_sim, ris_bound, ris_err) ? 1 : 0) << ','
       << (printed_violation(nss_sim, nss_bound, nss_err) ? 1 : 0) << '\n';
  }
}

std::vector<ScenarioRow> read_scenario_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kScenarioCsvHeader) throw ConfigError("scenario CSV: unexpected header");
  std::vector<ScenarioRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw ConfigError("scenario CSV: expected 11 columns");
    auto num = [&](std::size_t i) { return std::strtod(cells[i].c_str(), nullptr); };
    ScenarioRow r;
    if (cells[0] != "nan") r.alpha_deg = num(0);
    r.ris_pred = num(1);
    r.ris_sim = num(2);
    r.ris_err = num(3);
    r.nss_pred = num(4);
    r.nss_sim = num(5);
    r.nss_err = num(6);
    r.ris_bound = num(7);
    r.nss_bound = num(8);
    r.ris_violated = cells[9] == "1";
    r.nss_violated = cells[10] == "1";
    rows.push_back(r);
  }
  return rows;
}

json scenario_rows_to_json(const std::vector<ScenarioRow>& rows) {
  auto num = [](double x) -> json { return std::isnan(x) ? json(nullptr) : json(x); };
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"alpha_deg", r.alpha_deg ? json(*r.alpha_deg) : json(nullptr)},
                   {"ris_pred", num(r.ris_pred)},
                   {"ris_sim", num(r.ris_sim)},
                   {"ris_err", num(r.ris_err)},
                   {"nss_pred", num(r.nss_pred)},
                   {"nss_sim", num(r.nss_sim)},
                   {"nss_err", num(r.nss_err)},
                   {"ris_bound", num(r.ris_bound)},
                   {"nss_bound", num(r.nss_bound)},
                   {"ris_violated", r.ris_violated},
                   {"nss_violated", r.nss_violated}});
  }
  return out;
}

}  // namespace steer
