// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "steer/experiment.hpp"
#include "steer/geometry.hpp"
#include "steer/lhs.hpp"
#include "steer/rng.hpp"
#include "steer/steering.hpp"
#include "test_support.hpp"

using namespace steer;

namespace {

const double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
const Direction kY{{0, 1, 0}};

struct Outcome {
  bool ok = true;
  std::string detail;
};

Matrix werner_t(double w) { return -w * Matrix::identity(3); }

double deg(double d) { return d * kPi / 180.0; }

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Rotation invariance for m = n = 3.
Outcome rotation_invariance() {
  const auto triad = standard_triad();
  double lo = 1e300, hi = -1e300;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto a = rotate_frame(triad, random_rotation(derive_seed(101, 2 * i)));
    const auto b = rotate_frame(triad, random_rotation(derive_seed(101, 2 * i + 1)));
    const double r = ris_predicted(werner_t(1.0), a, b);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {std::abs(lo - 3.0) < 1e-10 && std::abs(hi - 3.0) < 1e-10 && hi - lo < 1e-10,
          fmt("RIS in [%.15f, %.15f], spread %.2e", lo, hi, hi - lo)};
}

// 2. Onset of RIS violation in W by bisection on the violation flag.
double violation_onset(const MeasurementFrame& alice, const MeasurementFrame& bob) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (assess_ris(predicted_correlation(werner_t(mid), alice, bob)).violated ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome werner_thresholds() {
  const double triads = violation_onset(standard_triad(), standard_triad());
  const auto pair = pair_in_plane(kY, 0.0);
  const double pairs = violation_onset(pair, pair);
  return {std::abs(triads - 1 / kSqrt3) <= 1e-6 && std::abs(pairs - 1 / kSqrt2) <= 1e-6,
          fmt("triads %.9f (1/sqrt3 %.9f), pairs %.9f (1/sqrt2 %.9f)", triads, 1 / kSqrt3, pairs, 1 / kSqrt2)};
}

// 3. Case values through the general pipeline.
Outcome case_values() {
  Outcome o;
  auto check = [&](const char* name, double got, double want, double tol) {
    const bool ok = std::abs(got - want) <= tol;
    o.ok = o.ok && ok;
    o.detail += fmt("%s%s=%.6f%s", o.detail.empty() ? "" : ", ", name, got, ok ? "" : " (off)");
  };
  const auto bob_pair = pair_in_plane(kY, 0.0);
  check("phi0", ris_predicted(werner_t(0.985), tilted_pair(0.0, 0.0, kY), bob_pair), 1.970, 1e-3);
  check("phi64", ris_predicted(werner_t(0.973), tilted_pair(deg(64), 0.0, kY), bob_pair), 1.400, 5e-3);
  check("triads", ris_predicted(werner_t(0.984), standard_triad(), standard_triad()), 2.952, 1e-9);
  const MeasurementFrame xz({Direction{{1, 0, 0}}, Direction{{0, 0, 1}}});
  check("m2n3", ris_predicted(werner_t(0.984), xz, standard_triad()), 1.968, 1e-9);
  check("tetra", trace_norm(predicted_correlation(werner_t(0.97), tetrahedron_frame(), standard_triad())), 2.744,
        5e-3);
  const MeasurementFrame sixty({Direction{{0, 0, 1}}, Direction{{std::sin(deg(60)), 0, std::cos(deg(60))}}});
  check("sixty", trace_norm(predicted_correlation(werner_t(1.0), sixty, xz)), 1.93185, 1e-5);
  return o;
}

// 4. Minimization over in-plane rotations: numeric, analytic, projected trace norm.
Outcome minimization_theorem() {
  std::mt19937_64 gen(404);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Matrix t = testing::random_physical_t(gen);
    const auto alice = testing::random_pair(gen);
    const auto bob = testing::random_pair(gen);
    const Matrix pa = projection_matrix(alice);
    const double numeric = min_nss_over_rotations(t, pa, bob, MinimizationMode::kNumeric);
    const double analytic = min_nss_over_rotations(t, pa, bob, MinimizationMode::kAnalytic);
    const double projected = trace_norm(pa * t * projection_matrix(bob));
    worst = std::max({worst, std::abs(numeric - analytic), std::abs(analytic - projected)});
  }
  return {worst <= 1e-6, fmt("max deviation %.2e over 50 draws", worst)};
}

// 5. Werner closed forms vs the general pipeline.
Outcome closed_forms() {
  double worst = 0.0;
  const auto bob = pair_in_plane(kY, 0.0);
  for (int i = 0; i < 19; ++i)
    for (int j = 0; j < 19; ++j)
      for (int k = 0; k < 11; ++k) {
        const double phi = deg(10.0 * i), alpha = deg(10.0 * j), w = 0.1 * k;
        const auto alice = tilted_pair(phi, alpha, kY);
        const Matrix t = werner_t(w);
        worst = std::max(worst, std::abs(ris_predicted(t, alice, bob) - werner_ris_closed_form(w, phi)));
        worst = std::max(worst, std::abs(nss_predicted(t, alice, bob) - werner_nss_closed_form(w, phi, alpha)));
      }
  return {worst <= 1e-12, fmt("max deviation %.2e over 19x19x11 points", worst)};
}

// 6. Oracle soundness and polytope tightness.
Outcome oracle_soundness() {
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> scale(0.8, 1.2);
  int feasible = 0, checked = 0;
  double worst_excess = -1e300;
  const auto circle = SphereGrid::circle(1.0);
  const auto sphere = SphereGrid::fibonacci(2000);
  for (int i = 0; i < 60; ++i) {
    const std::size_t m = 2 + i % 2, n = 2 + (i / 2) % 2;
    Matrix x = testing::random_matrix(gen, m, n);
    x = (scale(gen) * std::sqrt(double(m)) / trace_norm(x)) * x;
    bool in_range = true;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) in_range = in_range && std::abs(x(r, c)) <= 1.0;
    if (!in_range) continue;
    ++checked;
    const CorrelationMatrix cm(x);
    const auto v = lhs_membership(cm, n == 2 ? circle : sphere);
    if (v.status != MembershipStatus::kFeasible) continue;
    ++feasible;
    worst_excess = std::max(worst_excess, trace_norm(cm) - std::sqrt(double(m)));
  }
  const double t2 = max_lhs_trace_norm(2, 2, SphereGrid::circle(1.0));
  const double t3 = max_lhs_trace_norm(3, 3, SphereGrid::fibonacci(10000));
  const bool ok = feasible > 0 && worst_excess <= 1e-6 && std::abs(t2 - kSqrt2) <= 1e-6 &&
                  std::abs(t3 - kSqrt3) <= 1e-3;
  return {ok, fmt("%d feasible of %d; max(tr - sqrt m) %.2e; max tr %.9f (2x2), %.6f (3x3)", feasible, checked,
                  worst_excess, t2, t3)};
}

// 7. Oracle verdicts vs the two-setting NSS predicate.
Outcome nss_cross_validation() {
  std::mt19937_64 gen(707);
  std::uniform_real_distribution<double> uni(1.2, 1.6);
  const auto grid = SphereGrid::circle(1.0);
  int outside = 0, disagreements = 0;
  for (int i = 0; i < 200; ++i) {
    const CorrelationMatrix m(testing::matrix_with_nss(gen, uni(gen)));
    const double nss = nss_parameter(m);
    if (std::abs(nss - kSqrt2) <= 0.01) continue;
    ++outside;
    const auto v = lhs_membership(m, grid);
    const bool lhs = v.status == MembershipStatus::kFeasible;
    const bool decided = v.status != MembershipStatus::kIndeterminate;
    if (!decided || lhs != (nss <= kSqrt2)) ++disagreements;
  }
  return {disagreements == 0, fmt("%d matrices outside the band, %d disagreements", outside, disagreements)};
}

// 8. Finite statistics: size of the RIS error bar and its 1/sqrt(N) scaling.
Outcome finite_statistics() {
  const std::vector<std::uint64_t> ns = {10000, 100000, 1000000};
  std::vector<double> mean_unc;
  for (std::uint64_t n : ns) {
    SourceModel src;
    src.state = WernerSpec{0.984};
    src.pairs_per_setting = n;
    const Matrix t = spin_correlation_matrix(build_state(src.state));
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto counts = simulate_counts(src, standard_triad(), standard_triad(), derive_seed(800 + n, s));
      const auto est = estimate_correlation(counts, deg(0.5), t);
      sum += propagate_uncertainty(est, Inequality::kRis, 200, derive_seed(900 + n, s)).uncertainty;
    }
    mean_unc.push_back(sum / 50.0);
  }
  const double at_1e5 = mean_unc[1];
  const double r1 = mean_unc[0] / mean_unc[1] / std::sqrt(10.0);
  const double r2 = mean_unc[1] / mean_unc[2] / std::sqrt(10.0);
  const bool size_ok = at_1e5 >= 0.005 && at_1e5 <= 0.03;
  const bool scaling_ok = std::abs(r1 - 1.0) <= 0.2 && std::abs(r2 - 1.0) <= 0.2;
  return {size_ok && scaling_ok,
          fmt("uncertainty at N=1e5 %.3g, want [0.005, 0.03] (%s); scaling ratio / sqrt(10) %.3f, %.3f (%s)", at_1e5,
              size_ok ? "ok" : "out of range", r1, r2, scaling_ok ? "ok" : "out of range")};
}

// 9. NSS never below RIS for two settings.
Outcome dominance() {
  std::mt19937_64 gen(909);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  double worst = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const Matrix t = testing::random_physical_t(gen);
    const Direction normal = testing::random_direction(gen);
    const auto bob = pair_in_plane(normal, 0.0);
    const auto alice = tilted_pair(angle(gen), angle(gen), normal);
    worst = std::min(worst, nss_predicted(t, alice, bob) - ris_predicted(t, alice, bob));
  }
  return {worst >= -1e-10, fmt("min(NSS - RIS) %.3e over 1000 draws", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"rotation invariance", 1.0, rotation_invariance},
      {"Werner thresholds", 1.0, werner_thresholds},
      {"case values", 1.0, case_values},
      {"minimization over rotations", 10.0, minimization_theorem},
      {"closed-form consistency", 5.0, closed_forms},
      {"LHS oracle soundness and tightness", 30.0, oracle_soundness},
      {"NSS vs LHS cross-validation", 60.0, nss_cross_validation},
      {"finite-statistics behavior", 60.0, finite_statistics},
      {"NSS dominates RIS", 5.0, dominance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s %zu %s: %s; %.2f s (limit %g s)%s\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(),
                secs, c.budget_s, in_time ? "" : " over time");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
