#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "steer/errors.hpp"
#include "steer/experiment.hpp"
#include "steer/rng.hpp"
#include "test_support.hpp"

using namespace steer;

namespace {

const double kSqrt2 = std::sqrt(2.0);

MeasurementFrame xz_pair() { return MeasurementFrame({Direction({1, 0, 0}), Direction({0, 0, 1})}); }

Scenario case_sweep(double w, double phi_deg) {
  Scenario s;
  s.source.state = WernerSpec{w};
  s.alice = PairFrameSpec{{0, 1, 0}, 0.0, 0.0};
  s.bob = PairFrameSpec{{0, 1, 0}, 0.0, 0.0};
  s.alpha_deg = {0, 10, 20, 30, 40, 45, 50, 60, 70, 80, 90};
  s.phi_deg = phi_deg;
  return s;
}

std::string to_csv(const std::vector<ScenarioRow>& rows) {
  std::ostringstream os;
  write_scenario_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("outcome probabilities: examples") {
  const Direction z({0, 0, 1});
  auto p = outcome_probabilities(singlet_state(), z, z);
  CHECK(p.p[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(p.p[1] == doctest::Approx(0.5));
  CHECK(p.p[2] == doctest::Approx(0.5));
  CHECK(p.p[3] == doctest::Approx(0.0).scale(1.0));
  p = outcome_probabilities(maximally_mixed_state(), Direction::normalize({1, 2, 3}), z);
  for (double x : p.p) CHECK(x == doctest::Approx(0.25).epsilon(1e-14));
  const Direction a = Direction::normalize({1, 0.5, -0.2}), b = Direction::normalize({0.3, -1, 0.4});
  CHECK(outcome_probabilities(werner_state(0.7), a, b).correlation() ==
        doctest::Approx(-0.7 * dot(a.vec(), b.vec())).epsilon(1e-13));
}

TEST_CASE("Born-rule consistency on random states") {
  std::mt19937_64 gen(71);
  for (int i = 0; i < 100; ++i) {
    const auto rho = testing::random_density_matrix(gen);
    const auto a = testing::random_direction(gen), b = testing::random_direction(gen);
    const auto p = outcome_probabilities(rho, a, b);
    double sum = 0.0;
    for (double x : p.p) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    const Matrix t = spin_correlation_matrix(rho);
    CHECK(std::abs(p.correlation() - dot(a.vec(), t * b.vec())) <= 1e-12);
  }
}

TEST_CASE("simulated counts: recovery, determinism, uniformity") {
  SourceModel src;
  src.state = WernerSpec{1.0};
  src.pairs_per_setting = 1000000;
  const auto rec = simulate_counts(src, xz_pair(), xz_pair(), 5);
  const auto est = estimate_correlation(rec, 0.0, spin_correlation_matrix(singlet_state()));
  CHECK(est.m_hat.matrix().max_abs_diff(-1.0 * Matrix::identity(2)) <= 0.005);

  const auto again = simulate_counts(src, xz_pair(), xz_pair(), 5);
  CHECK(again.counts == rec.counts);
  CHECK_FALSE(simulate_counts(src, xz_pair(), xz_pair(), 6).counts == rec.counts);

  // W = 0: chi-square with 3 degrees of freedom, 1% critical value 11.345.
  src.state = WernerSpec{0.0};
  src.pairs_per_setting = 100000;
  const auto flat = simulate_counts(src, standard_triad(), standard_triad(), 17);
  for (const auto& c : flat.counts) {
    const double expected = static_cast<double>(c.total()) / 4.0;
    double chi2 = 0.0;
    for (auto x : c.n) chi2 += (static_cast<double>(x) - expected) * (static_cast<double>(x) - expected) / expected;
    CHECK(chi2 < 11.345);
  }
  src.pairs_per_setting = 0;
  CHECK_THROWS_AS(simulate_counts(src, xz_pair(), xz_pair(), 1), InvalidArgument);
}

TEST_CASE("estimate_correlation: examples") {
  const std::uint64_t n = 100000;
  const auto t = spin_correlation_matrix(singlet_state());
  const auto exact = expected_counts(singlet_state(), xz_pair(), xz_pair(), n);
  const auto est = estimate_correlation(exact, 0.0, t);
  CHECK(est.m_hat.matrix().max_abs_diff(-1.0 * Matrix::identity(2)) <= 1.0 / n);
  CHECK(est.stat(0, 0) == 0.0);  // M_hat = -1 exactly
  CHECK(est.stat(1, 1) == 0.0);
  CHECK(est.delta.max_abs_diff(est.stat) == 0.0);

  const auto tilted = estimate_correlation(exact, 0.5 * std::numbers::pi / 180.0, t);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) {
      const double d = tilted.delta(j, k), s = tilted.sys(j, k), st = tilted.stat(j, k);
      CHECK(std::abs(d * d - (s * s + st * st)) <= 1e-12);
      CHECK(d >= 0.0);
    }
  // Orthogonal settings respond to the tilt at first order, aligned ones at second order.
  CHECK(tilted.sys(0, 1) == doctest::Approx(std::sin(0.5 * std::numbers::pi / 180.0)).epsilon(1e-12));
  CHECK(tilted.sys(0, 0) == doctest::Approx(1.0 - std::cos(0.5 * std::numbers::pi / 180.0)).epsilon(1e-9));

  CountsRecord empty{xz_pair(), xz_pair(), std::vector<SettingCounts>(4), 0};
  CHECK_THROWS_AS(estimate_correlation(empty, 0.0, t), InvalidArgument);
}

TEST_CASE("estimator consistency across sample sizes") {
  const MeasurementFrame alice = rotate_frame(xz_pair(), random_rotation(3));
  const MeasurementFrame bob = rotate_frame(xz_pair(), random_rotation(4));
  SourceModel src;
  src.state = WernerSpec{0.9};
  const Matrix truth = predicted_correlation(-0.9 * Matrix::identity(3), alice, bob).matrix();
  double previous = 1e9;
  for (std::uint64_t n : {1000ull, 10000ull, 100000ull, 1000000ull}) {
    src.pairs_per_setting = n;
    int within = 0;
    double mean_err = 0.0;
    // stat_jk = sqrt((1 - M^2)/N) never exceeds 1/sqrt(N).
    const double stat_bound = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto est = estimate_correlation(simulate_counts(src, alice, bob, derive_seed(n, seed)), 0.0,
                                            -0.9 * Matrix::identity(3));
      const double err = est.m_hat.matrix().max_abs_diff(truth);
      mean_err += err / 100.0;
      within += err <= 3.0 * stat_bound;
    }
    CHECK(within >= 99);
    CHECK(mean_err < previous);
    previous = mean_err;
  }
}

TEST_CASE("propagate_uncertainty") {
  const auto exact = expected_counts(werner_state(0.9), standard_triad(), standard_triad(), 100000);
  EstimatedCorrelation est = estimate_correlation(exact, 0.0, -0.9 * Matrix::identity(3));
  est.delta = Matrix(3, 3);
  const auto zero = propagate_uncertainty(est, Inequality::kRis, 100, 1);
  CHECK(zero.uncertainty == 0.0);
  CHECK(zero.mean == doctest::Approx(zero.value));

  const auto real = estimate_correlation(exact, 0.0, -0.9 * Matrix::identity(3));
  const auto a = propagate_uncertainty(real, Inequality::kRis, 200, 9);
  const auto b = propagate_uncertainty(real, Inequality::kRis, 200, 9);
  CHECK(a.uncertainty == b.uncertainty);
  CHECK(a.mean == b.mean);
  CHECK(a.uncertainty > 0.0);
  CHECK_THROWS_AS(propagate_uncertainty(real, Inequality::kNss, 10, 1), InvalidArgument);

  // Results do not depend on the thread count.
  const int threads = omp_get_max_threads();
  omp_set_num_threads(3);
  const auto c = propagate_uncertainty(real, Inequality::kRis, 200, 9);
  omp_set_num_threads(threads);
  CHECK(c.uncertainty == a.uncertainty);
}

TEST_CASE("stat-only uncertainty shrinks by about sqrt(2) when pairs double") {
  const auto t = -0.984 * Matrix::identity(3);
  auto mean_unc = [&](std::uint64_t n) {
    SourceModel src;
    src.state = WernerSpec{0.984};
    src.pairs_per_setting = n;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto est = estimate_correlation(simulate_counts(src, standard_triad(), standard_triad(), seed), 0.0, t);
      sum += propagate_uncertainty(est, Inequality::kRis, 200, derive_seed(seed, 99)).uncertainty;
    }
    return sum / 50.0;
  };
  const double ratio = mean_unc(50000) / mean_unc(100000);
  CHECK(std::abs(ratio / kSqrt2 - 1.0) <= 0.2);
}

TEST_CASE("scenario Case 1: flat at 2W") {
  const auto rows = run_scenario(case_sweep(0.985, 0.0));
  REQUIRE(rows.size() == 11);
  for (const auto& r : rows) {
    CHECK(r.ris_pred == doctest::Approx(1.97).epsilon(1e-12));
    CHECK(r.nss_pred == doctest::Approx(1.97).epsilon(1e-12));
    CHECK(std::abs(r.ris_sim - 1.97) < 0.01);
    CHECK(r.ris_violated);
    CHECK(r.nss_violated);
    CHECK(r.ris_bound == doctest::Approx(kSqrt2));
  }
}

TEST_CASE("scenario Case 2: RIS flat at 1.40, NSS crosses the bound") {
  auto s = case_sweep(0.973, 64.0);
  const auto rows = run_scenario(s);
  for (const auto& r : rows) {
    CHECK(std::abs(r.ris_pred - 1.40) <= 0.005);
    CHECK(r.nss_pred >= r.ris_pred - 1e-10);
    const double a = *r.alpha_deg;
    if (a <= 10.0 || a >= 80.0) CHECK(r.nss_pred > kSqrt2);
    if (a >= 40.0 && a <= 50.0) CHECK(r.nss_pred < kSqrt2);
  }
  // Oscillation: the minimum sits at 45 degrees.
  CHECK(rows[5].nss_pred == doctest::Approx(rows[5].ris_pred).epsilon(1e-12));
}

TEST_CASE("scenario at 90 degrees: nothing violated") {
  const auto rows = run_scenario(case_sweep(0.98, 90.0));
  for (const auto& r : rows) {
    CHECK_FALSE(r.ris_violated);
    CHECK_FALSE(r.nss_violated);
  }
}

TEST_CASE("scenario Case 4: tetrahedron against a triad") {
  Scenario s;
  s.source.state = WernerSpec{0.97};
  s.alice = NamedFrameSpec{"tetrahedron"};
  s.bob = NamedFrameSpec{"standard_triad"};
  const auto rows = run_scenario(s);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ris_pred == doctest::Approx(2.0 * kSqrt2 * 0.97).epsilon(1e-12));
  CHECK(std::abs(rows[0].ris_pred - 2.744) <= 0.005);
  CHECK(std::isnan(rows[0].nss_pred));  // NSS needs two settings
  CHECK_FALSE(rows[0].alpha_deg.has_value());
}

TEST_CASE("scenario determinism and CSV round trip") {
  auto s = case_sweep(0.973, 64.0);
  s.source.pairs_per_setting = 2000;  // noisy enough for flags near the bound to matter
  const std::string first = to_csv(run_scenario(s));
  const int threads = omp_get_max_threads();
  omp_set_num_threads(4);
  const std::string second = to_csv(run_scenario(s));
  omp_set_num_threads(threads);
  CHECK(first == second);

  s.seed = 2;
  CHECK(to_csv(run_scenario(s)) != first);

  std::istringstream in(first);
  const auto parsed = read_scenario_csv(in);
  REQUIRE(parsed.size() == 11);
  for (const auto& r : parsed) {
    CHECK(r.ris_violated == make_assessment(Inequality::kRis, r.ris_sim, r.ris_bound, r.ris_err).violated);
    CHECK(r.nss_violated == make_assessment(Inequality::kNss, r.nss_sim, r.nss_bound, r.nss_err).violated);
  }
  CHECK(to_csv(parsed) == first);

  std::istringstream bad("alpha,ris\n1,2\n");
  CHECK_THROWS_AS(read_scenario_csv(bad), ConfigError);
}

TEST_CASE("drift adds alpha-dependent scatter") {
  auto s = case_sweep(0.985, 0.0);
  auto spread = [](const std::vector<ScenarioRow>& rows) {
    double lo = 1e9, hi = -1e9;
    for (const auto& r : rows) {
      lo = std::min(lo, r.ris_sim);
      hi = std::max(hi, r.ris_sim);
    }
    return hi - lo;
  };
  const double quiet = spread(run_scenario(s));
  s.source.drift_sigma = 0.02;
  const double drifting = spread(run_scenario(s));
  CHECK(drifting > 3.0 * quiet);
  for (const auto& r : run_scenario(s)) CHECK(r.ris_pred == doctest::Approx(1.97));  // predictions stay ideal

  // Non-Werner states drift by depolarization.
  Scenario m;
  m.source.state = MatrixSpec{singlet_state().entries()};
  m.source.drift_sigma = 0.05;
  m.alice = s.alice;
  m.bob = s.bob;
  m.alpha_deg = s.alpha_deg;
  const auto rows = run_scenario(m);
  for (const auto& r : rows) CHECK(r.ris_sim <= 2.0 + 1e-9);
  CHECK(spread(rows) > 0.0);
}

TEST_CASE("scenario errors") {
  Scenario s;
  s.alpha_deg = {0.0};  // sweep with a named (non-pair) alice frame
  CHECK_THROWS_AS(run_scenario(s), ConfigError);
}
