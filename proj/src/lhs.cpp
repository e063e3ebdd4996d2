#include "steer/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "steer/errors.hpp"
#include "steer/kernels.hpp"

namespace steer {

SphereGrid SphereGrid::line() { return SphereGrid(1, {Vec3{1, 0, 0}, Vec3{-1, 0, 0}}, "line", 0.0); }

SphereGrid SphereGrid::circle(double step_deg) {
  if (!(step_deg > 0.0 && step_deg <= 180.0)) throw InvalidArgument("SphereGrid::circle: step must lie in (0, 180]");
  const auto count = static_cast<std::size_t>(std::ceil(360.0 / step_deg - 1e-9));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  std::vector<Vec3> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back({std::cos(i * step), std::sin(i * step), 0.0});
  std::ostringstream os;
  os << "circle:" << count;
  return SphereGrid(2, std::move(pts), os.str(), 0.5 * step);
}

SphereGrid SphereGrid::fibonacci(std::size_t points) {
  if (points < 2) throw InvalidArgument("SphereGrid::fibonacci: need at least 2 points");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(points);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    pts.push_back(normalized(Vec3{r * std::cos(phi), r * std::sin(phi), z}));
  }
  std::ostringstream os;
  os << "fibonacci:" << points;
  // Empirical bound: the worst gap (near the poles) is about 2.73/sqrt(N).
  return SphereGrid(3, std::move(pts), os.str(), 3.0 / std::sqrt(static_cast<double>(points)));
}

SphereGrid SphereGrid::default_for(std::size_t n) {
  switch (n) {
    case 1: return line();
    case 2: return circle(1.0);
    case 3: return fibonacci(10000);
    default: throw InvalidArgument("SphereGrid::default_for: n must be 1, 2 or 3");
  }
}

std::vector<double> sign_vector(std::size_t m, std::size_t pattern) {
  std::vector<double> a(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = (pattern >> i) & 1U ? -1.0 : 1.0;
  return a;
}

std::vector<Matrix> lhs_extreme_points(std::size_t m, const SphereGrid& grid) {
  if (m < 1 || m > 3) throw InvalidArgument("lhs_extreme_points: m must be 1, 2 or 3");
  if (grid.size() == 0) throw InvalidArgument("lhs_extreme_points: empty grid");
  const std::size_t n = grid.dimension();
  std::vector<Matrix> out;
  out.reserve((std::size_t{1} << m) * grid.size());
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern) {
    const auto a = sign_vector(m, pattern);
    for (const auto& c : grid.points()) out.push_back(outer(a, std::span<const double>(c.data(), n)));
  }
  return out;
}

CorrelationMatrix evaluate_lhs_model(const LhsModel& model) {
  if (model.atoms.empty()) throw InvalidArgument("evaluate_lhs_model: empty model");
  const std::size_t m = model.atoms.front().alice_response.size();
  const std::size_t n = model.bob_frame.size();
  double total = 0.0;
  Matrix out(m, n);
  for (const auto& atom : model.atoms) {
    if (!(atom.weight >= 0.0)) throw InvalidArgument("evaluate_lhs_model: negative weight");
    if (atom.alice_response.size() != m) throw InvalidArgument("evaluate_lhs_model: inconsistent response length");
    if (norm(atom.bob_bloch) > 1.0 + 1e-12) throw InvalidArgument("evaluate_lhs_model: Bloch vector outside the ball");
    total += atom.weight;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(atom.alice_response[j]) > 1.0 + 1e-12)
        throw InvalidArgument("evaluate_lhs_model: response outside [-1, 1]");
      for (std::size_t k = 0; k < n; ++k)
        out(j, k) += atom.weight * atom.alice_response[j] * dot(atom.bob_bloch, model.bob_frame[k].vec());
    }
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("evaluate_lhs_model: weights do not sum to 1");
  return CorrelationMatrix(out);
}

std::string to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::kFeasible: return "feasible";
    case MembershipStatus::kInfeasible: return "infeasible";
    case MembershipStatus::kIndeterminate: return "indeterminate";
  }
  return "?";
}

double lhs_support(const Matrix& g) {
  const std::size_t m = g.rows();
  double best = 0.0;
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern) {
    const auto a = sign_vector(m, pattern);
    double s2 = 0.0;
    for (std::size_t k = 0; k < g.cols(); ++k) {
      double v = 0.0;
      for (std::size_t j = 0; j < m; ++j) v += g(j, k) * a[j];
      s2 += v * v;
    }
    best = std::max(best, std::sqrt(s2));
  }
  return best;
}

double max_lhs_trace_norm(std::size_t m, std::size_t n, const SphereGrid& grid) {
  if (grid.dimension() != n) throw InvalidArgument("max_lhs_trace_norm: grid dimension differs from n");
  const auto points = lhs_extreme_points(m, grid);
  return kernels::max_trace_norm(points).value;
}

namespace {

MeasurementFrame default_bob_frame(std::size_t n) {
  std::vector<Direction> dirs;
  for (std::size_t k = 0; k < n; ++k) {
    Vec3 e{};
    e[k] = 1.0;
    dirs.emplace_back(e);
  }
  return MeasurementFrame(std::move(dirs));
}

// LP columns (vec(a c^T), 1) stored column-major, plus the (a, c) behind each.
struct ColumnSet {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> data;
  std::vector<std::pair<std::size_t, Vec3>> atoms;  // (sign pattern, c)

  std::size_t rows() const { return m * n + 1; }
  std::size_t size() const { return atoms.size(); }

  void add(std::size_t pattern, const Vec3& c) {
    const auto a = sign_vector(m, pattern);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k) data.push_back(a[j] * c[k]);
    data.push_back(1.0);
    atoms.emplace_back(pattern, c);
  }
};

}  // namespace

MembershipVerdict lhs_membership(const CorrelationMatrix& target, const SphereGrid& grid,
                                 const MembershipOptions& options) {
  const std::size_t m = target.alice_settings();
  const std::size_t n = target.bob_settings();
  if (grid.dimension() != n) throw InvalidArgument("lhs_membership: grid dimension differs from Bob's settings");
  const MeasurementFrame bob = options.bob_frame.value_or(default_bob_frame(n));
  if (bob.size() != n || !bob.orthonormal())
    throw InvalidArgument("lhs_membership: Bob's frame must be orthonormal with n directions");

  ColumnSet cols{m, n, {}, {}};
  cols.data.reserve((std::size_t{1} << m) * grid.size() * cols.rows());
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern)
    for (const auto& c : grid.points()) cols.add(pattern, c);

  std::vector<double> rhs;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < n; ++k) rhs.push_back(target(j, k));
  rhs.push_back(1.0);

  SimplexOptions lp;
  lp.feasibility_tol = options.tol;
  lp.parallel_pricing = options.parallel;

  MembershipVerdict verdict;
  for (int round = 0;; ++round) {
    const SimplexResult res = solve_phase_one(cols.data, rhs, lp);
    verdict.columns = cols.size();
    verdict.rounds = round;
    verdict.iterations = res.iterations;

    if (res.feasible) {
      LhsModel model{{}, bob};
      double total = 0.0;
      for (double w : res.weights) total += w;
      for (std::size_t i = 0; i < res.basis.size(); ++i) {
        const auto& [pattern, c] = cols.atoms[res.basis[i]];
        Vec3 s{};
        for (std::size_t k = 0; k < n; ++k) s = s + c[k] * bob[k].vec();
        model.atoms.push_back({res.weights[i] / total, sign_vector(m, pattern), s});
      }
      verdict.status = MembershipStatus::kFeasible;
      verdict.gap = evaluate_lhs_model(model).matrix().max_abs_diff(target.matrix());
      verdict.model = std::move(model);
      verdict.message = "mixture of " + std::to_string(verdict.model->atoms.size()) + " extreme points";
      return verdict;
    }

    Matrix g(m, n);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k) g(j, k) = res.dual[j * n + k];
    // Max score of G over the columns actually in the LP.
    std::vector<double> y(res.dual.begin(), res.dual.end());
    y.back() = 0.0;
    const double grid_max = kernels::price_columns(cols.data, cols.rows(), y).score;
    const double support = lhs_support(g);
    const double scale = grid_max > 1e-12 ? grid_max : support;
    if (!(scale > 0.0)) throw NumericError("lhs_membership: degenerate separating direction");
    g = (1.0 / scale) * g;
    const double score = frobenius_dot(g, target.matrix());
    verdict.separator = g;
    verdict.gap = score - 1.0;
    verdict.exact_support = support / scale;

    if (score > verdict.exact_support * (1.0 + 1e-9) + 1e-12) {
      verdict.status = MembershipStatus::kInfeasible;
      verdict.message = "separated from every local-hidden-state extreme point";
      return verdict;
    }
    if (round >= options.column_generation_rounds) {
      verdict.status = MembershipStatus::kIndeterminate;
      verdict.message = "indeterminate at this resolution: outside the discretized polytope (" + grid.description() +
                        ") but not separated from the continuous one; refine the grid";
      return verdict;
    }
    // Add the exact best responses c = G^T a / |G^T a| for every sign pattern.
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern) {
      const auto a = sign_vector(m, pattern);
      Vec3 v{};
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < m; ++j) v[k] += g(j, k) * a[j];
      if (norm(v) > 1e-15) cols.add(pattern, normalized(v));
    }
  }
}

}  // namespace steer
