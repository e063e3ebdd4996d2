#pragma once

// Local-hidden-state membership by linear programming over a discretized
// set of extreme points a c^T (a in {-1,+1}^m, c a unit vector in Bob's
// n-dimensional setting space).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "steer/geometry.hpp"
#include "steer/linalg.hpp"
#include "steer/simplex.hpp"
#include "steer/steering.hpp"

namespace steer {

/// Unit vectors in R^n, n in {1, 2, 3}.
class SphereGrid {
 public:
  /// {+1, -1}
  static SphereGrid line();
  /// Circle at `step_deg` spacing starting at angle 0.
  static SphereGrid circle(double step_deg);
  /// Fibonacci sphere with `points` points.
  static SphereGrid fibonacci(std::size_t points);
  /// Default for Bob's setting count: 1 -> line, 2 -> 1 degree circle, 3 -> 10^4 points.
  static SphereGrid default_for(std::size_t n);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }
  const std::string& description() const { return description_; }
  /// Upper bound on the angle (radians) from any unit vector to its nearest grid point.
  double covering_angle() const { return covering_angle_; }

 private:
  SphereGrid(std::size_t dim, std::vector<Vec3> pts, std::string desc, double covering)
      : dim_(dim), points_(std::move(pts)), description_(std::move(desc)), covering_angle_(covering) {}
  std::size_t dim_ = 0;
  std::vector<Vec3> points_;
  std::string description_;
  double covering_angle_ = 0.0;
};

struct LhsAtom {
  double weight = 0.0;
  std::vector<double> alice_response;  // m entries in [-1, 1]
  Vec3 bob_bloch{};                    // |s| <= 1
};

/// Finite mixture reproducing a correlation matrix; Bob measures along `bob_frame`.
struct LhsModel {
  std::vector<LhsAtom> atoms;
  MeasurementFrame bob_frame;
};

/// M_jk = sum_atoms w * A_j * (s . b_k). Throws on invalid weights or responses.
CorrelationMatrix evaluate_lhs_model(const LhsModel& model);

/// All 2^m * |grid| extreme points a c^T, ordered by sign pattern then grid point.
std::vector<Matrix> lhs_extreme_points(std::size_t m, const SphereGrid& grid);

/// Sign vector number `pattern` (bit i set -> a_i = -1).
std::vector<double> sign_vector(std::size_t m, std::size_t pattern);

enum class MembershipStatus { kFeasible, kInfeasible, kIndeterminate };
std::string to_string(MembershipStatus s);

struct MembershipOptions {
  double tol = 1e-7;                 // LP residual tolerance
  int column_generation_rounds = 32;  // extra rounds adding the exact best-response columns
  bool parallel = true;
  std::optional<MeasurementFrame> bob_frame;  // default: first n coordinate axes
};

struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::kIndeterminate;
  std::optional<LhsModel> model;  // feasible
  std::optional<Matrix> separator;  // infeasible / indeterminate: max score over the used extreme points is 1
  double gap = 0.0;          // feasible: LP residual; otherwise <G, M> - 1
  double exact_support = 0.0;  // max over the continuous extreme-point set of <G, X> (normalized G)
  std::size_t columns = 0;   // extreme points in the final LP
  int rounds = 0;            // column-generation rounds used
  int iterations = 0;        // simplex iterations in the final solve
  std::string message;
};

MembershipVerdict lhs_membership(const CorrelationMatrix& m, const SphereGrid& grid,
                                 const MembershipOptions& options = {});

/// max over a, c of <G, a c^T> = max_a |G^T a|, i.e. the support function of
/// the continuous LHS set.
double lhs_support(const Matrix& g);

/// Maximum trace norm over the discretized extreme points.
double max_lhs_trace_norm(std::size_t m, std::size_t n, const SphereGrid& grid);

}  // namespace steer
