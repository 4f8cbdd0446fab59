#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "mmc/error.hpp"

namespace mmc::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, GreaterEq, Equal };
enum class Status { Optimal, Unbounded, Infeasible };

const char* to_string(Status s);

struct Constraint {
  std::vector<double> coeffs;
  Relation rel = Relation::GreaterEq;
  double rhs = 0.0;
};

/// minimize objective . x  subject to constraints and lower <= x <= upper.
/// Variables default to [0, +inf).
struct Problem {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit Problem(std::size_t num_vars)
      : objective(num_vars, 0.0), lower(num_vars, 0.0), upper(num_vars, kInf) {}

  std::size_t num_vars() const noexcept { return objective.size(); }
  void add(std::vector<double> coeffs, Relation rel, double rhs);
  void set_free(std::size_t j) { lower[j] = -kInf; upper[j] = kInf; }
  void set_bounds(std::size_t j, double lo, double hi) { lower[j] = lo; upper[j] = hi; }
  void validate() const;
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> primal;
  double objective_value = 0.0;
  /// One multiplier per constraint with objective = A^T dual + reduced_costs;
  /// >= 0 for GreaterEq rows, <= 0 for LessEq rows.
  std::vector<double> dual;
  /// objective - A^T dual; >= 0 at a lower bound, <= 0 at an upper bound.
  std::vector<double> reduced_costs;
  /// For Unbounded: a recession direction with negative cost, max-norm 1.
  std::vector<double> ray;
  std::size_t pivots = 0;
};

struct Options {
  double cost_tol = 1e-11;
  double pivot_tol = 1e-11;
  double harris_tol = 1e-11;
  double feas_tol = 1e-9;
  std::size_t max_pivots = 2'000'000;
};

/// Dense two-phase tableau simplex with Bland's entering rule. Deterministic.
Solution solve(const Problem& problem, const Options& opts = {});

}  // namespace mmc::lp
