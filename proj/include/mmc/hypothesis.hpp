#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mmc/channel.hpp"

namespace mmc {

/// Randomized Neyman-Pearson test. Points whose likelihood ratio Q/P lies
/// strictly below `lambda` are accepted outright, points in `boundary_set`
/// are accepted with probability `randomization`.
struct NPTest {
  std::vector<std::size_t> strict_set;
  std::vector<std::size_t> boundary_set;
  double randomization = 0.0;
  double lambda = 0.0;

  /// Acceptance probability of sample point w.
  double accept_probability(std::size_t w) const;
};

struct LambdaInterval {
  double lo = 0.0;
  double hi = 0.0;  // may be +inf
  bool contains(double lambda, double tol) const;
};

struct BetaResult {
  double beta = 0.0;
  LambdaInterval lambda_interval;
  NPTest test;
};

struct VariationalBeta {
  double beta = 0.0;
  double lambda_star = 0.0;
};

/// Minimal Q-mass over randomized tests accepting P-mass >= alpha.
BetaResult beta_np(std::span<const double> p, std::span<const double> q, double alpha,
                   double tol = kDefaultTolEq);

/// max over lambda >= 0 of sum_w min(Q(w), lambda P(w)) - lambda (1 - alpha),
/// scanned over the breakpoints {0} and the finite ratios Q/P.
VariationalBeta beta_variational(std::span<const double> p, std::span<const double> q,
                                 double alpha, double tol = kDefaultTolEq);

/// The objective maximized by beta_variational at a given lambda.
double beta_objective(std::span<const double> p, std::span<const double> q, double alpha,
                      double lambda);

/// P{Q/P < lambda} <= alpha <= P{Q/P <= lambda}, comparisons at tol.
bool lambda_condition_holds(std::span<const double> p, std::span<const double> q, double alpha,
                            double lambda, double tol = kDefaultTolEq);

}  // namespace mmc
