#pragma once

#include <span>
#include <vector>

#include "mmc/channel.hpp"
#include "mmc/problem.hpp"

namespace mmc {

struct ScoreVector {
  std::vector<double> b;  // b(x) = sum_y min(W(y|x), z_y)
  double rate_term = 0.0;  // e^{-R} sum_y z_y

  double score(std::size_t x) const { return b[x] - rate_term; }
  std::vector<double> scores() const;
  double min_score() const;
};

struct SaddleReport {
  double value = 0.0;  // gamma(qx, z)
  bool z_condition_ok = false;
  bool support_scores_ok = false;
  bool offsupport_scores_ok = false;
  double duality_gap = 0.0;  // max_z gamma(qx, .) - min_x score(x)

  bool ok() const { return z_condition_ok && support_scores_ok && offsupport_scores_ok; }
};

struct MaxOverZ {
  double value = 0.0;
  std::vector<double> z;
};

struct RecoveredQy {
  double lambda = 0.0;
  ProbVector qy;
};

// Weighted-problem forms; q and z are raw vectors sized to the problem.

double gamma_eval(const SaddleProblem& prob, std::span<const double> q, std::span<const double> z,
                  double theta);
std::vector<double> optimal_z(const SaddleProblem& prob, std::span<const double> q, double theta,
                              double tol = kDefaultTolEq);
MaxOverZ max_over_z(const SaddleProblem& prob, std::span<const double> q, double theta,
                    double tol = kDefaultTolEq);
ScoreVector score_vector(const SaddleProblem& prob, std::span<const double> z, double theta);
bool z_condition_holds(const SaddleProblem& prob, std::span<const double> q,
                       std::span<const double> z, double theta, double tol);
SaddleReport check_saddle(const SaddleProblem& prob, std::span<const double> q,
                          std::span<const double> z, double theta, double tol);

// Channel forms.

/// sum_{x,y} Q_X(x) min(W(y|x), z_y) - e^{-R} sum_y z_y
double gamma_eval(const ProbVector& qx, const ZVector& z, const Channel& w, const RatePoint& r);

/// Canonical maximizer of gamma(qx, .): per y, the largest channel value at
/// which the Q_X-mass of {x : W(y|x) >= value} first reaches e^{-R}.
ZVector optimal_z(const ProbVector& qx, const Channel& w, const RatePoint& r,
                  double tol = kDefaultTolEq);

/// Every z_y that maximizes gamma(qx, .) in coordinate y.
ZInterval optimal_z_interval(const ProbVector& qx, const Channel& w, const RatePoint& r,
                             std::size_t y, double tol = kDefaultTolEq);

MaxOverZ max_over_z(const ProbVector& qx, const Channel& w, const RatePoint& r,
                    double tol = kDefaultTolEq);

ScoreVector score_vector(const ZVector& z, const Channel& w, const RatePoint& r);

/// z = lambda * Q_Y with lambda = sum_y z_y. Throws ZeroZ for z == 0.
RecoveredQy recover_qy(const ZVector& z);

SaddleReport check_saddle(const ProbVector& qx, const ZVector& z, const Channel& w,
                          const RatePoint& r, double tol);

}  // namespace mmc
