#include "mmc/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmc/kernels.hpp"

namespace mmc {

namespace {

void check_q(const SaddleProblem& prob, std::span<const double> q) {
  if (q.size() != prob.num_inputs()) {
    throw Error(ErrorKind::DimensionMismatch, "input distribution has wrong size");
  }
}

void check_z(const SaddleProblem& prob, std::span<const double> z) {
  if (z.size() != prob.num_outputs()) {
    throw Error(ErrorKind::DimensionMismatch, "z has wrong size");
  }
}

}  // namespace

std::vector<double> ScoreVector::scores() const {
  std::vector<double> s(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) s[x] = b[x] - rate_term;
  return s;
}

double ScoreVector::min_score() const {
  return *std::min_element(b.begin(), b.end()) - rate_term;
}

ScoreVector score_vector(const SaddleProblem& prob, std::span<const double> z, double theta) {
  check_z(prob, z);
  ScoreVector sv;
  sv.b.resize(prob.num_inputs());
  kernels::input_sums(prob, z, sv.b);
  sv.rate_term = theta * std::accumulate(z.begin(), z.end(), 0.0);
  return sv;
}

double gamma_eval(const SaddleProblem& prob, std::span<const double> q, std::span<const double> z,
                  double theta) {
  check_q(prob, q);
  const ScoreVector sv = score_vector(prob, z, theta);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != 0.0) s += q[i] * sv.b[i];
  }
  return s - sv.rate_term;
}

std::vector<double> optimal_z(const SaddleProblem& prob, std::span<const double> q, double theta,
                              double tol) {
  check_q(prob, q);
  std::vector<double> z(prob.num_outputs());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = optimal_z_interval(prob, q, j, theta, tol).hi;
  return z;
}

MaxOverZ max_over_z(const SaddleProblem& prob, std::span<const double> q, double theta,
                    double tol) {
  MaxOverZ out;
  out.z = optimal_z(prob, q, theta, tol);
  out.value = gamma_eval(prob, q, out.z, theta);
  return out;
}

bool z_condition_holds(const SaddleProblem& prob, std::span<const double> q,
                       std::span<const double> z, double theta, double tol) {
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    const double t = snap_to_value(prob, j, z[j]);
    if (output_mass(prob, q, j, t, true) > theta + tol) return false;
    if (output_mass(prob, q, j, t, false) < theta - tol) return false;
  }
  return true;
}

SaddleReport check_saddle(const SaddleProblem& prob, std::span<const double> q,
                          std::span<const double> z, double theta, double tol) {
  check_q(prob, q);
  check_z(prob, z);
  SaddleReport rep;
  const ScoreVector sv = score_vector(prob, z, theta);
  rep.value = gamma_eval(prob, q, z, theta);
  rep.z_condition_ok = z_condition_holds(prob, q, z, theta, tol);
  rep.support_scores_ok = true;
  rep.offsupport_scores_ok = true;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double s = sv.score(i);
    if (q[i] > tol) {
      if (std::abs(s - rep.value) > tol) rep.support_scores_ok = false;
    } else if (s < rep.value - tol) {
      rep.offsupport_scores_ok = false;
    }
  }
  rep.duality_gap = max_over_z(prob, q, theta, tol).value - sv.min_score();
  return rep;
}

double gamma_eval(const ProbVector& qx, const ZVector& z, const Channel& w, const RatePoint& r) {
  return gamma_eval(SaddleProblem::from_channel(w), qx.values(), z.values(), r.threshold());
}

ZVector optimal_z(const ProbVector& qx, const Channel& w, const RatePoint& r, double tol) {
  return ZVector(optimal_z(SaddleProblem::from_channel(w), qx.values(), r.threshold(), tol));
}

ZInterval optimal_z_interval(const ProbVector& qx, const Channel& w, const RatePoint& r,
                             std::size_t y, double tol) {
  if (y >= w.ny()) throw Error(ErrorKind::DimensionMismatch, "output index out of range");
  const SaddleProblem prob = SaddleProblem::from_channel(w);
  check_q(prob, qx.values());
  return optimal_z_interval(prob, qx.values(), y, r.threshold(), tol);
}

MaxOverZ max_over_z(const ProbVector& qx, const Channel& w, const RatePoint& r, double tol) {
  return max_over_z(SaddleProblem::from_channel(w), qx.values(), r.threshold(), tol);
}

ScoreVector score_vector(const ZVector& z, const Channel& w, const RatePoint& r) {
  return score_vector(SaddleProblem::from_channel(w), z.values(), r.threshold());
}

RecoveredQy recover_qy(const ZVector& z) {
  const double lambda = z.sum();
  if (!(lambda > 0.0)) throw Error(ErrorKind::ZeroZ, "all-zero z has no output distribution");
  std::vector<double> qy(z.vec());
  for (double& v : qy) v /= lambda;
  return {lambda, ProbVector::from(std::move(qy))};
}

SaddleReport check_saddle(const ProbVector& qx, const ZVector& z, const Channel& w,
                          const RatePoint& r, double tol) {
  return check_saddle(SaddleProblem::from_channel(w), qx.values(), z.values(), r.threshold(), tol);
}

}  // namespace mmc
