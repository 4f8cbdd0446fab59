#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mmc/channel.hpp"
#include "mmc/farkas.hpp"
#include "mmc/gamma.hpp"
#include "mmc/problem.hpp"

namespace mmc {

// Iterative computation of the saddle point of gamma: local LP over Q_X for a
// fixed z, then a search over perturbations mu of Q_X with z re-optimized,
// until a Farkas certificate shows no perturbation improves the score.

enum class StepKind { Start, LocalLP, Improvement, ZeroFix };
const char* to_string(StepKind k);

struct TraceStep {
  StepKind kind = StepKind::Start;
  double score_before = 0.0;  // max_z gamma(Q_X, .) before the step
  double score_after = 0.0;
  double min_score = 0.0;     // min_x score(z) after the step; a lower bound on the saddle value
  std::vector<double> mu;
  double delta = 0.0;
  double eta = 0.0;
};

struct IterationTrace {
  std::vector<TraceStep> steps;
};

enum class SolveStatus { Converged, IterationLimit, Stalled };
const char* to_string(SolveStatus s);

/// Phase I/II output: z_tight has mass(> z) < e^{-R} strictly, z_lower has
/// mass(>= z) > e^{-R} strictly, both restricted to the support of Q_X.
struct TightZ {
  std::vector<double> z_tight;
  std::vector<double> z_lower;
};

struct LocalStep {
  std::vector<double> q;
  bool improved = false;
};

struct DirectionStep {
  std::vector<double> q;
  std::vector<double> z;
  double delta = 0.0;
};

/// The Farkas system on the support of Q_X together with the support and
/// output indices it was built from.
struct SupportSystem {
  FarkasSystem system;
  std::vector<std::size_t> support;  // row i of the system is input support[i]
  std::vector<std::size_t> outputs;  // a_k belongs to output outputs[k]
};

using DirectionOutcome = std::variant<std::vector<double>, FarkasCertificate>;

/// Inputs with q > tol.
std::vector<std::size_t> support_of(std::span<const double> q, double tol);

/// Clamps tiny and negative entries to zero and renormalizes.
std::vector<double> clean_distribution(std::vector<double> q, double tol);

LocalStep local_qx_step(const SaddleProblem& prob, std::span<const double> q,
                        std::span<const double> z, double theta, double tol);

TightZ tighten_z(const SaddleProblem& prob, std::span<const double> q, std::span<const double> z,
                 double theta, double tol);

std::vector<double> z_mu(const SaddleProblem& prob, std::span<const double> mu, const TightZ& tz);

/// Directional derivative of max_z gamma along mu with z re-optimized.
double eta_direction(const SaddleProblem& prob, std::span<const double> mu, const TightZ& tz);

SupportSystem build_support_system(const SaddleProblem& prob, std::span<const double> q,
                                   const TightZ& tz, double tol);

/// A full-length improving direction, or the certificate that Q_X is optimal
/// against perturbations of its support.
DirectionOutcome find_improving_direction(const SaddleProblem& prob, std::span<const double> q,
                                          const TightZ& tz, double tol);

/// Steps along mu to the first breakpoint. Throws ZeroStep when delta < tol.
DirectionStep apply_direction(const SaddleProblem& prob, std::span<const double> q,
                              std::span<const double> mu, const TightZ& tz, double theta,
                              double tol);

/// z_tight - lambda on the system outputs: every support score equals tau - e^{-R} sum z.
std::vector<double> recover_optimal_z(const SaddleProblem& prob, const SupportSystem& ss,
                                      const FarkasCertificate& cert, const TightZ& tz);

/// One pass raising the lowest off-support score toward the support level by
/// moving z inside its optimal set. Throws NoDecomposition when mass can
/// instead be moved onto that input.
std::vector<double> zero_support_fix(const SaddleProblem& prob, std::span<const double> q,
                                     std::span<const double> z, double theta, double tol);

struct SaddleSolution {
  std::vector<double> qx;
  std::vector<double> z;
  double epsilon = 0.0;  // min_x score(z): a valid lower bound in every case
  double upper = 0.0;    // max_z gamma(qx, .)
  double gap = 0.0;
  std::optional<FarkasCertificate> farkas;
  std::optional<FarkasSystem> farkas_system;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  SaddleReport report;
};

struct SolveResult {
  SaddleSolution solution;
  IterationTrace trace;
};

SolveResult solve_saddle(const SaddleProblem& prob, double theta, const TolerancePolicy& tol,
                         std::optional<std::vector<double>> q0 = std::nullopt);

/// Saddle point for a channel with typed outputs.
struct SaddleCertificate {
  ProbVector qx_star;
  ZVector z_star;
  double epsilon = 0.0;
  double gap = 0.0;
  std::optional<FarkasCertificate> farkas;
  std::optional<FarkasSystem> farkas_system;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  double tol = kDefaultTolGap;
};

struct ChannelSolveResult {
  SaddleCertificate certificate;
  IterationTrace trace;
};

ChannelSolveResult solve_saddle(const Channel& w, const RatePoint& r, const TolerancePolicy& tol,
                                std::optional<ProbVector> qx0 = std::nullopt);

}  // namespace mmc
