#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "mmc/simplex.hpp"

namespace mmc {

/// b, the family a_y and caps alpha_y of the directional-derivative problem
///   eta(mu) = mu . (b - sum_y alpha_y a_y [mu . a_y < 0]),  sum(mu) = 0.
/// Entries of a_y are the weight of {x : W(y|x) >= z_y}, which is a 0/1
/// indicator for plain channels.
struct FarkasSystem {
  std::vector<double> b;
  std::vector<std::vector<double>> a;
  std::vector<double> alpha;

  std::size_t dim() const noexcept { return b.size(); }
  std::size_t num_outputs() const noexcept { return a.size(); }
  void validate() const;

  /// eta(mu) evaluated directly from its definition.
  double eta(const std::vector<double>& mu) const;
};

/// b = sum_y lambda_y a_y + tau * 1 with 0 <= lambda_y <= alpha_y.
struct FarkasCertificate {
  std::vector<double> lambda;
  double tau = 0.0;

  /// Max-norm of b - sum_y lambda_y a_y - tau * 1.
  double residual(const FarkasSystem& sys) const;
  bool within_caps(const FarkasSystem& sys, double tol) const;
};

/// Variables (mu, s) with mu free and s >= 0: minimize mu.b + s.alpha subject
/// to mu.a_y + s_y >= 0 for every y and sum(mu) = 0. Rows are ordered
/// y = 0..m-1, then the sum row.
lp::Problem build_perturbation_lp(const FarkasSystem& sys);

/// Outcome of minimizing eta: either an improving direction (max-norm 1,
/// sum 0, eta < -tol) or a certificate that none exists.
using PerturbationOutcome = std::variant<std::vector<double>, FarkasCertificate>;

/// Solves the perturbation LP with mu boxed to [-1, 1], which keeps the LP
/// bounded without changing the sign of its optimum. Certificates come from
/// the LP duals.
PerturbationOutcome minimize_eta(const FarkasSystem& sys, double tol = 1e-10);

/// The certificate when the perturbation LP optimum is 0, nullopt when the LP
/// is unbounded below.
std::optional<FarkasCertificate> farkas_certificate(const FarkasSystem& sys, double tol = 1e-10);

}  // namespace mmc
