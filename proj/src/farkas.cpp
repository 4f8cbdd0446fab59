#include "mmc/farkas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mmc {

void FarkasSystem::validate() const {
  if (alpha.size() != a.size()) {
    throw Error(ErrorKind::DimensionMismatch, "alpha must have one entry per a_y");
  }
  for (std::size_t y = 0; y < a.size(); ++y) {
    if (a[y].size() != b.size()) {
      throw Error(ErrorKind::DimensionMismatch, "a_" + std::to_string(y) + " has wrong length");
    }
    if (!(alpha[y] >= 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha_y must be >= 0");
  }
}

double FarkasSystem::eta(const std::vector<double>& mu) const {
  double v = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) v += mu[i] * b[i];
  for (std::size_t y = 0; y < a.size(); ++y) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) s += mu[i] * a[y][i];
    if (s < 0.0) v -= alpha[y] * s;
  }
  return v;
}

double FarkasCertificate::residual(const FarkasSystem& sys) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < sys.dim(); ++i) {
    double r = sys.b[i] - tau;
    for (std::size_t y = 0; y < sys.num_outputs(); ++y) r -= lambda[y] * sys.a[y][i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

bool FarkasCertificate::within_caps(const FarkasSystem& sys, double tol) const {
  if (lambda.size() != sys.num_outputs()) return false;
  for (std::size_t y = 0; y < lambda.size(); ++y) {
    if (lambda[y] < -tol || lambda[y] > sys.alpha[y] + tol) return false;
  }
  return true;
}

lp::Problem build_perturbation_lp(const FarkasSystem& sys) {
  sys.validate();
  const std::size_t n = sys.dim();
  const std::size_t m = sys.num_outputs();
  lp::Problem p(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    p.objective[i] = sys.b[i];
    p.set_free(i);
  }
  for (std::size_t y = 0; y < m; ++y) p.objective[n + y] = sys.alpha[y];
  for (std::size_t y = 0; y < m; ++y) {
    std::vector<double> row(n + m, 0.0);
    std::copy(sys.a[y].begin(), sys.a[y].end(), row.begin());
    row[n + y] = 1.0;
    p.add(std::move(row), lp::Relation::GreaterEq, 0.0);
  }
  std::vector<double> ones(n + m, 0.0);
  std::fill(ones.begin(), ones.begin() + static_cast<long>(n), 1.0);
  p.add(std::move(ones), lp::Relation::Equal, 0.0);
  return p;
}

PerturbationOutcome minimize_eta(const FarkasSystem& sys, double tol) {
  sys.validate();
  // Solve in units where every cap is 1: a'_y = alpha_y a_y. Only the products
  // alpha_y a_y(i) are well scaled for type-reduced problems.
  FarkasSystem unit;
  unit.b = sys.b;
  unit.alpha.assign(sys.num_outputs(), 1.0);
  unit.a.reserve(sys.num_outputs());
  for (std::size_t y = 0; y < sys.num_outputs(); ++y) {
    std::vector<double> row = sys.a[y];
    for (double& v : row) v *= sys.alpha[y];
    unit.a.push_back(std::move(row));
  }
  lp::Problem p = build_perturbation_lp(unit);
  for (std::size_t i = 0; i < sys.dim(); ++i) p.set_bounds(i, -1.0, 1.0);
  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NumericalFailure,
                std::string("bounded perturbation LP returned ") + lp::to_string(sol.status));
  }
  if (sol.objective_value < -tol) {
    std::vector<double> mu(sol.primal.begin(), sol.primal.begin() + static_cast<long>(sys.dim()));
    double mx = 0.0;
    for (double v : mu) mx = std::max(mx, std::abs(v));
    for (double& v : mu) v /= mx;
    if (sys.eta(mu) < -tol) return mu;
  }
  FarkasCertificate cert;
  const std::size_t m = sys.num_outputs();
  cert.lambda.resize(m);
  for (std::size_t y = 0; y < m; ++y) {
    cert.lambda[y] = sys.alpha[y] * std::clamp(sol.dual[y], 0.0, 1.0);
  }
  cert.tau = sol.dual[m];
  return cert;
}

std::optional<FarkasCertificate> farkas_certificate(const FarkasSystem& sys, double tol) {
  const PerturbationOutcome out = minimize_eta(sys, tol);
  if (std::holds_alternative<std::vector<double>>(out)) return std::nullopt;
  return std::get<FarkasCertificate>(out);
}

}  // namespace mmc
