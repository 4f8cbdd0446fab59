#include "mmc/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool ratio_equal(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_dims(std::span<const double> p, std::span<const double> q, double alpha) {
  if (p.size() != q.size() || p.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "P and Q must share a nonempty alphabet");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha outside [0,1]");
}

// Sample points with equal likelihood ratio, in increasing ratio order.
struct RatioGroup {
  double ratio;
  double p_mass;
  double q_mass;
  std::vector<std::size_t> members;
};

std::vector<RatioGroup> group_by_ratio(std::span<const double> p, std::span<const double> q,
                                       double tol) {
  std::vector<std::pair<double, std::size_t>> ratios;
  ratios.reserve(p.size());
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (p[w] > 0.0) {
      ratios.emplace_back(q[w] / p[w], w);
    } else if (q[w] > 0.0) {
      ratios.emplace_back(kInf, w);
    }
  }
  std::stable_sort(ratios.begin(), ratios.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<RatioGroup> groups;
  for (const auto& [r, w] : ratios) {
    if (groups.empty() || !ratio_equal(groups.back().ratio, r, tol)) {
      groups.push_back({r, 0.0, 0.0, {}});
    }
    groups.back().p_mass += p[w];
    groups.back().q_mass += q[w];
    groups.back().members.push_back(w);
  }
  return groups;
}

}  // namespace

double NPTest::accept_probability(std::size_t w) const {
  if (std::find(strict_set.begin(), strict_set.end(), w) != strict_set.end()) return 1.0;
  if (std::find(boundary_set.begin(), boundary_set.end(), w) != boundary_set.end()) {
    return randomization;
  }
  return 0.0;
}

bool LambdaInterval::contains(double lambda, double tol) const {
  const double slack_lo = tol * std::max(1.0, std::abs(lo));
  if (lambda < lo - slack_lo) return false;
  if (std::isinf(hi)) return true;
  return lambda <= hi + tol * std::max(1.0, std::abs(hi));
}

BetaResult beta_np(std::span<const double> p, std::span<const double> q, double alpha, double tol) {
  check_dims(p, q, alpha);
  const auto groups = group_by_ratio(p, q, tol);

  BetaResult out;
  double p_cum = 0.0;
  double q_cum = 0.0;
  std::size_t k = 0;
  for (; k < groups.size(); ++k) {
    if (groups[k].p_mass > 0.0 && p_cum + groups[k].p_mass >= alpha - tol) break;
    for (std::size_t w : groups[k].members) out.test.strict_set.push_back(w);
    p_cum += groups[k].p_mass;
    q_cum += groups[k].q_mass;
  }
  if (k == groups.size()) {
    // Only reachable when alpha is within tol of the full P-mass already taken.
    out.beta = std::clamp(q_cum, 0.0, 1.0);
    out.test.lambda = groups.empty() ? 0.0 : groups.back().ratio;
    out.lambda_interval = {out.test.lambda, kInf};
    return out;
  }

  const RatioGroup& g = groups[k];
  const double delta = std::clamp((alpha - p_cum) / g.p_mass, 0.0, 1.0);
  out.test.boundary_set = g.members;
  out.test.randomization = delta;
  out.test.lambda = g.ratio;
  out.beta = std::clamp(q_cum + delta * g.q_mass, 0.0, 1.0);

  LambdaInterval iv{g.ratio, g.ratio};
  if (std::abs(alpha - p_cum) <= tol) iv.lo = (k == 0) ? 0.0 : groups[k - 1].ratio;
  if (std::abs(alpha - (p_cum + g.p_mass)) <= tol) {
    iv.hi = (k + 1 < groups.size()) ? groups[k + 1].ratio : kInf;
  }
  out.lambda_interval = iv;
  return out;
}

double beta_objective(std::span<const double> p, std::span<const double> q, double alpha,
                      double lambda) {
  double s = 0.0;
  for (std::size_t w = 0; w < p.size(); ++w) s += std::min(q[w], lambda * p[w]);
  return s - lambda * (1.0 - alpha);
}

VariationalBeta beta_variational(std::span<const double> p, std::span<const double> q,
                                 double alpha, double tol) {
  check_dims(p, q, alpha);
  std::vector<double> candidates{0.0};
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (p[w] > 0.0) candidates.push_back(q[w] / p[w]);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<double> values(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    values[i] = beta_objective(p, q, alpha, candidates[i]);
  }
  const double best = *std::max_element(values.begin(), values.end());
  // Smallest maximizing breakpoint, so ties on a flat top resolve to the lower end.
  std::size_t i = 0;
  while (values[i] < best - tol) ++i;
  return {std::clamp(best, 0.0, 1.0), candidates[i]};
}

bool lambda_condition_holds(std::span<const double> p, std::span<const double> q, double alpha,
                            double lambda, double tol) {
  check_dims(p, q, alpha);
  double below = 0.0;
  double at_or_below = 0.0;
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (p[w] <= 0.0) continue;
    const double r = q[w] / p[w];
    if (ratio_equal(r, lambda, tol)) {
      at_or_below += p[w];
    } else if (r < lambda) {
      below += p[w];
      at_or_below += p[w];
    }
  }
  return below <= alpha + tol && alpha <= at_or_below + tol;
}

}  // namespace mmc
