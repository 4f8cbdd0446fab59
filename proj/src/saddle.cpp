#include "mmc/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmc/kernels.hpp"
#include "mmc/simplex.hpp"

namespace mmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Inner products mu . a below this magnitude are treated as zero.
constexpr double kRateTol = 1e-13;
// Stalled outer iterations tolerated before giving up.
constexpr int kMaxStalls = 3;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool descends(double inner) { return inner < -kRateTol; }

// Smallest atom value in output j strictly above t, over inputs accepted by keep.
template <class Keep>
double next_above(const SaddleProblem& prob, std::size_t j, double t, Keep keep) {
  double best = kInf;
  for (const Atom& a : prob.output_atoms(j)) {
    if (a.value <= t) break;
    if (keep(a.input)) best = a.value;
  }
  return best;
}

// Largest atom value in output j strictly below t, or -1 when none.
template <class Keep>
double next_below(const SaddleProblem& prob, std::size_t j, double t, Keep keep) {
  for (const Atom& a : prob.output_atoms(j)) {
    if (a.value < t && keep(a.input)) return a.value;
  }
  return -1.0;
}

double snap_to_atom(const SaddleProblem& prob, std::size_t j, double t) {
  for (const Atom& a : prob.output_atoms(j)) {
    if (std::abs(a.value - t) <= 1e-13 * std::max(1.0, a.value)) return a.value;
  }
  return std::max(t, 0.0);
}

std::vector<double> input_sums(const SaddleProblem& prob, std::span<const double> z) {
  std::vector<double> b(prob.num_inputs());
  kernels::input_sums(prob, z, b);
  return b;
}

}  // namespace

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Start: return "start";
    case StepKind::LocalLP: return "local_lp";
    case StepKind::Improvement: return "improvement";
    case StepKind::ZeroFix: return "zero_fix";
  }
  return "unknown";
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Stalled: return "stalled";
  }
  return "unknown";
}

std::vector<std::size_t> support_of(std::span<const double> q, double tol) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > tol) s.push_back(i);
  }
  return s;
}

std::vector<double> clean_distribution(std::vector<double> q, double tol) {
  for (double& v : q) {
    if (!(v > tol)) v = 0.0;
  }
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::NumericalFailure, "distribution vanished");
  for (double& v : q) v /= total;
  return q;
}

LocalStep local_qx_step(const SaddleProblem& prob, std::span<const double> q,
                        std::span<const double> z, double theta, double tol) {
  const std::size_t n = prob.num_inputs();
  lp::Problem p(n);
  const std::vector<double> b = input_sums(prob, z);
  p.objective = b;
  p.add(std::vector<double>(n, 1.0), lp::Relation::Equal, 1.0);
  // Right-hand sides never tighten past the current point, so q stays feasible
  // when it meets a row only to within tol. Rows are scaled to unit max-norm.
  auto add_scaled = [&p, q](std::vector<double> row, lp::Relation rel, double rhs) {
    const double mx = *std::max_element(row.begin(), row.end());
    if (!(mx > 0.0)) return;
    const double now = dot(row, q);
    rhs = rel == lp::Relation::LessEq ? std::max(rhs, now) : std::min(rhs, now);
    for (double& v : row) v /= mx;
    p.add(std::move(row), rel, rhs / mx);
  };
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    add_scaled(indicator(prob, j, z[j], true), lp::Relation::LessEq, theta);
    if (z[j] > 0.0) add_scaled(indicator(prob, j, z[j], false), lp::Relation::GreaterEq, theta);
  }
  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) {
    throw Error(ErrorKind::InfeasibleLocalLP,
                std::string("local LP returned ") + lp::to_string(sol.status));
  }
  LocalStep out;
  std::vector<double> cand = clean_distribution(sol.primal, tol);
  const double before = dot(q, b);
  const double after = dot(cand, b);
  if (after < before - tol) {
    out.q = std::move(cand);
    out.improved = true;
  } else {
    out.q.assign(q.begin(), q.end());
  }
  return out;
}

TightZ tighten_z(const SaddleProblem& prob, std::span<const double> q, std::span<const double> z,
                 double theta, double tol) {
  auto on_support = [&](std::uint32_t i) { return q[i] > 0.0; };
  TightZ tz;
  tz.z_tight.resize(prob.num_outputs());
  tz.z_lower.resize(prob.num_outputs());
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    double zt = z[j];
    // Phase I: move up while the strict-side mass binds.
    while (output_mass(prob, q, j, zt, true) >= theta - tol) {
      const double up = next_above(prob, j, zt, on_support);
      if (!std::isfinite(up)) break;
      zt = up;
    }
    // Phase II: move down while the non-strict-side mass binds.
    double zl = zt;
    while (output_mass(prob, q, j, zl, false) <= theta + tol) {
      const double down = next_below(prob, j, zl, on_support);
      if (down < 0.0) {
        zl = 0.0;
        break;
      }
      zl = down;
    }
    tz.z_tight[j] = zt;
    tz.z_lower[j] = zl;
  }
  return tz;
}

std::vector<double> z_mu(const SaddleProblem& prob, std::span<const double> mu, const TightZ& tz) {
  std::vector<double> out(prob.num_outputs());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double inner = output_mass(prob, mu, j, tz.z_tight[j], false);
    out[j] = descends(inner) ? tz.z_lower[j] : tz.z_tight[j];
  }
  return out;
}

double eta_direction(const SaddleProblem& prob, std::span<const double> mu, const TightZ& tz) {
  const std::vector<double> b = input_sums(prob, tz.z_tight);
  double eta = dot(mu, b);
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    const double inner = output_mass(prob, mu, j, tz.z_tight[j], false);
    if (descends(inner)) eta -= (tz.z_tight[j] - tz.z_lower[j]) * inner;
  }
  return eta;
}

SupportSystem build_support_system(const SaddleProblem& prob, std::span<const double> q,
                                   const TightZ& tz, double tol) {
  SupportSystem ss;
  ss.support = support_of(q, 0.0);
  const std::vector<double> b = input_sums(prob, tz.z_tight);
  for (std::size_t i : ss.support) ss.system.b.push_back(b[i]);
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    const double alpha = tz.z_tight[j] - tz.z_lower[j];
    if (!(alpha > 0.0)) continue;
    const std::vector<double> a = indicator(prob, j, tz.z_tight[j], false);
    std::vector<double> row;
    row.reserve(ss.support.size());
    for (std::size_t i : ss.support) row.push_back(a[i]);
    ss.system.a.push_back(std::move(row));
    ss.system.alpha.push_back(alpha);
    ss.outputs.push_back(j);
  }
  (void)tol;
  return ss;
}

DirectionOutcome find_improving_direction(const SaddleProblem& prob, std::span<const double> q,
                                          const TightZ& tz, double tol) {
  const SupportSystem ss = build_support_system(prob, q, tz, tol);
  PerturbationOutcome out = minimize_eta(ss.system, tol);
  if (auto* cert = std::get_if<FarkasCertificate>(&out)) return *cert;
  const auto& mu_s = std::get<std::vector<double>>(out);
  std::vector<double> mu(prob.num_inputs(), 0.0);
  for (std::size_t k = 0; k < ss.support.size(); ++k) mu[ss.support[k]] = mu_s[k];
  return mu;
}

DirectionStep apply_direction(const SaddleProblem& prob, std::span<const double> q,
                              std::span<const double> mu, const TightZ& tz, double theta,
                              double tol) {
  const std::vector<double> zm = z_mu(prob, mu, tz);
  double delta = kInf;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (mu[i] < 0.0) delta = std::min(delta, q[i] / -mu[i]);
  }
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    const double gt = output_mass(prob, q, j, zm[j], true);
    const double gt_rate = output_mass(prob, mu, j, zm[j], true);
    if (gt_rate > kRateTol) delta = std::min(delta, std::max(theta - gt, 0.0) / gt_rate);
    const double ge = output_mass(prob, q, j, zm[j], false);
    const double ge_rate = output_mass(prob, mu, j, zm[j], false);
    if (ge_rate < -kRateTol) delta = std::min(delta, std::max(ge - theta, 0.0) / -ge_rate);
  }
  if (!(delta >= tol) || !std::isfinite(delta)) {
    throw Error(ErrorKind::ZeroStep, "step size " + std::to_string(delta));
  }
  std::vector<double> next(q.begin(), q.end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += delta * mu[i];
  return {clean_distribution(std::move(next), tol), zm, delta};
}

std::vector<double> recover_optimal_z(const SaddleProblem& prob, const SupportSystem& ss,
                                      const FarkasCertificate& cert, const TightZ& tz) {
  std::vector<double> z = tz.z_tight;
  for (std::size_t k = 0; k < ss.outputs.size(); ++k) {
    const std::size_t j = ss.outputs[k];
    z[j] = std::clamp(z[j] - cert.lambda[k], tz.z_lower[j], tz.z_tight[j]);
    z[j] = snap_to_atom(prob, j, z[j]);
  }
  return z;
}

std::vector<double> zero_support_fix(const SaddleProblem& prob, std::span<const double> q,
                                     std::span<const double> z, double theta, double tol) {
  const std::size_t n = prob.num_inputs();
  const ScoreVector sv = score_vector(prob, z, theta);
  const double level = gamma_eval(prob, q, z, theta);

  std::size_t x1 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i] > 0.0) continue;
    if (x1 == n || sv.score(i) < sv.score(x1)) x1 = i;
  }
  std::vector<double> out(z.begin(), z.end());
  if (x1 == n || sv.score(x1) >= level - tol) return out;

  // Rows: support, x1 and the other low off-support inputs.
  std::vector<std::size_t> rows;
  std::vector<std::size_t> low;   // off-support inputs besides x1 allowed to rise
  std::vector<std::size_t> high;  // off-support inputs with slack above the level
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i] > 0.0 || i == x1) {
      rows.push_back(i);
    } else if (sv.score(i) < level + tol) {
      rows.push_back(i);
      low.push_back(i);
    } else {
      high.push_back(i);
    }
  }
  std::vector<std::size_t> left;   // mass(> z_j) binds: z_j may rise
  std::vector<std::size_t> right;  // mass(>= z_j) binds: z_j may fall
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    if (output_mass(prob, q, j, z[j], true) >= theta - tol) left.push_back(j);
    if (output_mass(prob, q, j, z[j], false) <= theta + tol && z[j] > 0.0) right.push_back(j);
  }

  std::vector<std::vector<double>> g(prob.num_outputs());
  std::vector<std::vector<double>> h(prob.num_outputs());
  for (std::size_t j : left) g[j] = indicator(prob, j, z[j], true);
  for (std::size_t j : right) h[j] = indicator(prob, j, z[j], false);

  // e_{x1} = sum_L lu_j g_j + sum_H ld_j h_j + kappa 1 - sum_low nu_k e_k,
  // lu >= 0, ld <= 0, nu >= 0.
  const std::size_t nl = left.size();
  const std::size_t nh = right.size();
  const std::size_t nv = low.size();
  const std::size_t kappa = nl + nh + nv;
  lp::Problem p(kappa + 1);
  for (std::size_t k = 0; k < nl; ++k) p.objective[k] = 1.0;
  for (std::size_t k = 0; k < nh; ++k) {
    p.objective[nl + k] = -1.0;
    p.set_bounds(nl + k, -lp::kInf, 0.0);
  }
  p.set_free(kappa);
  for (std::size_t r : rows) {
    std::vector<double> coeffs(kappa + 1, 0.0);
    for (std::size_t k = 0; k < nl; ++k) coeffs[k] = g[left[k]][r];
    for (std::size_t k = 0; k < nh; ++k) coeffs[nl + k] = h[right[k]][r];
    for (std::size_t k = 0; k < nv; ++k) coeffs[nl + nh + k] = (low[k] == r) ? -1.0 : 0.0;
    coeffs[kappa] = 1.0;
    p.add(std::move(coeffs), lp::Relation::Equal, r == x1 ? 1.0 : 0.0);
  }
  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NoDecomposition, "no decomposition for input " + std::to_string(x1));
  }

  // Net movement of each z_j per unit step.
  std::vector<double> dz(prob.num_outputs(), 0.0);
  for (std::size_t k = 0; k < nl; ++k) dz[left[k]] += sol.primal[k];
  for (std::size_t k = 0; k < nh; ++k) dz[right[k]] += sol.primal[nl + k];

  auto any_input = [](std::uint32_t) { return true; };
  double step = level - sv.score(x1);
  double dz_sum = 0.0;
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    dz_sum += dz[j];
    if (dz[j] > kRateTol) {
      const double up = next_above(prob, j, z[j], any_input);
      if (std::isfinite(up)) step = std::min(step, (up - z[j]) / dz[j]);
    } else if (dz[j] < -kRateTol) {
      const double down = std::max(next_below(prob, j, z[j], any_input), 0.0);
      step = std::min(step, (z[j] - down) / -dz[j]);
    }
  }
  for (std::size_t k : high) {
    double rate = -theta * dz_sum;
    for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
      if (dz[j] > kRateTol) {
        rate += dz[j] * indicator(prob, j, z[j], true)[k];
      } else if (dz[j] < -kRateTol) {
        rate += dz[j] * indicator(prob, j, z[j], false)[k];
      }
    }
    if (rate < -kRateTol) step = std::min(step, (sv.score(k) - level) / -rate);
  }
  step = std::max(step, 0.0);
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    if (dz[j] != 0.0) out[j] = snap_to_atom(prob, j, z[j] + step * dz[j]);
  }
  return out;
}

namespace {

// Each pass moves some z_j onto a new atom value or lifts one input to the
// support level, so the number of atoms bounds the useful passes.
std::size_t zero_fix_passes(const SaddleProblem& prob) {
  return prob.num_inputs() + prob.num_atoms();
}

struct Solver {
  const SaddleProblem& prob;
  double theta;
  TolerancePolicy tol;
  IterationTrace trace;
  // Best lower bound seen at any iterate and the z attaining it.
  double best_lower = -kInf;
  std::vector<double> best_z;

  double upper(std::span<const double> q) const {
    return max_over_z(prob, q, theta, tol.tol_eq).value;
  }

  void record(StepKind kind, double before, std::span<const double> q, std::span<const double> z,
              std::vector<double> mu = {}, double delta = 0.0, double eta = 0.0) {
    TraceStep s;
    s.kind = kind;
    s.score_before = before;
    s.score_after = upper(q);
    s.min_score = score_vector(prob, z, theta).min_score();
    if (s.min_score > best_lower) {
      best_lower = s.min_score;
      best_z.assign(z.begin(), z.end());
    }
    s.mu = std::move(mu);
    s.delta = delta;
    s.eta = eta;
    trace.steps.push_back(std::move(s));
  }

  bool certified(const SaddleReport& r, double gap) const {
    return r.ok() && gap <= tol.tol_gap;
  }

  bool certified(std::span<const double> q, std::span<const double> z) const {
    const SaddleReport r = check_saddle(prob, q, z, theta, tol.tol_gap);
    return certified(r, upper(q) - score_vector(prob, z, theta).min_score());
  }

  SaddleSolution finish(std::vector<double> q, std::vector<double> z, SolveStatus status,
                        std::size_t iterations) const {
    SaddleSolution sol;
    sol.report = check_saddle(prob, q, z, theta, tol.tol_gap);
    sol.epsilon = std::clamp(score_vector(prob, z, theta).min_score(), 0.0, 1.0);
    sol.upper = upper(q);
    sol.gap = sol.upper - sol.epsilon;
    sol.iterations = iterations;
    sol.status = status;
    // Saddle conditions at tol_gap certify the point whichever way the loop ended.
    if (certified(sol.report, sol.gap)) {
      sol.status = SolveStatus::Converged;
    } else if (status == SolveStatus::Converged) {
      sol.status = SolveStatus::Stalled;
    }
    if (sol.status != SolveStatus::Converged && best_lower > score_vector(prob, z, theta).min_score()) {
      // Any z gives a lower bound; keep the best one found.
      z = best_z;
      sol.report = check_saddle(prob, q, z, theta, tol.tol_gap);
      sol.epsilon = std::clamp(best_lower, 0.0, 1.0);
      sol.gap = sol.upper - sol.epsilon;
    }
    sol.qx = std::move(q);
    sol.z = std::move(z);
    return sol;
  }
};

}  // namespace

SolveResult solve_saddle(const SaddleProblem& prob, double theta, const TolerancePolicy& tol,
                         std::optional<std::vector<double>> q0) {
  tol.validate();
  const double eq = tol.tol_eq;
  const std::size_t n = prob.num_inputs();
  Solver s{prob, theta, tol, {}, -kInf, {}};

  std::vector<double> q;
  if (q0) {
    if (q0->size() != n) throw Error(ErrorKind::DimensionMismatch, "initial Q_X has wrong size");
    q = clean_distribution(*q0, eq);
  } else {
    q.assign(n, 1.0 / static_cast<double>(n));
  }

  if (theta >= 1.0 - eq) {
    // R = 0: gamma(q, z) <= 0 with equality at z = 0.
    std::vector<double> z(prob.num_outputs(), 0.0);
    s.record(StepKind::Start, s.upper(q), q, z);
    return {s.finish(std::move(q), std::move(z), SolveStatus::Converged, 0), std::move(s.trace)};
  }

  std::vector<double> z = optimal_z(prob, q, theta, eq);
  s.record(StepKind::Start, s.upper(q), q, z);

  std::optional<FarkasCertificate> last_cert;
  std::optional<FarkasSystem> last_system;
  int stalls = 0;
  double best_upper = s.upper(q);

  for (std::size_t iter = 1; iter <= tol.max_iter; ++iter) {
    if (!z_condition_holds(prob, q, z, theta, eq)) z = optimal_z(prob, q, theta, eq);
    if (s.certified(q, z)) {
      SaddleSolution sol = s.finish(std::move(q), std::move(z), SolveStatus::Converged, iter);
      sol.farkas = last_cert;
      sol.farkas_system = last_system;
      return {std::move(sol), std::move(s.trace)};
    }

    const double before_local = s.upper(q);
    LocalStep ls = local_qx_step(prob, q, z, theta, eq);
    if (ls.improved) {
      q = std::move(ls.q);
      if (!z_condition_holds(prob, q, z, theta, eq)) z = optimal_z(prob, q, theta, eq);
      s.record(StepKind::LocalLP, before_local, q, z);
    }

    const TightZ tz = tighten_z(prob, q, z, theta, eq);
    z = tz.z_tight;
    const SupportSystem ss = build_support_system(prob, q, tz, eq);
    PerturbationOutcome outcome = minimize_eta(ss.system, eq);

    if (auto* mu_s = std::get_if<std::vector<double>>(&outcome)) {
      std::vector<double> mu(n, 0.0);
      for (std::size_t k = 0; k < ss.support.size(); ++k) mu[ss.support[k]] = (*mu_s)[k];
      const double before = s.upper(q);
      const double eta = eta_direction(prob, mu, tz);
      try {
        DirectionStep ds = apply_direction(prob, q, mu, tz, theta, eq);
        q = std::move(ds.q);
        z = std::move(ds.z);
        s.record(StepKind::Improvement, before, q, z, std::move(mu), ds.delta, eta);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroStep) throw;
        if (++stalls > kMaxStalls) {
          return {s.finish(std::move(q), std::move(z), SolveStatus::Stalled, iter),
                  std::move(s.trace)};
        }
      }
    } else {
      const auto& cert = std::get<FarkasCertificate>(outcome);
      last_cert = cert;
      last_system = ss.system;
      std::vector<double> zo = recover_optimal_z(prob, ss, cert, tz);

      // Off-support inputs: raise their scores to the support level.
      // Off-support scores only need to reach the level to within tol_gap.
      const double settle = std::max(eq, 0.5 * tol.tol_gap);
      bool settled = false;
      const std::size_t max_passes = zero_fix_passes(prob);
      for (std::size_t pass = 0; pass <= max_passes; ++pass) {
        const ScoreVector sv = score_vector(prob, zo, theta);
        const double level = gamma_eval(prob, q, zo, theta);
        bool low = false;
        for (std::size_t i = 0; i < n && !low; ++i) {
          low = q[i] <= 0.0 && sv.score(i) < level - settle;
        }
        if (!low) {
          settled = true;
          break;
        }
        if (pass == max_passes) break;
        try {
          const double before = s.upper(q);
          zo = zero_support_fix(prob, q, zo, theta, eq);
          s.record(StepKind::ZeroFix, before, q, zo);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoDecomposition) throw;
          break;
        }
      }

      if (settled) {
        SaddleSolution sol = s.finish(std::move(q), std::move(zo), SolveStatus::Converged, iter);
        sol.farkas = last_cert;
        sol.farkas_system = last_system;
        return {std::move(sol), std::move(s.trace)};
      }

      // Mass can move onto an off-support input with z held at zo.
      z = zo;
      const double before = s.upper(q);
      LocalStep retry = local_qx_step(prob, q, z, theta, eq);
      if (retry.improved) {
        q = std::move(retry.q);
        if (!z_condition_holds(prob, q, z, theta, eq)) z = optimal_z(prob, q, theta, eq);
        s.record(StepKind::LocalLP, before, q, z);
      }
    }

    const double now = s.upper(q);
    if (now < best_upper - eq) {
      best_upper = now;
      stalls = 0;
    } else if (++stalls > kMaxStalls) {
      SaddleSolution sol = s.finish(std::move(q), std::move(z), SolveStatus::Stalled, iter);
      sol.farkas = last_cert;
      sol.farkas_system = last_system;
      return {std::move(sol), std::move(s.trace)};
    }
  }
  SaddleSolution sol = s.finish(std::move(q), std::move(z), SolveStatus::IterationLimit,
                                tol.max_iter);
  sol.farkas = last_cert;
  sol.farkas_system = last_system;
  return {std::move(sol), std::move(s.trace)};
}

ChannelSolveResult solve_saddle(const Channel& w, const RatePoint& r, const TolerancePolicy& tol,
                                std::optional<ProbVector> qx0) {
  const SaddleProblem prob = SaddleProblem::from_channel(w);
  std::optional<std::vector<double>> q0;
  if (qx0) {
    if (qx0->size() != w.nx()) throw Error(ErrorKind::DimensionMismatch, "initial Q_X size");
    q0 = qx0->vec();
  }
  SolveResult res = solve_saddle(prob, r.threshold(), tol, std::move(q0));
  SaddleSolution& s = res.solution;
  ChannelSolveResult out{
      {ProbVector::from(s.qx, 1e-8), ZVector(s.z, 1e-8), s.epsilon, s.gap, s.farkas,
       s.farkas_system, s.iterations, s.status, tol.tol_gap},
      std::move(res.trace)};
  return out;
}

}  // namespace mmc
