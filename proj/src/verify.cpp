#include "mmc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "mmc/channel_io.hpp"
#include "mmc/farkas.hpp"
#include "mmc/gamma.hpp"
#include "mmc/hypothesis.hpp"
#include "mmc/kernels.hpp"
#include "mmc/oracle.hpp"
#include "mmc/saddle.hpp"
#include "mmc/simplex.hpp"
#include "mmc/types.hpp"

namespace mmc::verify {

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n, bool ties) {
  std::vector<double> p(n);
  if (ties) {
    // Multiples of 1/8; at least one entry is nonzero.
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    std::vector<int> units(n, 0);
    for (int k = 0; k < 8; ++k) ++units[static_cast<std::size_t>(pick(rng))];
    for (std::size_t i = 0; i < n; ++i) p[i] = units[i] / 8.0;
    return p;
  }
  std::exponential_distribution<double> e(1.0);
  double s = 0.0;
  for (double& v : p) s += (v = e(rng));
  for (double& v : p) v /= s;
  return ProbVector::from(std::move(p)).vec();
}

Channel random_channel(std::mt19937_64& rng, std::size_t nx, std::size_t ny, bool ties) {
  std::vector<std::vector<double>> rows(nx);
  for (auto& r : rows) r = random_distribution(rng, ny, ties);
  return make_channel(rows);
}

namespace {

class Suite {
 public:
  explicit Suite(bool fault) : fault_(fault) {}

  /// Tolerance used for comparisons; negative under fault injection.
  double tol(double t) const { return fault_ ? -1.0 : t; }
  /// Gate for pass/fail checks that have no tolerance.
  bool healthy() const { return !fault_; }

  void check(const std::string& name, bool pass, const std::function<std::string()>& repro) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      it = index_.emplace(name, results_.size()).first;
      results_.push_back({name, 0, 0, {}});
    }
    PropertyResult& r = results_[it->second];
    ++r.checked;
    if (!pass) {
      if (r.failed == 0) r.reproduction = repro();
      ++r.failed;
    }
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

 private:
  bool fault_;
  std::map<std::string, std::size_t> index_;
  std::vector<PropertyResult> results_;
};

std::string describe(const Channel& w) {
  std::ostringstream os;
  os << "channel ";
  for (std::size_t x = 0; x < w.nx(); ++x) {
    os << (x ? " | " : "");
    for (std::size_t y = 0; y < w.ny(); ++y) os << (y ? " " : "") << io::format_number(w(x, y));
  }
  return os.str();
}

std::string describe(std::span<const double> v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << io::format_number(v[i]);
  return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<double> random_z(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> z(n);
  for (double& v : z) v = uniform(rng, 0.0, 1.0);
  return z;
}

// Sum-zero direction with max-norm 1 that keeps q + t mu >= 0 for small t > 0.
std::vector<double> random_direction(std::mt19937_64& rng, std::span<const double> q) {
  const std::size_t n = q.size();
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = q[i] > 0.0 ? uniform(rng, -1.0, 1.0) : uniform(rng, 0.0, 1.0);
  double mean = 0.0;
  for (double v : mu) mean += v / static_cast<double>(n);
  for (double& v : mu) v -= mean;
  double norm = 0.0;
  for (double v : mu) norm = std::max(norm, std::abs(v));
  for (double& v : mu) v /= norm;
  return mu;
}

void check_channel(Suite& s, const Channel& w, const std::string& tag) {
  const Channel w2 = product_channel(w, 2);
  const Channel w3 = product_channel(w, 3);
  double row_err = 0.0;
  for (std::size_t x = 0; x < w2.nx(); ++x) {
    double sum = 0.0;
    for (double v : w2.row(x)) sum += v;
    row_err = std::max(row_err, std::abs(sum - 1.0));
  }
  s.check("channel.product_rows_stochastic", row_err <= s.tol(2 * kDefaultTolEq),
          [&] { return tag + " row error " + io::format_number(row_err); });

  double assoc = 0.0;
  const std::size_t nx = w.nx();
  const std::size_t ny = w.ny();
  for (std::size_t xa = 0; xa < w2.nx(); ++xa)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t ya = 0; ya < w2.ny(); ++ya)
        for (std::size_t y = 0; y < ny; ++y)
          assoc = std::max(assoc, std::abs(w3(xa * nx + x, ya * ny + y) - w2(xa, ya) * w(x, y)));
  s.check("channel.product_associative", assoc <= s.tol(1e-15),
          [&] { return tag + " max difference " + io::format_number(assoc); });
}

void check_beta(Suite& s, std::mt19937_64& rng, const TolerancePolicy& tol, const std::string& tag) {
  const std::size_t n = pick(rng, 2, 12);
  const bool ties = rng() % 2 == 0;
  const std::vector<double> p = random_distribution(rng, n, ties);
  const std::vector<double> q = random_distribution(rng, n, ties);
  const double alpha = uniform(rng, 0.0, 1.0);
  auto repro = [&] {
    return tag + " P=(" + describe(p) + ") Q=(" + describe(q) + ") alpha=" + io::format_number(alpha);
  };

  const BetaResult np = beta_np(p, q, alpha, tol.tol_eq);
  const VariationalBeta var = beta_variational(p, q, alpha, tol.tol_eq);
  const double lp = oracle::beta_lp_oracle(p, q, alpha);
  s.check("beta.variational_agrees", std::abs(np.beta - var.beta) <= s.tol(tol.tol_eq), repro);
  s.check("beta.lp_oracle_agrees", std::abs(np.beta - lp) <= s.tol(1e-8), repro);

  const LambdaInterval iv = np.lambda_interval;
  std::vector<double> inside = {iv.lo};
  if (std::isfinite(iv.hi)) {
    inside.push_back(iv.hi);
    inside.push_back(0.5 * (iv.lo + iv.hi));
  } else {
    inside.push_back(iv.lo + 1.0);
  }
  bool attains = true;
  for (double l : inside) attains &= std::abs(beta_objective(p, q, alpha, l) - np.beta) <= s.tol(tol.tol_eq);
  s.check("beta.interval_attains", attains, repro);

  bool strict = true;
  if (iv.lo > 0.0) strict &= beta_objective(p, q, alpha, iv.lo * uniform(rng, 0.0, 0.99)) < np.beta;
  if (std::isfinite(iv.hi)) strict &= beta_objective(p, q, alpha, iv.hi * uniform(rng, 1.01, 3.0) + 1e-3) < np.beta;
  s.check("beta.outside_strictly_below", strict && s.healthy(), repro);

  bool monotone = true;
  bool self = true;
  double prev = -1.0;
  for (int k = 0; k <= 10; ++k) {
    const double a = k / 10.0;
    const double b = beta_np(p, q, a, tol.tol_eq).beta;
    monotone &= b >= prev - s.tol(tol.tol_eq);
    prev = b;
    self &= std::abs(beta_np(p, p, a, tol.tol_eq).beta - a) <= s.tol(1e-15);
  }
  s.check("beta.monotone_in_alpha", monotone, repro);
  s.check("beta.same_distribution_is_alpha", self, repro);
}

void check_gamma(Suite& s, std::mt19937_64& rng, const Channel& w, const RatePoint& r,
                 const TolerancePolicy& tol, const std::string& tag) {
  const auto q1 = ProbVector::from(random_distribution(rng, w.nx()));
  const auto q2 = ProbVector::from(random_distribution(rng, w.nx()));
  const ZVector z1(random_z(rng, w.ny()));
  const ZVector z2(random_z(rng, w.ny()));
  const double a = uniform(rng, 0.0, 1.0);

  std::vector<double> mix(w.nx());
  for (std::size_t x = 0; x < w.nx(); ++x) mix[x] = a * q1[x] + (1 - a) * q2[x];
  const double affine = std::abs(gamma_eval(ProbVector::from(mix), z1, w, r) -
                                 (a * gamma_eval(q1, z1, w, r) + (1 - a) * gamma_eval(q2, z1, w, r)));
  s.check("gamma.affine_in_qx", affine <= s.tol(1e-12),
          [&] { return tag + " error " + io::format_number(affine); });

  std::vector<double> zm(w.ny());
  for (std::size_t y = 0; y < w.ny(); ++y) zm[y] = 0.5 * (z1[y] + z2[y]);
  const double concave = gamma_eval(q1, ZVector(zm), w, r) -
                         0.5 * (gamma_eval(q1, z1, w, r) + gamma_eval(q1, z2, w, r));
  s.check("gamma.concave_in_z", concave >= -s.tol(tol.tol_eq), [&] { return tag; });

  const MaxOverZ best = max_over_z(q1, w, r, tol.tol_eq);
  bool dominates = true;
  for (int k = 0; k < 200; ++k) {
    dominates &= best.value >= gamma_eval(q1, ZVector(random_z(rng, w.ny())), w, r) - s.tol(tol.tol_eq);
  }
  s.check("gamma.optimal_z_maximizes", dominates, [&] { return tag + " Q_X=(" + describe(q1.vec()) + ")"; });

  std::vector<double> zi(w.ny());
  for (std::size_t y = 0; y < w.ny(); ++y) {
    const ZInterval iv = optimal_z_interval(q1, w, r, y, tol.tol_eq);
    zi[y] = uniform(rng, iv.lo, iv.hi);
  }
  const double alt = gamma_eval(q1, ZVector(zi), w, r);
  s.check("gamma.optimal_set_same_value", std::abs(alt - best.value) <= s.tol(tol.tol_eq),
          [&] { return tag + " Q_X=(" + describe(q1.vec()) + ")"; });

  const double low = score_vector(z1, w, r).min_score();
  s.check("gamma.weak_duality", low <= best.value + s.tol(tol.tol_eq), [&] { return tag; });
}

void check_farkas(Suite& s, std::mt19937_64& rng, const std::string& tag) {
  FarkasSystem sys;
  const std::size_t d = pick(rng, 2, 5);
  const std::size_t m = pick(rng, 1, 4);
  sys.b.resize(d);
  for (double& v : sys.b) v = std::round(uniform(rng, 0.0, 4.0)) / 4.0;
  sys.a.assign(m, std::vector<double>(d));
  for (auto& a : sys.a)
    for (double& v : a) v = static_cast<double>(rng() % 2);
  sys.alpha.resize(m);
  for (double& v : sys.alpha) v = std::round(uniform(rng, 0.0, 4.0)) / 4.0;
  auto repro = [&] { return tag + " b=(" + describe(sys.b) + ") alpha=(" + describe(sys.alpha) + ")"; };

  if (auto cert = farkas_certificate(sys)) {
    const double res = cert->residual(sys);
    s.check("farkas.round_trip", res <= s.tol(kDefaultTolEq) && cert->within_caps(sys, kDefaultTolEq), repro);
  }

  const PerturbationOutcome out = minimize_eta(sys);
  if (const auto* mu = std::get_if<std::vector<double>>(&out)) {
    s.check("farkas.direction_improves", sys.eta(*mu) < 0.0 && s.healthy(), repro);
  } else {
    double sampled = 0.0;
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> mu(d);
      double mean = 0.0;
      for (double& v : mu) mean += (v = uniform(rng, -1.0, 1.0)) / static_cast<double>(d);
      for (double& v : mu) v -= mean;
      sampled = std::min(sampled, sys.eta(mu));
    }
    s.check("farkas.certificate_lower_bound", sampled >= -s.tol(kDefaultTolEq), repro);
  }
}

void check_simplex(Suite& s, std::mt19937_64& rng, const std::string& tag) {
  const std::size_t n = pick(rng, 2, 6);
  lp::Problem p(n);
  for (double& c : p.objective) c = uniform(rng, -1.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) p.set_bounds(j, 0.0, uniform(rng, 0.5, 2.0));
  const std::size_t rows = pick(rng, 1, 4);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> a(n);
    for (double& v : a) v = std::round(uniform(rng, -2.0, 2.0));
    p.add(std::move(a), i % 2 ? lp::Relation::GreaterEq : lp::Relation::LessEq, std::round(uniform(rng, -1.0, 1.0)));
  }
  const lp::Solution a = lp::solve(p);
  const lp::Solution b = lp::solve(p);
  s.check("simplex.deterministic",
          a.status == b.status && a.primal == b.primal && a.pivots == b.pivots && s.healthy(),
          [&] { return tag; });
  if (a.status != lp::Status::Optimal) return;

  // c.x = dual.rhs + reduced_costs.x at an optimum with complementary slackness.
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) dual_obj += a.dual[i] * p.constraints[i].rhs;
  for (std::size_t j = 0; j < n; ++j) dual_obj += a.reduced_costs[j] * a.primal[j];
  s.check("simplex.strong_duality", std::abs(dual_obj - a.objective_value) <= s.tol(kDefaultTolEq),
          [&] { return tag + " primal " + io::format_number(a.objective_value) + " dual " + io::format_number(dual_obj); });
}

void check_saddle_props(Suite& s, std::mt19937_64& rng, const Channel& w, const RatePoint& r,
                        const TolerancePolicy& tol, bool ties, const std::string& tag) {
  const oracle::MaxMinValue mm = oracle::maxmin_lp(w, r);
  const ChannelSolveResult res = solve_saddle(w, r, tol);
  const SaddleCertificate& c = res.certificate;

  s.check("saddle.oracle_agreement", std::abs(c.epsilon - mm.epsilon) <= s.tol(tol.tol_gap), [&] {
    return tag + " epsilon " + io::format_number(c.epsilon) + " oracle " + io::format_number(mm.epsilon);
  });
  const SaddleReport rep = check_saddle(c.qx_star, c.z_star, w, r, tol.tol_gap);
  s.check("saddle.certificate_sound", rep.ok() && s.healthy(), [&] { return tag; });
  if (c.farkas && c.farkas_system) {
    s.check("saddle.farkas_reconstructs",
            c.farkas->residual(*c.farkas_system) <= s.tol(tol.tol_eq) &&
                c.farkas->within_caps(*c.farkas_system, tol.tol_eq),
            [&] { return tag; });
  }

  bool descent = true;
  bool lower = true;
  double prev = std::numeric_limits<double>::infinity();
  for (const TraceStep& st : res.trace.steps) {
    descent &= st.score_after <= prev + s.tol(1e-12);
    if (st.kind == StepKind::Improvement) descent &= st.score_before >= st.score_after;
    prev = st.score_after;
    lower &= st.min_score <= mm.epsilon + s.tol(tol.tol_eq);
  }
  s.check("saddle.trace_descends", descent, [&] { return tag; });
  s.check("saddle.iterates_lower_bound", lower, [&] { return tag; });

  if (w.nx() <= 3) {
    const double grid = oracle::grid_saddle_check(w, r, 12);
    s.check("oracle.maxmin_below_grid", mm.epsilon <= grid + s.tol(tol.tol_eq), [&] { return tag; });
  }

  if (!ties) {
    // Finite differences of max_z gamma against the directional derivative.
    const SaddleProblem prob = SaddleProblem::from_channel(w);
    const std::vector<double> q = random_distribution(rng, w.nx());
    const double theta = r.threshold();
    const std::vector<double> z = optimal_z(prob, q, theta, tol.tol_eq);
    const TightZ tz = tighten_z(prob, q, z, theta, tol.tol_eq);
    const std::vector<double> mu = random_direction(rng, q);
    const double qmin = *std::min_element(q.begin(), q.end());
    const double delta = 1e-6 * std::min(1.0, qmin);
    std::vector<double> moved(q);
    for (std::size_t x = 0; x < q.size(); ++x) moved[x] += delta * mu[x];
    const double fd = (max_over_z(prob, moved, theta, tol.tol_eq).value -
                       max_over_z(prob, q, theta, tol.tol_eq).value) / delta;
    const double eta = eta_direction(prob, mu, tz);
    s.check("saddle.eta_matches_finite_difference", std::abs(fd - eta) <= s.tol(10 * tol.tol_eq / std::min(1.0, qmin) + 1e-9),
            [&] { return tag + " Q_X=(" + describe(q) + ") mu=(" + describe(mu) + ")"; });
  }

  // Sweep monotonicity on a few sorted rates.
  std::vector<double> rates(3);
  for (double& v : rates) v = uniform(rng, 0.0, std::log(static_cast<double>(w.nx())));
  std::sort(rates.begin(), rates.end());
  double last = -1.0;
  bool increasing = true;
  for (double rate : rates) {
    const double e = solve_saddle(w, RatePoint(rate), tol).certificate.epsilon;
    increasing &= e >= last - s.tol(tol.tol_gap);
    last = e;
  }
  s.check("sweep.epsilon_nondecreasing", increasing, [&] { return tag + " rates " + describe(rates); });

  const SaddleProblem prob = SaddleProblem::from_channel(w);
  const std::vector<double> zr = random_z(rng, w.ny());
  std::vector<double> a(w.nx());
  std::vector<double> b(w.nx());
  kernels::serial::input_sums(prob, zr, a);
  kernels::parallel::input_sums(prob, zr, b);
  double kd = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) kd = std::max(kd, std::abs(a[x] - b[x]));
  s.check("kernels.serial_matches_parallel", kd <= s.tol(1e-14), [&] { return tag; });
}

void check_types(Suite& s, std::mt19937_64& rng, const TolerancePolicy& tol, const std::string& tag) {
  const Channel w = random_channel(rng, 2, 2, rng() % 2 == 0);
  const std::size_t n = pick(rng, 1, 2);
  const double rate = uniform(rng, 0.0, n * std::log(2.0));
  const double dmc = types::solve_saddle_dmc(w, n, RatePoint(rate), tol).certificate.epsilon;
  const double full = solve_saddle(product_channel(w, n), RatePoint(rate), tol).certificate.epsilon;
  s.check("types.reduction_exact", std::abs(dmc - full) <= s.tol(tol.tol_gap), [&] {
    return tag + " " + describe(w) + " n=" + std::to_string(n) + " rate=" + io::format_number(rate);
  });

  const auto index = types::TypeClassIndex::build(pick(rng, 2, 3), pick(rng, 2, 3), pick(rng, 1, 4));
  double err = 0.0;
  for (const auto& jt : index.joint_types()) {
    err = std::max(err, std::abs(jt.log_size - index.log_size_input(jt.input_type) - jt.log_size_y_given_x));
  }
  s.check("types.size_identity", err <= s.tol(1e-9), [&] { return tag + " error " + io::format_number(err); });
}

}  // namespace

std::vector<PropertyResult> run(const Options& opts) {
  opts.tol.validate();
  Suite s(opts.inject_fault);
  for (std::size_t k = 0; k < opts.count; ++k) {
    const std::uint64_t seed = opts.seed + k;
    std::mt19937_64 rng(seed);
    const std::string tag = "seed=" + std::to_string(seed);
    const bool ties = k % 2 == 1;
    const Channel w = random_channel(rng, pick(rng, 2, 5), pick(rng, 2, 5), ties);
    const RatePoint r(uniform(rng, 1e-3, std::log(static_cast<double>(w.nx()))));
    const std::string ctag = tag + " " + describe(w) + " rate=" + io::format_number(r.rate());

    check_channel(s, w, ctag);
    check_beta(s, rng, opts.tol, tag);
    check_gamma(s, rng, w, r, opts.tol, ctag);
    check_farkas(s, rng, tag);
    check_simplex(s, rng, tag);
    check_saddle_props(s, rng, w, r, opts.tol, ties, ctag);
    check_types(s, rng, opts.tol, tag);
  }
  return s.take();
}

}  // namespace mmc::verify
