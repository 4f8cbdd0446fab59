// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "mmc/channel_io.hpp"
#include "mmc/commands.hpp"
#include "mmc/gamma.hpp"
#include "mmc/hypothesis.hpp"
#include "mmc/oracle.hpp"
#include "mmc/saddle.hpp"
#include "mmc/types.hpp"
#include "mmc/verify.hpp"

using namespace mmc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct BetaCase {
  std::vector<double> p;
  std::vector<double> q;
  double alpha;
};

std::vector<BetaCase> beta_corpus() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<BetaCase> out;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = size(rng);
    const bool ties = k % 4 == 3;
    BetaCase c{verify::random_distribution(rng, n, ties), verify::random_distribution(rng, n, ties), u(rng)};
    if (k % 10 == 5) c.alpha = std::round(c.alpha * 8) / 8;  // lands on group boundaries
    out.push_back(std::move(c));
  }
  return out;
}

void criterion_1(const std::vector<BetaCase>& corpus) {
  const auto t0 = Clock::now();
  double var_err = 0.0;
  double lp_err = 0.0;
  for (const BetaCase& c : corpus) {
    const double b = beta_np(c.p, c.q, c.alpha).beta;
    var_err = std::max(var_err, std::abs(b - beta_variational(c.p, c.q, c.alpha).beta));
    lp_err = std::max(lp_err, std::abs(b - oracle::beta_lp_oracle(c.p, c.q, c.alpha)));
  }
  const double t = seconds_since(t0);
  report(1, "beta three-way agreement", var_err <= 1e-10 && lp_err <= 1e-8 && t < 10.0,
         "max|np-var|=" + fmt(var_err) + " max|np-lp|=" + fmt(lp_err) + " time=" + fmt(t) + "s");
}

void criterion_2(const std::vector<BetaCase>& corpus) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double attain_err = 0.0;
  double min_drop = INFINITY;
  std::size_t outside = 0;
  for (const BetaCase& c : corpus) {
    const BetaResult r = beta_np(c.p, c.q, c.alpha);
    const LambdaInterval iv = r.lambda_interval;
    const double span = std::isfinite(iv.hi) ? iv.hi - iv.lo : 10.0 * (1.0 + iv.lo);
    for (int j = 0; j <= 20; ++j) {
      const double l = iv.lo + span * j / 20.0;
      attain_err = std::max(attain_err, std::abs(beta_objective(c.p, c.q, c.alpha, l) - r.beta));
    }
    // 100 lambdas outside the interval, split between the two sides that exist.
    const bool below = iv.lo > 0.0;
    const bool above = std::isfinite(iv.hi);
    for (int j = 0; j < 100; ++j) {
      double l;
      if (below && (!above || j % 2 == 0)) {
        l = iv.lo * u(rng);
      } else if (above) {
        l = iv.hi + (1.0 + iv.hi) * (1e-6 + 10.0 * u(rng));
      } else {
        break;
      }
      if (l >= iv.lo && (!above || l <= iv.hi)) continue;
      ++outside;
      min_drop = std::min(min_drop, r.beta - beta_objective(c.p, c.q, c.alpha, l));
    }
  }
  const double t = seconds_since(t0);
  report(2, "lambda interval iff", attain_err <= 1e-10 && min_drop > 0.0 && t < 10.0,
         "max attain err=" + fmt(attain_err) + " min drop outside=" + fmt(min_drop) + " over " +
             std::to_string(outside) + " samples time=" + fmt(t) + "s");
}

void criterion_3() {
  const auto t0 = Clock::now();
  const TolerancePolicy tol;
  const RatePoint ln2(std::log(2.0));
  double err = 0.0;
  err = std::max(err, std::abs(solve_saddle(bsc(0.3), ln2, tol).certificate.epsilon - 0.3));
  err = std::max(err, std::abs(solve_saddle(make_channel({{1, 0}, {0.5, 0.5}}), ln2, tol).certificate.epsilon - 0.25));
  err = std::max(err, std::abs(solve_saddle(identity_channel(2), ln2, tol).certificate.epsilon));
  std::mt19937_64 rng(1003);
  for (int k = 0; k < 20; ++k) {
    const Channel w = verify::random_channel(rng, 2 + k % 7, 2 + k % 5, k % 2 == 0);
    err = std::max(err, std::abs(solve_saddle(w, RatePoint(0.0), tol).certificate.epsilon));
  }
  const double t = seconds_since(t0);
  report(3, "saddle fixed points", err <= 1e-8 && t < 1.0, "max err=" + fmt(err) + " time=" + fmt(t) + "s");
}

struct CorpusOutcome {
  double oracle_err = 0.0;
  std::size_t bad_certificates = 0;
  std::size_t ascents = 0;
  std::size_t weak_duality_violations = 0;
  double farkas_residual = 0.0;
  std::size_t farkas_cap_violations = 0;
  std::size_t certificates = 0;
  double seconds = 0.0;
};

CorpusOutcome run_channel_corpus() {
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<std::size_t> dim(2, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TolerancePolicy tol;
  CorpusOutcome o;
  const auto t0 = Clock::now();
  for (int k = 0; k < 200; ++k) {
    const Channel w = verify::random_channel(rng, dim(rng), dim(rng), k % 2 == 1);
    const double rate = (1.0 - u(rng)) * std::log(static_cast<double>(w.nx()));  // in (0, ln nx]
    const RatePoint r(rate);
    const double mm = oracle::maxmin_lp(w, r).epsilon;
    const ChannelSolveResult res = solve_saddle(w, r, tol);
    const SaddleCertificate& c = res.certificate;
    o.oracle_err = std::max(o.oracle_err, std::abs(c.epsilon - mm));
    if (!check_saddle(c.qx_star, c.z_star, w, r, 1e-8).ok()) ++o.bad_certificates;

    double prev = INFINITY;
    for (const TraceStep& st : res.trace.steps) {
      if (st.score_after > prev) ++o.ascents;
      if (st.min_score > mm + 1e-10) ++o.weak_duality_violations;
      prev = st.score_after;
    }
    if (c.farkas && c.farkas_system) {
      ++o.certificates;
      o.farkas_residual = std::max(o.farkas_residual, c.farkas->residual(*c.farkas_system));
      for (std::size_t y = 0; y < c.farkas->lambda.size(); ++y) {
        if (c.farkas->lambda[y] < 0.0 || c.farkas->lambda[y] > c.farkas_system->alpha[y]) ++o.farkas_cap_violations;
      }
    }
  }
  o.seconds = seconds_since(t0);
  return o;
}

void criteria_4_to_6() {
  const CorpusOutcome o = run_channel_corpus();
  report(4, "oracle equivalence",
         o.oracle_err <= 1e-8 && o.bad_certificates == 0 && o.seconds < 120.0,
         "max|eps-maxmin|=" + fmt(o.oracle_err) + " failed check_saddle=" + std::to_string(o.bad_certificates) +
             " time=" + fmt(o.seconds) + "s");
  report(5, "descent and validity", o.ascents == 0 && o.weak_duality_violations == 0,
         "ascents=" + std::to_string(o.ascents) + " weak duality violations=" +
             std::to_string(o.weak_duality_violations));
  report(6, "Farkas certificate soundness",
         o.certificates > 0 && o.farkas_residual <= 1e-10 && o.farkas_cap_violations == 0,
         std::to_string(o.certificates) + " certificates, max residual=" + fmt(o.farkas_residual) +
             " cap violations=" + std::to_string(o.farkas_cap_violations));
}

void criterion_7() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TolerancePolicy tol;
  double err = 0.0;
  std::size_t cases = 0;
  for (double p : {0.1, 0.3}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const Channel wn = product_channel(bsc(p), n);
      for (int k = 0; k < 5; ++k) {
        const RatePoint r(u(rng) * n * std::log(2.0));
        const double dmc = types::solve_saddle_dmc(bsc(p), n, r, tol).certificate.epsilon;
        const double full = solve_saddle(wn, r, tol).certificate.epsilon;
        err = std::max(err, std::abs(dmc - full));
        ++cases;
      }
    }
  }
  const double t = seconds_since(t0);
  report(7, "type reduction exactness", err <= 1e-8 && t < 60.0,
         std::to_string(cases) + " cases, max err=" + fmt(err) + " time=" + fmt(t) + "s");
}

// Least-squares slope of log time against log n.
double loglog_slope(const std::vector<double>& n, const std::vector<double>& t) {
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]) / n.size();
    my += std::log(t[i]) / n.size();
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sxy += (std::log(n[i]) - mx) * (std::log(t[i]) - my);
    sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
  }
  return sxy / sxx;
}

void criterion_8() {
  const TolerancePolicy tol;
  const std::vector<double> ns = {4, 8, 16, 32};
  double worst_slope = -INFINITY;
  double worst_t32 = 0.0;
  bool converged = true;
  // Rates per channel use, below and above capacity (about 0.082 nats).
  for (double rate_per_use : {0.05, 0.1, 0.3, 0.5 * std::log(2.0)}) {
    std::vector<double> secs;
    for (double n : ns) {
      // Repeat fast solves so each timing covers at least 0.2 s.
      int reps = 0;
      const auto t0 = Clock::now();
      do {
        const auto c = types::solve_saddle_dmc(bsc(0.3), static_cast<std::size_t>(n),
                                               RatePoint(rate_per_use * n), tol).certificate;
        converged &= c.status == SolveStatus::Converged;
        ++reps;
      } while (seconds_since(t0) < 0.2);
      secs.push_back(seconds_since(t0) / reps);
    }
    worst_t32 = std::max(worst_t32, secs.back());
    worst_slope = std::max(worst_slope, loglog_slope(ns, secs));
  }
  report(8, "polynomial scaling", worst_t32 < 60.0 && worst_slope <= 6.0 && converged,
         "worst n=32 time=" + fmt(worst_t32) + "s worst log-log slope=" + fmt(worst_slope) + " over 4 rates" +
             (converged ? "" : " (not converged)"));
}

void criterion_9() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("mmc_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string chan = (dir / "bsc.txt").string();
  {
    std::ofstream f(chan);
    io::write_channel(f, bsc(0.3));
  }
  cli::Flags flags;
  std::ostringstream out;
  std::ostringstream err;
  std::string csv[2];
  bool ok = true;
  for (int run = 0; run < 2; ++run) {
    const std::string path = (dir / ("sweep" + std::to_string(run) + ".csv")).string();
    ok &= cli::cmd_sweep(chan, 0.0, std::log(2.0), 11, path, flags, out, err) == cli::kOk;
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    csv[run] = s.str();
  }
  fs::remove_all(dir);

  std::vector<double> eps;
  std::istringstream in(csv[0]);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) eps.push_back(std::stod(line.substr(line.find(',') + 1)));
  bool monotone = true;
  for (std::size_t k = 1; k < eps.size(); ++k) monotone &= eps[k] >= eps[k - 1];
  const bool identical = !csv[0].empty() && csv[0] == csv[1];
  const bool ends = eps.size() == 11 && std::abs(eps.front()) <= 1e-8 && std::abs(eps.back() - 0.3) <= 1e-8;
  report(9, "sweep reproducibility", ok && identical && monotone && ends,
         std::string(identical ? "byte-identical" : "runs differ") + ", " + (monotone ? "nondecreasing" : "not monotone") +
             ", endpoints " + (eps.empty() ? "missing" : fmt(eps.front()) + " " + io::format_number(eps.back())));
}

}  // namespace

int main() {
  const std::vector<BetaCase> corpus = beta_corpus();
  criterion_1(corpus);
  criterion_2(corpus);
  criterion_3();
  criteria_4_to_6();
  criterion_7();
  criterion_8();
  criterion_9();
  return failures == 0 ? 0 : 1;
}
