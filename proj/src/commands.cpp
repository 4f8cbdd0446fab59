#include "mmc/commands.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mmc/channel_io.hpp"
#include "mmc/hypothesis.hpp"
#include "mmc/types.hpp"
#include "mmc/verify.hpp"

namespace mmc::cli {

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonStochasticRow:
    case ErrorKind::NegativeEntry:
      return kInputError;
    case ErrorKind::TooLarge:
      return kTooLarge;
    default:
      return kFailure;
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

double to_nats(double rate, const Flags& flags) { return flags.bits ? rate * std::log(2.0) : rate; }

// Runs `write` against the named file, or stdout for "-".
template <class F>
void write_to(const std::string& path, std::ostream& out, F&& write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
  write(f);
  f.flush();
  if (!f) throw Error(ErrorKind::IoError, "write failed for " + path);
}

void print_field(std::ostream& out, const char* name, double v) {
  out << name << ' ' << io::format_number(v) << '\n';
}

int report_status(std::ostream& out, SolveStatus status) {
  out << "status " << to_string(status) << '\n';
  if (status == SolveStatus::Converged) return kOk;
  out << "LOWER-BOUND-ONLY\n";
  return kLowerBoundOnly;
}

}  // namespace

std::vector<SweepRow> sweep(const Channel& w, double rate_min, double rate_max, std::size_t steps,
                            const TolerancePolicy& tol) {
  if (steps == 0) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1");
  if (!(rate_min <= rate_max)) throw Error(ErrorKind::InvalidArgument, "rate_min must be <= rate_max");
  std::vector<SweepRow> rows(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    rows[k].rate = (k + 1 == steps && steps > 1)
                       ? rate_max
                       : rate_min + (rate_max - rate_min) * static_cast<double>(k) /
                                        static_cast<double>(steps > 1 ? steps - 1 : 1);
  }
  std::vector<std::exception_ptr> failures(steps);
  const auto n = static_cast<std::ptrdiff_t>(steps);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    SweepRow& row = rows[static_cast<std::size_t>(k)];
    try {
      const SaddleCertificate c = solve_saddle(w, RatePoint(row.rate), tol).certificate;
      row.epsilon = c.epsilon;
      row.iterations = c.iterations;
      row.gap = c.gap;
      row.status = c.status;
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "rate,epsilon,iterations,gap,status\n";
  for (const SweepRow& r : rows) {
    s += io::format_number(r.rate) + ',' + io::format_number(r.epsilon) + ',' +
         std::to_string(r.iterations) + ',' + io::format_number(r.gap) + ',' + to_string(r.status) + '\n';
  }
  return s;
}

int cmd_beta(const std::string& file_p, const std::string& file_q, double alpha, const Flags& flags,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<double> p = io::load_distribution(file_p);
    const std::vector<double> q = io::load_distribution(file_q);
    const BetaResult np = beta_np(p, q, alpha, flags.tol.tol_eq);
    const VariationalBeta var = beta_variational(p, q, alpha, flags.tol.tol_eq);
    print_field(out, "beta_np", np.beta);
    print_field(out, "beta_variational", var.beta);
    print_field(out, "lambda_star", var.lambda_star);
    out << "lambda_interval " << io::format_number(np.lambda_interval.lo) << ' '
        << io::format_number(np.lambda_interval.hi) << '\n';
    const double diff = std::abs(np.beta - var.beta);
    if (diff > flags.tol.tol_eq) {
      err << "mismatch: |beta_np - beta_variational| = " << io::format_number(diff) << '\n';
      return static_cast<int>(kMismatch);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_converse(const std::string& channel_file, double rate, const Flags& flags, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const Channel w = io::load_channel(channel_file);
    const ChannelSolveResult res = solve_saddle(w, RatePoint(to_nats(rate, flags)), flags.tol);
    const SaddleCertificate& c = res.certificate;
    print_field(out, "epsilon", c.epsilon);
    print_field(out, "gap", c.gap);
    out << "iterations " << c.iterations << '\n';
    const int code = report_status(out, c.status);
    if (!flags.dump_certificate.empty()) {
      write_to(flags.dump_certificate, out, [&](std::ostream& f) {
        io::write_block(f, "Q_X*", c.qx_star.values());
        io::write_block(f, "z*", c.z_star.values());
      });
    }
    return code;
  });
}

int cmd_converse_dmc(const std::string& channel_file, std::size_t n, double rate_total,
                     const Flags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Channel w = io::load_channel(channel_file);
    const types::DmcSolveResult res =
        types::solve_saddle_dmc(w, n, RatePoint(to_nats(rate_total, flags)), flags.tol);
    const types::DmcCertificate& c = res.certificate;
    print_field(out, "epsilon", c.epsilon);
    out << "n " << c.n << '\n'
        << "input_types " << c.num_input_types << '\n'
        << "output_types " << c.num_output_types << '\n'
        << "joint_types " << c.num_joint_types << '\n';
    print_field(out, "gap", c.gap);
    out << "iterations " << c.iterations << '\n';
    const int code = report_status(out, c.status);
    if (!flags.dump_certificate.empty()) {
      write_to(flags.dump_certificate, out, [&](std::ostream& f) {
        io::write_block(f, "lambda_T", c.weights.lambda_t);
        io::write_block(f, "z_T", c.weights.z_t);
      });
    }
    return code;
  });
}

int cmd_sweep(const std::string& channel_file, double rate_min, double rate_max, std::size_t steps,
              const std::string& out_csv, const Flags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Channel w = io::load_channel(channel_file);
    const std::vector<SweepRow> rows =
        sweep(w, to_nats(rate_min, flags), to_nats(rate_max, flags), steps, flags.tol);
    const std::string csv = sweep_csv(rows);
    write_to(out_csv, out, [&](std::ostream& f) { f << csv; });

    int code = kOk;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k > 0 && rows[k].epsilon < rows[k - 1].epsilon - flags.tol.tol_gap) {
        err << "warning: epsilon decreases between rates " << io::format_number(rows[k - 1].rate)
            << " and " << io::format_number(rows[k].rate) << '\n';
      }
      if (rows[k].status != SolveStatus::Converged) code = kLowerBoundOnly;
    }
    return code;
  });
}

int cmd_verify(std::size_t count, const Flags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    verify::Options opts;
    opts.seed = flags.seed;
    opts.count = count;
    opts.tol = flags.tol;
    opts.inject_fault = flags.inject_fault;
    const std::vector<verify::PropertyResult> results = verify::run(opts);
    std::size_t failed = 0;
    for (const auto& r : results) {
      if (r.ok()) {
        out << "PASS " << r.name << " (" << r.checked << ")\n";
      } else {
        ++failed;
        out << "FAIL " << r.name << " (" << r.failed << "/" << r.checked << ")\n"
            << "  reproduce: " << r.reproduction << '\n';
      }
    }
    out << "verify: " << results.size() - failed << "/" << results.size()
        << " properties passed, seed " << flags.seed << ", count " << count << '\n';
    return static_cast<int>(failed == 0 ? kOk : kFailure);
  });
}

}  // namespace mmc::cli
