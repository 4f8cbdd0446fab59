#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmc/channel.hpp"
#include "mmc/saddle.hpp"

// Subcommands of the `mmc` tool as library calls. Each returns the process
// exit code and writes its report to `out`, diagnostics to `err`.
namespace mmc::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,         // verify found a failing property, or an internal error
  kInputError = 2,      // unreadable or malformed input, bad arguments, unwritable output
  kMismatch = 3,        // beta computations disagree
  kLowerBoundOnly = 4,  // solver stopped with gap > tol_gap
  kTooLarge = 5,
};

struct Flags {
  TolerancePolicy tol;
  bool bits = false;             // rates on the command line are in bits
  std::string dump_certificate;  // path for the certificate block, "-" for stdout
  std::uint64_t seed = 1;
  bool inject_fault = false;     // test-only, see verify::Options
};

struct SweepRow {
  double rate = 0.0;  // nats
  double epsilon = 0.0;
  std::size_t iterations = 0;
  double gap = 0.0;
  SolveStatus status = SolveStatus::Converged;
};

/// steps rates from rate_min to rate_max inclusive (nats), solved
/// concurrently; rows are in ascending rate order.
std::vector<SweepRow> sweep(const Channel& w, double rate_min, double rate_max, std::size_t steps,
                            const TolerancePolicy& tol);

/// Header line plus one line per row, numbers in %.12g.
std::string sweep_csv(const std::vector<SweepRow>& rows);

int cmd_beta(const std::string& file_p, const std::string& file_q, double alpha, const Flags& flags,
             std::ostream& out, std::ostream& err);

int cmd_converse(const std::string& channel_file, double rate, const Flags& flags, std::ostream& out,
                 std::ostream& err);

int cmd_converse_dmc(const std::string& channel_file, std::size_t n, double rate_total,
                     const Flags& flags, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::string& channel_file, double rate_min, double rate_max, std::size_t steps,
              const std::string& out_csv, const Flags& flags, std::ostream& out, std::ostream& err);

int cmd_verify(std::size_t count, const Flags& flags, std::ostream& out, std::ostream& err);

}  // namespace mmc::cli
