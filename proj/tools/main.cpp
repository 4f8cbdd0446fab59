// mmc: minimax converse bounds for channel codes.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mmc/commands.hpp"

namespace {

void add_solver_flags(CLI::App* cmd, mmc::cli::Flags& f) {
  cmd->add_option("--tol-eq", f.tol.tol_eq, "equality tolerance")->capture_default_str();
  cmd->add_option("--tol-gap", f.tol.tol_gap, "duality gap accepted as converged")->capture_default_str();
  cmd->add_option("--max-iter", f.tol.max_iter, "outer iteration cap")->capture_default_str();
  cmd->add_flag("--bits", f.bits, "rates are given in bits instead of nats");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax converse bounds on the error probability of channel codes"};
  app.require_subcommand(1);

  mmc::cli::Flags flags;
  std::string file_a;
  std::string file_b;
  std::string out_csv = "-";
  double alpha = 0.0;
  double rate = 0.0;
  double rate_max = 0.0;
  std::size_t n = 1;
  std::size_t steps = 11;
  std::size_t count = 50;
  int code = mmc::cli::kOk;

  auto* beta = app.add_subcommand("beta", "beta_alpha(P, Q) from two distribution files");
  beta->add_option("p_file", file_a)->required();
  beta->add_option("q_file", file_b)->required();
  beta->add_option("alpha", alpha)->required();
  beta->add_option("--tol-eq", flags.tol.tol_eq, "equality tolerance")->capture_default_str();
  beta->callback([&] { code = mmc::cli::cmd_beta(file_a, file_b, alpha, flags, std::cout, std::cerr); });

  auto* conv = app.add_subcommand("converse", "saddle-point converse for one channel use");
  conv->add_option("channel_file", file_a)->required();
  conv->add_option("rate", rate, "log M, nats unless --bits")->required();
  add_solver_flags(conv, flags);
  conv->add_option("--dump-certificate", flags.dump_certificate, "write Q_X* and z* here (- for stdout)");
  conv->callback([&] { code = mmc::cli::cmd_converse(file_a, rate, flags, std::cout, std::cerr); });

  auto* dmc = app.add_subcommand("converse-dmc", "converse for n uses of a memoryless channel");
  dmc->add_option("channel_file", file_a)->required();
  dmc->add_option("n", n, "blocklength")->required()->check(CLI::PositiveNumber);
  dmc->add_option("rate", rate, "total log M, nats unless --bits")->required();
  add_solver_flags(dmc, flags);
  dmc->add_option("--dump-certificate", flags.dump_certificate, "write lambda_T and z_T here (- for stdout)");
  dmc->callback([&] { code = mmc::cli::cmd_converse_dmc(file_a, n, rate, flags, std::cout, std::cerr); });

  auto* sweep = app.add_subcommand("sweep", "epsilon over a rate grid as CSV");
  sweep->add_option("channel_file", file_a)->required();
  sweep->add_option("rate_min", rate)->required();
  sweep->add_option("rate_max", rate_max)->required();
  sweep->add_option("steps", steps)->required()->check(CLI::PositiveNumber);
  sweep->add_option("-o,--output", out_csv, "CSV path (- for stdout)")->capture_default_str();
  add_solver_flags(sweep, flags);
  sweep->callback([&] {
    code = mmc::cli::cmd_sweep(file_a, rate, rate_max, steps, out_csv, flags, std::cout, std::cerr);
  });

  auto* ver = app.add_subcommand("verify", "randomized invariant suite");
  ver->add_option("--count", count, "random instances")->capture_default_str();
  ver->add_option("--seed", flags.seed, "base seed")->capture_default_str();
  add_solver_flags(ver, flags);
  ver->add_flag("--inject-fault", flags.inject_fault)->group("");
  ver->callback([&] { code = mmc::cli::cmd_verify(count, flags, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mmc::cli::kInputError;
  }
  return code;
}
