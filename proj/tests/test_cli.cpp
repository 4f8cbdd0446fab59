#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "mmc/channel_io.hpp"
#include "mmc/commands.hpp"

namespace fs = std::filesystem;
using namespace mmc;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mmc_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    write("bsc.txt", "# BSC(0.3)\n2 2\n0.7 0.3\n0.3 0.7\n");
    write("id.txt", "2 2\n1 0\n0 1\n");
    write("p.txt", "2\n0.5 0.5\n");
    write("q.txt", "2\n0.9 0.1\n");
    write("bad.txt", "2 2\n0.7 0.3\n0.3 oops\n");
    write("big.txt", "4 4\n0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  struct Run {
    int code;
    std::string out;
  };

  // Runs the built tool; skipped when the harness did not provide its path.
  Run run(const std::string& args) const {
    const char* bin = std::getenv("MMC_CLI");
    if (!bin) return {-1, ""};
    const std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* f = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    const int st = ::pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
  }

  static double field(const std::string& out, const std::string& name) {
    std::istringstream in(out);
    std::string key;
    std::string value;
    while (in >> key) {
      std::getline(in, value);
      if (key == name) return std::stod(value);
    }
    ADD_FAILURE() << "no field " << name << " in\n" << out;
    return NAN;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Beta) {
  std::ostringstream out;
  std::ostringstream err;
  cli::Flags f;
  EXPECT_EQ(cli::cmd_beta(path("p.txt"), path("q.txt"), 0.5, f, out, err), cli::kOk);
  EXPECT_NEAR(field(out.str(), "beta_np"), 0.1, 1e-12);
  EXPECT_NEAR(field(out.str(), "beta_variational"), 0.1, 1e-12);
  EXPECT_NEAR(field(out.str(), "lambda_star"), 0.2, 1e-12);

  std::ostringstream same;
  EXPECT_EQ(cli::cmd_beta(path("q.txt"), path("q.txt"), 0.25, f, same, err), cli::kOk);
  EXPECT_NEAR(field(same.str(), "beta_np"), 0.25, 1e-12);

  std::ostringstream bad_err;
  EXPECT_EQ(cli::cmd_beta(path("bad.txt"), path("q.txt"), 0.5, f, out, bad_err), cli::kInputError);
  EXPECT_EQ(cli::cmd_beta(path("missing.txt"), path("q.txt"), 0.5, f, out, bad_err), cli::kInputError);
  EXPECT_EQ(cli::cmd_beta(path("p.txt"), path("q.txt"), 1.5, f, out, bad_err), cli::kInputError);
}

TEST_F(Cli, Converse) {
  cli::Flags f;
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_converse(path("bsc.txt"), std::log(2.0), f, out, err), cli::kOk);
  EXPECT_NEAR(field(out.str(), "epsilon"), 0.3, 1e-10);

  std::ostringstream id;
  EXPECT_EQ(cli::cmd_converse(path("id.txt"), std::log(2.0), f, id, err), cli::kOk);
  EXPECT_NEAR(field(id.str(), "epsilon"), 0.0, 1e-10);

  std::ostringstream zero;
  EXPECT_EQ(cli::cmd_converse(path("bsc.txt"), 0.0, f, zero, err), cli::kOk);
  EXPECT_EQ(field(zero.str(), "epsilon"), 0.0);

  // One bit equals ln 2 nats.
  f.bits = true;
  std::ostringstream bits;
  EXPECT_EQ(cli::cmd_converse(path("bsc.txt"), 1.0, f, bits, err), cli::kOk);
  EXPECT_NEAR(field(bits.str(), "epsilon"), 0.3, 1e-10);

  f.bits = false;
  f.dump_certificate = path("cert.txt");
  std::ostringstream dumped;
  EXPECT_EQ(cli::cmd_converse(path("bsc.txt"), std::log(2.0), f, dumped, err), cli::kOk);
  std::ifstream cert(path("cert.txt"));
  std::stringstream text;
  text << cert.rdbuf();
  EXPECT_NE(text.str().find("# Q_X*\n1 2\n0.5 0.5\n"), std::string::npos) << text.str();
  EXPECT_NE(text.str().find("# z*\n1 2\n0.7 0.7\n"), std::string::npos) << text.str();
  // The Q_X* block parses with the channel reader.
  std::istringstream block(text.str().substr(0, text.str().find("# z*")));
  EXPECT_EQ(io::parse_channel(block, "cert").nx(), 1u);

  std::ostringstream neg;
  EXPECT_EQ(cli::cmd_converse(path("bsc.txt"), -1.0, cli::Flags{}, neg, err), cli::kInputError);
}

TEST_F(Cli, ConverseIterationLimit) {
  write("w.txt",
        "4 5\n0.1 0.2 0.3 0.15 0.25\n0.3 0.1 0.1 0.4 0.1\n0.05 0.05 0.5 0.2 0.2\n0.2 0.3 0.1 0.1 0.3\n");
  cli::Flags f;
  f.tol.max_iter = 1;
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cmd_converse(path("w.txt"), 0.7, f, out, err);
  if (code == cli::kLowerBoundOnly) {
    EXPECT_NE(out.str().find("LOWER-BOUND-ONLY"), std::string::npos);
  } else {
    EXPECT_EQ(code, cli::kOk);
  }
  EXPECT_TRUE(std::isfinite(field(out.str(), "epsilon")));
}

TEST_F(Cli, ConverseDmc) {
  cli::Flags f;
  std::ostringstream one;
  std::ostringstream plain;
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_converse_dmc(path("bsc.txt"), 1, std::log(2.0), f, one, err), cli::kOk);
  cli::cmd_converse(path("bsc.txt"), std::log(2.0), f, plain, err);
  EXPECT_NEAR(field(one.str(), "epsilon"), field(plain.str(), "epsilon"), 1e-12);

  std::ostringstream two;
  EXPECT_EQ(cli::cmd_converse_dmc(path("bsc.txt"), 2, std::log(4.0), f, two, err), cli::kOk);
  std::ofstream(path("bsc2.txt")) << [] {
    std::ostringstream s;
    io::write_channel(s, product_channel(bsc(0.3), 2));
    return s.str();
  }();
  std::ostringstream expanded;
  EXPECT_EQ(cli::cmd_converse(path("bsc2.txt"), std::log(4.0), f, expanded, err), cli::kOk);
  EXPECT_NEAR(field(two.str(), "epsilon"), field(expanded.str(), "epsilon"), 1e-8);
  EXPECT_EQ(field(two.str(), "joint_types"), 10.0);

  std::ostringstream big;
  std::ostringstream big_err;
  EXPECT_EQ(cli::cmd_converse_dmc(path("big.txt"), 40, 1.0, f, big, big_err), cli::kTooLarge);
  EXPECT_NE(big_err.str().find("TooLarge"), std::string::npos);
}

TEST_F(Cli, Sweep) {
  cli::Flags f;
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_sweep(path("bsc.txt"), 0.0, std::log(2.0), 3, path("a.csv"), f, out, err), cli::kOk);
  std::ifstream in(path("a.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "rate,epsilon,iterations,gap,status");
  std::vector<double> eps;
  std::string line;
  while (std::getline(in, line)) eps.push_back(std::stod(line.substr(line.find(',') + 1)));
  ASSERT_EQ(eps.size(), 3u);
  EXPECT_EQ(eps.front(), 0.0);
  EXPECT_NEAR(eps.back(), 0.3, 1e-8);
  EXPECT_LE(eps[0], eps[1]);
  EXPECT_LE(eps[1], eps[2]);

  const auto rows = cli::sweep(bsc(0.3), 0.2, 0.5, 1, TolerancePolicy{});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].rate, 0.2);

  EXPECT_EQ(cli::cmd_sweep(path("bsc.txt"), 0.0, 1.0, 3, path("no/such/dir/x.csv"), f, out, err),
            cli::kInputError);
  EXPECT_EQ(cli::cmd_sweep(path("bsc.txt"), 1.0, 0.0, 3, "-", f, out, err), cli::kInputError);
}

TEST_F(Cli, SweepIsByteIdentical) {
  const auto a = cli::sweep_csv(cli::sweep(bsc(0.3), 0.0, std::log(2.0), 11, TolerancePolicy{}));
  const auto b = cli::sweep_csv(cli::sweep(bsc(0.3), 0.0, std::log(2.0), 11, TolerancePolicy{}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "rate,epsilon,iterations,gap,status");
}

TEST_F(Cli, Verify) {
  cli::Flags f;
  f.seed = 42;
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_verify(6, f, a, err), cli::kOk) << a.str() << err.str();
  EXPECT_EQ(cli::cmd_verify(6, f, b, err), cli::kOk);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().find("FAIL"), std::string::npos);

  f.inject_fault = true;
  std::ostringstream bad;
  EXPECT_EQ(cli::cmd_verify(2, f, bad, err), cli::kFailure);
  EXPECT_NE(bad.str().find("FAIL"), std::string::npos);
  EXPECT_NE(bad.str().find("reproduce: seed=42"), std::string::npos);
}

TEST_F(Cli, BinaryEndToEnd) {
  if (!std::getenv("MMC_CLI")) GTEST_SKIP() << "MMC_CLI not set";
  Run r = run("converse " + path("bsc.txt") + " 0.6931471805599453");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(field(r.out, "epsilon"), 0.3, 1e-10);

  r = run("beta " + path("p.txt") + " " + path("q.txt") + " 0.5");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(field(r.out, "lambda_star"), 0.2, 1e-12);

  write("badp.txt", "# P\n2\n0.5\n0.5x\n");
  r = run("beta " + path("badp.txt") + " " + path("q.txt") + " 0.5");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("badp.txt:4"), std::string::npos) << r.out;

  r = run("converse " + path("bad.txt") + " 0.5");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("bad.txt:3"), std::string::npos) << r.out;

  r = run("converse-dmc " + path("big.txt") + " 40 1");
  EXPECT_EQ(r.code, 5) << r.out;

  r = run("sweep " + path("bsc.txt") + " 0 1 3 --bits -o " + path("s1.csv"));
  EXPECT_EQ(r.code, 0) << r.out;
  r = run("sweep " + path("bsc.txt") + " 0 1 3 --bits -o " + path("s2.csv"));
  std::ifstream s1(path("s1.csv"));
  std::ifstream s2(path("s2.csv"));
  std::stringstream t1;
  std::stringstream t2;
  t1 << s1.rdbuf();
  t2 << s2.rdbuf();
  EXPECT_EQ(t1.str(), t2.str());
  EXPECT_NE(t1.str().find("\n0.69314718056,0.3,"), std::string::npos) << t1.str();

  r = run("verify --count 2 --seed 3");
  EXPECT_EQ(r.code, 0) << r.out;
  r = run("verify --count 1 --inject-fault");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("reproduce:"), std::string::npos);

  r = run("converse");
  EXPECT_EQ(r.code, 2);
  r = run("--help");
  EXPECT_EQ(r.code, 0);
}
