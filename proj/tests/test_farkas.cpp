#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmc/farkas.hpp"

using namespace mmc;

namespace {

FarkasSystem bsc_system() {
  FarkasSystem s;
  s.b = {1.0, 1.0};
  s.a = {{1.0, 0.0}, {0.0, 1.0}};
  s.alpha = {0.4, 0.4};
  return s;
}

FarkasSystem blocked_system() {
  FarkasSystem s;
  s.b = {1.0, 0.0};
  s.a = {{1.0, 0.0}};
  s.alpha = {0.3};
  return s;
}

double lp_optimum(const FarkasSystem& sys, lp::Status& status) {
  const lp::Solution s = lp::solve(build_perturbation_lp(sys));
  status = s.status;
  return s.objective_value;
}

}  // namespace

TEST(Eta, MatchesDirectSum) {
  const FarkasSystem s = bsc_system();
  EXPECT_DOUBLE_EQ(s.eta({0.0, 0.0}), 0.0);
  EXPECT_NEAR(s.eta({0.5, -0.5}), 0.2, 1e-15);
  EXPECT_NEAR(s.eta({-0.5, 0.5}), 0.2, 1e-15);
  EXPECT_NEAR(blocked_system().eta({-1.0, 1.0}), -0.7, 1e-15);
}

TEST(PerturbationLp, Examples) {
  lp::Status st{};
  FarkasSystem empty;
  empty.b = {0.0, 0.0};
  EXPECT_NEAR(lp_optimum(empty, st), 0.0, 1e-15);
  EXPECT_EQ(st, lp::Status::Optimal);

  EXPECT_NEAR(lp_optimum(bsc_system(), st), 0.0, 1e-15);
  EXPECT_EQ(st, lp::Status::Optimal);

  lp_optimum(blocked_system(), st);
  EXPECT_EQ(st, lp::Status::Unbounded);
}

TEST(FarkasCertificate, Examples) {
  FarkasSystem s;
  s.b = {1.0, 0.0, 1.0};
  s.a = {{1.0, 0.0, 1.0}};
  s.alpha = {1.0};
  const auto c = farkas_certificate(s);
  ASSERT_TRUE(c);
  EXPECT_LE(c->residual(s), 1e-12);
  EXPECT_NEAR(c->lambda[0], 1.0, 1e-12);
  EXPECT_NEAR(c->tau, 0.0, 1e-12);

  const FarkasSystem b = bsc_system();
  const auto cb = farkas_certificate(b);
  ASSERT_TRUE(cb);
  EXPECT_LE(cb->residual(b), 1e-12);
  EXPECT_TRUE(cb->within_caps(b, 1e-12));
  EXPECT_NEAR(cb->lambda[0], cb->lambda[1], 1e-12);
  EXPECT_NEAR(cb->tau, 1.0 - cb->lambda[0], 1e-12);

  EXPECT_FALSE(farkas_certificate(blocked_system()));
}

TEST(MinimizeEta, DirectionOrCertificate) {
  const auto a = minimize_eta(bsc_system());
  ASSERT_TRUE(std::holds_alternative<FarkasCertificate>(a));
  const auto b = minimize_eta(blocked_system());
  ASSERT_TRUE(std::holds_alternative<std::vector<double>>(b));
  const auto& mu = std::get<std::vector<double>>(b);
  EXPECT_NEAR(mu[0] + mu[1], 0.0, 1e-12);
  EXPECT_LT(blocked_system().eta(mu), 0.0);
}

TEST(FarkasProperties, RandomSystems) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int certs = 0;
  int directions = 0;
  for (int k = 0; k < 500; ++k) {
    FarkasSystem s;
    const std::size_t d = 2 + k % 4;
    const std::size_t m = k % 5;
    s.b.resize(d);
    for (double& v : s.b) v = std::round(4 * (u(rng) + 1)) / 8;
    s.a.assign(m, std::vector<double>(d));
    for (auto& a : s.a)
      for (double& v : a) v = k % 2 ? static_cast<double>(rng() % 2) : std::round(4 * (u(rng) + 1)) / 8;
    s.alpha.resize(m);
    for (double& v : s.alpha) v = std::round(4 * (u(rng) + 1)) / 8;

    // The LP optimum is a lower bound on sampled eta; both are 0 with a certificate.
    double sampled = 0.0;
    for (int j = 0; j < 10000; ++j) {
      std::vector<double> mu(d);
      double mean = 0.0;
      for (double& v : mu) mean += (v = u(rng)) / static_cast<double>(d);
      double norm = 0.0;
      for (double& v : mu) norm = std::max(norm, std::abs(v -= mean));
      for (double& v : mu) v /= norm;
      sampled = std::min(sampled, s.eta(mu));
    }
    const lp::Solution sol = lp::solve(build_perturbation_lp(s));
    const auto cert = farkas_certificate(s);
    if (sol.status == lp::Status::Optimal) {
      EXPECT_LE(sol.objective_value, sampled + 1e-10);
      EXPECT_NEAR(sol.objective_value, 0.0, 1e-10);
      ASSERT_TRUE(cert) << "case " << k;
      EXPECT_LE(cert->residual(s), 1e-10);
      EXPECT_TRUE(cert->within_caps(s, 1e-10));
      EXPECT_GE(sampled, -1e-10);
      ++certs;
    } else {
      ASSERT_EQ(sol.status, lp::Status::Unbounded);
      EXPECT_FALSE(cert);
      const auto out = minimize_eta(s);
      ASSERT_TRUE(std::holds_alternative<std::vector<double>>(out)) << "case " << k;
      EXPECT_LT(s.eta(std::get<std::vector<double>>(out)), -1e-10);
      ++directions;
    }
  }
  EXPECT_GT(certs, 50);
  EXPECT_GT(directions, 50);
}

TEST(FarkasProperties, Deterministic) {
  const FarkasSystem s = bsc_system();
  const auto a = farkas_certificate(s);
  const auto b = farkas_certificate(s);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->lambda, b->lambda);
  EXPECT_EQ(a->tau, b->tau);
}
