#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmc/gamma.hpp"
#include "mmc/hypothesis.hpp"
#include "mmc/oracle.hpp"
#include "mmc/verify.hpp"

using namespace mmc;

namespace {

const RatePoint kLn2(std::log(2.0));
const Channel kZ = make_channel({{1.0, 0.0}, {0.5, 0.5}});
const ProbVector kUniform = ProbVector::uniform(2);

std::vector<double> random_z(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> z(n);
  for (double& v : z) v = u(rng);
  return z;
}

}  // namespace

TEST(GammaEval, Examples) {
  const Channel w = bsc(0.3);
  const ProbVector q = ProbVector::from({0.2, 0.8});
  EXPECT_DOUBLE_EQ(gamma_eval(q, ZVector::zeros(2), w, kLn2), 0.0);
  const RatePoint r(0.4);
  EXPECT_NEAR(gamma_eval(q, ZVector({1.0, 1.0}), w, r), 1.0 - std::exp(-0.4) * 2, 1e-15);
  EXPECT_NEAR(gamma_eval(kUniform, ZVector({0.7, 0.7}), w, kLn2), 0.3, 1e-15);
}

TEST(OptimalZ, Examples) {
  const ZVector a = optimal_z(kUniform, bsc(0.3), kLn2);
  EXPECT_NEAR(a[0], 0.7, 1e-15);
  EXPECT_NEAR(a[1], 0.7, 1e-15);
  const ZVector b = optimal_z(kUniform, identity_channel(2), kLn2);
  EXPECT_EQ(b.vec(), (std::vector<double>{1.0, 1.0}));
  const ZVector c = optimal_z(kUniform, kZ, kLn2);
  EXPECT_NEAR(c[0], 1.0, 1e-15);
  EXPECT_NEAR(c[1], 0.5, 1e-15);
}

TEST(MaxOverZ, Examples) {
  const MaxOverZ a = max_over_z(kUniform, bsc(0.3), kLn2);
  EXPECT_NEAR(a.value, 0.3, 1e-15);
  EXPECT_NEAR(max_over_z(kUniform, identity_channel(2), kLn2).value, 0.0, 1e-15);
  const MaxOverZ c = max_over_z(ProbVector::from({0.3, 0.7}), kZ, RatePoint(0.0));
  EXPECT_NEAR(c.value, 0.0, 1e-15);
  // z = 0 is among the maximizers.
  EXPECT_EQ(gamma_eval(ProbVector::from({0.3, 0.7}), ZVector::zeros(2), kZ, RatePoint(0.0)), 0.0);
}

TEST(ScoreVector, Examples) {
  const ScoreVector a = score_vector(ZVector::zeros(2), bsc(0.3), kLn2);
  EXPECT_EQ(a.scores(), (std::vector<double>{0.0, 0.0}));
  const ScoreVector b = score_vector(ZVector({0.7, 0.7}), bsc(0.3), kLn2);
  EXPECT_NEAR(b.score(0), 0.3, 1e-15);
  EXPECT_NEAR(b.score(1), 0.3, 1e-15);
  const ScoreVector c = score_vector(ZVector({1.0, 0.5}), kZ, kLn2);
  EXPECT_NEAR(c.rate_term, 0.75, 1e-15);
  EXPECT_NEAR(c.score(0), 0.25, 1e-15);
  EXPECT_NEAR(c.score(1), 0.25, 1e-15);
}

TEST(RecoverQy, Examples) {
  const RecoveredQy a = recover_qy(ZVector({0.7, 0.7}));
  EXPECT_NEAR(a.lambda, 1.4, 1e-15);
  EXPECT_NEAR(a.qy[0], 0.5, 1e-15);
  const RecoveredQy b = recover_qy(ZVector({1.0, 0.5}));
  EXPECT_NEAR(b.lambda, 1.5, 1e-15);
  EXPECT_NEAR(b.qy[0], 2.0 / 3.0, 1e-15);
  try {
    recover_qy(ZVector::zeros(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroZ);
  }
}

TEST(CheckSaddle, Examples) {
  const SaddleReport a = check_saddle(kUniform, ZVector({0.7, 0.7}), bsc(0.3), kLn2, 1e-12);
  EXPECT_TRUE(a.ok());
  EXPECT_NEAR(a.duality_gap, 0.0, 1e-15);
  const SaddleReport b = check_saddle(kUniform, ZVector({1.0, 0.5}), kZ, kLn2, 1e-12);
  EXPECT_TRUE(b.ok());
  EXPECT_NEAR(b.duality_gap, 0.0, 1e-15);

  const ProbVector point = ProbVector::point_mass(2, 0);
  const ZVector z = optimal_z(point, bsc(0.3), kLn2);
  const SaddleReport c = check_saddle(point, z, bsc(0.3), kLn2, 1e-12);
  EXPECT_TRUE(c.support_scores_ok);
  EXPECT_GT(c.duality_gap, 1e-3);
  EXPECT_GT(max_over_z(point, bsc(0.3), kLn2).value, oracle::maxmin_lp(bsc(0.3), kLn2).epsilon);
}

TEST(GammaProperties, AffineConcaveMaximizer) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::size_t nx = 2 + k % 4;
    const std::size_t ny = 2 + k % 5;
    const Channel w = verify::random_channel(rng, nx, ny, k % 2 == 1);
    const RatePoint r(u(rng) * std::log(static_cast<double>(nx)));
    const ProbVector q1 = ProbVector::from(verify::random_distribution(rng, nx, k % 4 == 1));
    const ProbVector q2 = ProbVector::from(verify::random_distribution(rng, nx));
    const ZVector z1(random_z(rng, ny));
    const ZVector z2(random_z(rng, ny));
    const double a = u(rng);

    std::vector<double> mix(nx);
    for (std::size_t x = 0; x < nx; ++x) mix[x] = a * q1[x] + (1 - a) * q2[x];
    EXPECT_NEAR(gamma_eval(ProbVector::from(mix), z1, w, r),
                a * gamma_eval(q1, z1, w, r) + (1 - a) * gamma_eval(q2, z1, w, r), 1e-14);

    std::vector<double> zm(ny);
    for (std::size_t y = 0; y < ny; ++y) zm[y] = 0.5 * (z1[y] + z2[y]);
    EXPECT_GE(gamma_eval(q1, ZVector(zm), w, r),
              0.5 * (gamma_eval(q1, z1, w, r) + gamma_eval(q1, z2, w, r)) - 1e-10);

    const MaxOverZ best = max_over_z(q1, w, r);
    EXPECT_NEAR(best.value, gamma_eval(q1, ZVector(best.z), w, r), 1e-15);
    for (int j = 0; j < 1000; ++j) {
      ASSERT_GE(best.value, gamma_eval(q1, ZVector(random_z(rng, ny)), w, r) - 1e-10);
    }
    // Any z satisfying the optimality condition gives the same value.
    std::vector<double> zi(ny);
    for (std::size_t y = 0; y < ny; ++y) {
      const ZInterval iv = optimal_z_interval(q1, w, r, y);
      ASSERT_LE(iv.lo, iv.hi);
      zi[y] = iv.lo + u(rng) * (iv.hi - iv.lo);
    }
    EXPECT_NEAR(gamma_eval(q1, ZVector(zi), w, r), best.value, 1e-10);
    EXPECT_TRUE(check_saddle(q1, ZVector(best.z), w, r, 1e-10).z_condition_ok);

    // Weak duality.
    EXPECT_LE(score_vector(z1, w, r).min_score(), best.value + 1e-10);
  }
}

TEST(GammaProperties, BetaBridge) {
  // max_z gamma equals the max over Q_Y of beta_{1-e^{-R}}(Q_X x Q_Y, Q_X W).
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const Channel w = verify::random_channel(rng, 2, 2);
    const ProbVector qx = ProbVector::from(verify::random_distribution(rng, 2));
    const RatePoint r(0.1 + 0.5 * k / 10.0);
    const double alpha = 1.0 - r.threshold();
    double best = -1.0;
    for (int g = 0; g <= 20000; ++g) {
      const double t = g / 20000.0;
      std::vector<double> p(4);
      std::vector<double> q(4);
      for (std::size_t x = 0; x < 2; ++x) {
        p[x * 2] = qx[x] * t;
        p[x * 2 + 1] = qx[x] * (1 - t);
        q[x * 2] = qx[x] * w(x, 0);
        q[x * 2 + 1] = qx[x] * w(x, 1);
      }
      best = std::max(best, beta_np(p, q, alpha).beta);
    }
    EXPECT_NEAR(max_over_z(qx, w, r).value, best, 1e-4) << "case " << k;
  }
}
