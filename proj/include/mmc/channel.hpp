#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mmc/error.hpp"

namespace mmc {

inline constexpr double kDefaultTolEq = 1e-10;
inline constexpr double kDefaultTolGap = 1e-8;

struct TolerancePolicy {
  double tol_eq = kDefaultTolEq;
  double tol_gap = kDefaultTolGap;
  std::size_t max_iter = 10000;

  // Throws InvalidArgument unless every field is strictly positive.
  void validate() const;
};

/// Probability distribution over a finite index set.
class ProbVector {
 public:
  ProbVector() = default;

  /// Validates entries >= 0 and sum == 1 within tol. Entries within tol of
  /// zero from below are clamped; the vector is then renormalized.
  static ProbVector from(std::vector<double> p, double tol = kDefaultTolEq);
  static ProbVector uniform(std::size_t n);
  static ProbVector point_mass(std::size_t n, std::size_t at);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }
  const std::vector<double>& vec() const noexcept { return p_; }

 private:
  explicit ProbVector(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

/// Auxiliary variable z of the gamma functional, entries in [0, 1].
class ZVector {
 public:
  ZVector() = default;
  explicit ZVector(std::vector<double> z, double tol = kDefaultTolEq);
  static ZVector zeros(std::size_t n) { return ZVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return z_.size(); }
  double operator[](std::size_t i) const { return z_[i]; }
  std::span<const double> values() const noexcept { return z_; }
  const std::vector<double>& vec() const noexcept { return z_; }
  double sum() const;

 private:
  std::vector<double> z_;
};

/// Rate in nats with its cached threshold exp(-rate).
class RatePoint {
 public:
  explicit RatePoint(double rate_nats);
  static RatePoint from_bits(double rate_bits);

  double rate() const noexcept { return rate_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double rate_;
  double threshold_;
};

/// Row-stochastic matrix W(y|x), row-major with nx rows and ny columns.
class Channel {
 public:
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double operator()(std::size_t x, std::size_t y) const { return w_[x * ny_ + y]; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(w_).subspan(x * ny_, ny_);
  }
  std::span<const double> data() const noexcept { return w_; }

  bool operator==(const Channel&) const = default;

 private:
  friend Channel make_channel(const std::vector<std::vector<double>>&, double);
  friend Channel product_channel(const Channel&, std::size_t);
  Channel(std::size_t nx, std::size_t ny, std::vector<double> w)
      : nx_(nx), ny_(ny), w_(std::move(w)) {}

  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> w_;
};

/// Builds a validated channel. Rows whose sum is within tol of 1 are
/// renormalized; anything further off is rejected with NonStochasticRow.
Channel make_channel(const std::vector<std::vector<double>>& rows, double tol = kDefaultTolEq);

inline constexpr std::size_t kMaxProductEntries = 1'000'000;

/// Memoryless extension W^n over lexicographically ordered sequences, first
/// letter most significant. Throws TooLarge beyond kMaxProductEntries.
Channel product_channel(const Channel& w, std::size_t n);

Channel bsc(double crossover);
Channel identity_channel(std::size_t n);

}  // namespace mmc
