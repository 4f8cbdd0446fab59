#include "mmc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mmc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonStochasticRow: return "NonStochasticRow";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ZeroZ: return "ZeroZ";
    case ErrorKind::InfeasibleLocalLP: return "InfeasibleLocalLP";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::ZeroStep: return "ZeroStep";
    case ErrorKind::NoDecomposition: return "NoDecomposition";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

void TolerancePolicy::validate() const {
  if (!(tol_eq > 0.0) || !(tol_gap > 0.0) || max_iter < 1) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive and max_iter >= 1");
  }
}

ProbVector ProbVector::from(std::vector<double> p, double tol) {
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, "empty distribution");
  for (double& v : p) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite probability");
    if (v < 0.0) {
      if (v < -tol) throw Error(ErrorKind::NegativeEntry, "negative probability " + std::to_string(v));
      v = 0.0;
    }
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > tol) {
    throw Error(ErrorKind::NonStochasticRow, "distribution sums to " + std::to_string(total));
  }
  for (double& v : p) v /= total;
  return ProbVector(std::move(p));
}

ProbVector ProbVector::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty distribution");
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw Error(ErrorKind::InvalidArgument, "point mass index out of range");
  std::vector<double> p(n, 0.0);
  p[at] = 1.0;
  return ProbVector(std::move(p));
}

ZVector::ZVector(std::vector<double> z, double tol) : z_(std::move(z)) {
  for (double& v : z_) {
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
      throw Error(ErrorKind::InvalidArgument, "z entry outside [0,1]: " + std::to_string(v));
    }
    v = std::clamp(v, 0.0, 1.0);
  }
}

double ZVector::sum() const { return std::accumulate(z_.begin(), z_.end(), 0.0); }

RatePoint::RatePoint(double rate_nats) : rate_(rate_nats), threshold_(std::exp(-rate_nats)) {
  if (!std::isfinite(rate_nats) || rate_nats < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "rate must be finite and >= 0");
  }
}

RatePoint RatePoint::from_bits(double rate_bits) { return RatePoint(rate_bits * std::log(2.0)); }

Channel make_channel(const std::vector<std::vector<double>>& rows, double tol) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorKind::DimensionMismatch, "channel needs at least one row and column");
  }
  const std::size_t nx = rows.size();
  const std::size_t ny = rows.front().size();
  std::vector<double> w;
  w.reserve(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    if (rows[x].size() != ny) {
      throw Error(ErrorKind::DimensionMismatch, "row " + std::to_string(x) + " has wrong length");
    }
    double total = 0.0;
    for (double v : rows[x]) {
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorKind::NegativeEntry,
                    "row " + std::to_string(x) + " has entry " + std::to_string(v));
      }
      total += v;
    }
    if (std::abs(total - 1.0) > tol) {
      throw Error(ErrorKind::NonStochasticRow,
                  "row " + std::to_string(x) + " sums to " + std::to_string(total));
    }
    for (double v : rows[x]) w.push_back(total == 1.0 ? v : v / total);
  }
  return Channel(nx, ny, std::move(w));
}

namespace {

std::size_t checked_pow(std::size_t base, std::size_t n) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (r > kMaxProductEntries / base) {
      throw Error(ErrorKind::TooLarge, "product alphabet exceeds guard");
    }
    r *= base;
  }
  return r;
}

}  // namespace

Channel product_channel(const Channel& w, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "blocklength must be >= 1");
  const std::size_t nx = checked_pow(w.nx(), n);
  const std::size_t ny = checked_pow(w.ny(), n);
  if (nx > kMaxProductEntries / ny) throw Error(ErrorKind::TooLarge, "product channel exceeds guard");

  // Build W^{k+1} from W^k: new index = old * base + letter keeps the first
  // letter most significant.
  std::vector<double> cur(w.data().begin(), w.data().end());
  std::size_t cx = w.nx();
  std::size_t cy = w.ny();
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t nxx = cx * w.nx();
    const std::size_t nyy = cy * w.ny();
    std::vector<double> next(nxx * nyy);
    for (std::size_t xo = 0; xo < cx; ++xo)
      for (std::size_t a = 0; a < w.nx(); ++a)
        for (std::size_t yo = 0; yo < cy; ++yo)
          for (std::size_t b = 0; b < w.ny(); ++b)
            next[(xo * w.nx() + a) * nyy + yo * w.ny() + b] = cur[xo * cy + yo] * w(a, b);
    cur = std::move(next);
    cx = nxx;
    cy = nyy;
  }
  return Channel(cx, cy, std::move(cur));
}

Channel bsc(double crossover) {
  return make_channel({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

Channel identity_channel(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return make_channel(rows);
}

}  // namespace mmc
