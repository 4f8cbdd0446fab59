#include "mmc/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mmc/gamma.hpp"
#include "mmc/simplex.hpp"

namespace mmc::oracle {

double beta_lp_oracle(std::span<const double> p, std::span<const double> q, double alpha) {
  if (p.size() != q.size()) throw Error(ErrorKind::DimensionMismatch, "P and Q differ in size");
  const std::size_t n = p.size();
  lp::Problem prob(n);
  for (std::size_t k = 0; k < n; ++k) {
    prob.objective[k] = q[k];
    prob.set_bounds(k, 0.0, 1.0);
  }
  prob.add(std::vector<double>(p.begin(), p.end()), lp::Relation::GreaterEq, alpha);
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NumericalFailure,
                std::string("beta LP returned ") + lp::to_string(sol.status));
  }
  return sol.objective_value;
}

MaxMinValue maxmin_lp(const Channel& w, const RatePoint& r) {
  const std::size_t nx = w.nx();
  const std::size_t ny = w.ny();
  if (nx * ny > kMaxMinEntries) {
    throw Error(ErrorKind::TooLarge, "channel too large for the max-min LP");
  }
  const double theta = r.threshold();
  // Layout: m (nx*ny), z (ny), t.
  const std::size_t zo = nx * ny;
  const std::size_t to = zo + ny;
  lp::Problem prob(to + 1);
  prob.objective[to] = -1.0;
  prob.set_free(to);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) prob.set_bounds(x * ny + y, 0.0, w(x, y));
  for (std::size_t y = 0; y < ny; ++y) prob.set_bounds(zo + y, 0.0, 1.0);

  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      std::vector<double> row(to + 1, 0.0);
      row[x * ny + y] = 1.0;
      row[zo + y] = -1.0;
      prob.add(std::move(row), lp::Relation::LessEq, 0.0);
    }
    std::vector<double> row(to + 1, 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
      row[x * ny + y] = -1.0;
      row[zo + y] = theta;
    }
    row[to] = 1.0;
    prob.add(std::move(row), lp::Relation::LessEq, 0.0);
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NumericalFailure,
                std::string("max-min LP returned ") + lp::to_string(sol.status));
  }
  MaxMinValue out;
  out.epsilon = sol.primal[to];
  out.z.assign(sol.primal.begin() + static_cast<long>(zo), sol.primal.begin() + static_cast<long>(to));
  return out;
}

double grid_saddle_check(const Channel& w, const RatePoint& r, std::size_t grid_steps) {
  if (w.nx() > 3) throw Error(ErrorKind::InvalidArgument, "grid check needs nx <= 3");
  if (grid_steps == 0) throw Error(ErrorKind::InvalidArgument, "grid_steps must be >= 1");
  const auto steps = static_cast<double>(grid_steps);
  double best = std::numeric_limits<double>::infinity();
  auto visit = [&](std::vector<double> q) {
    best = std::min(best, max_over_z(ProbVector::from(std::move(q)), w, r).value);
  };
  if (w.nx() == 1) {
    visit({1.0});
  } else if (w.nx() == 2) {
    for (std::size_t a = 0; a <= grid_steps; ++a) visit({a / steps, 1.0 - a / steps});
  } else {
    for (std::size_t a = 0; a <= grid_steps; ++a)
      for (std::size_t b = 0; a + b <= grid_steps; ++b)
        visit({a / steps, b / steps, (grid_steps - a - b) / steps});
  }
  return best;
}

}  // namespace mmc::oracle
