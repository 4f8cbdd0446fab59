#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mmc/channel.hpp"

// Brute-force references used to validate the fast paths.
namespace mmc::oracle {

/// min sum_w Q(w) t_w  s.t.  sum_w P(w) t_w >= alpha, 0 <= t <= 1.
double beta_lp_oracle(std::span<const double> p, std::span<const double> q, double alpha);

struct MaxMinValue {
  double epsilon = 0.0;
  std::vector<double> z;
};

/// Largest LP handled by maxmin_lp, in channel entries.
inline constexpr std::size_t kMaxMinEntries = 4096;

/// max_z min_x score(x) as one LP over (m, z, t):
///   t <= sum_y m_xy - e^{-R} sum_y z_y,  0 <= m_xy <= W(y|x),  m_xy <= z_y,  0 <= z <= 1.
/// Throws TooLarge beyond kMaxMinEntries.
MaxMinValue maxmin_lp(const Channel& w, const RatePoint& r);

/// min over the simplex grid {k / steps} of max_z gamma(Q_X, .). Requires nx <= 3.
double grid_saddle_check(const Channel& w, const RatePoint& r, std::size_t grid_steps);

}  // namespace mmc::oracle
