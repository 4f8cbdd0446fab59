#include "mmc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mmc::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Unbounded: return "Unbounded";
    case Status::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

void Problem::add(std::vector<double> coeffs, Relation rel, double rhs) {
  coeffs.resize(num_vars(), 0.0);
  constraints.push_back({std::move(coeffs), rel, rhs});
}

void Problem::validate() const {
  const std::size_t n = num_vars();
  if (lower.size() != n || upper.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "bound vectors must match variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw Error(ErrorKind::InvalidArgument, "non-finite cost");
    if (lower[j] > upper[j] || lower[j] == kInf || upper[j] == -kInf) {
      throw Error(ErrorKind::InvalidArgument, "empty bound range for variable " + std::to_string(j));
    }
  }
  for (const Constraint& c : constraints) {
    if (c.coeffs.size() != n) throw Error(ErrorKind::DimensionMismatch, "constraint row length");
    if (!std::isfinite(c.rhs)) throw Error(ErrorKind::InvalidArgument, "non-finite rhs");
    for (double a : c.coeffs) {
      if (!std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "non-finite coefficient");
    }
  }
}

namespace {

// How an original variable maps onto nonnegative tableau columns.
enum class VarKind { Shifted, Negated, Split };

struct VarMap {
  VarKind kind;
  std::size_t col;
  std::size_t col_neg;  // Split only
  double offset;        // lower bound (Shifted) or upper bound (Negated)
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double rhs(std::size_t r) const { return at(r, n_); }
  // Row m_ holds reduced costs; its rhs entry holds -objective.
  double& cost(std::size_t c) { return at(m_, c); }
  double cost(std::size_t c) const { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t k = 0; k <= n_; ++k) at(r, k) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k <= n_; ++k) at(i, k) -= f * at(r, k);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

// Entering column by Bland's rule (lowest index with negative reduced cost).
// The leaving row comes from a two-pass Harris ratio test: the bound on the
// step allows each basic variable to dip by harris_tol, then the largest pivot
// among rows within that bound is taken. After `bland_after` pivots the
// leaving rule reverts to plain Bland (lowest basic index among minimal
// ratios), which cannot cycle.
PhaseResult run_simplex(Tableau& t, std::size_t allowed_cols, const Options& opts,
                        std::size_t& pivots, std::size_t& unbounded_col) {
  const std::size_t bland_after = pivots + 50 * (t.rows() + t.cols());
  for (;;) {
    std::size_t enter = allowed_cols;
    for (std::size_t c = 0; c < allowed_cols; ++c) {
      if (t.cost(c) < -opts.cost_tol) {
        enter = c;
        break;
      }
    }
    if (enter == allowed_cols) return PhaseResult::Optimal;

    std::size_t leave = t.rows();
    if (pivots < bland_after) {
      double bound = kInf;
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double a = t.at(r, enter);
        if (a > opts.pivot_tol) bound = std::min(bound, (std::max(t.rhs(r), 0.0) + opts.harris_tol) / a);
      }
      double best_a = 0.0;
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double a = t.at(r, enter);
        if (a <= opts.pivot_tol || std::max(t.rhs(r), 0.0) / a > bound) continue;
        if (a > best_a || (a == best_a && t.basis()[r] < t.basis()[leave])) {
          best_a = a;
          leave = r;
        }
      }
    } else {
      double best = kInf;
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double a = t.at(r, enter);
        if (a <= opts.pivot_tol) continue;
        const double ratio = std::max(t.rhs(r), 0.0) / a;
        if (leave == t.rows() || ratio < best ||
            (ratio == best && t.basis()[r] < t.basis()[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == t.rows()) {
      unbounded_col = enter;
      return PhaseResult::Unbounded;
    }
    t.pivot(leave, enter);
    // Basic values pushed slightly negative by the Harris step sit at zero.
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (t.rhs(r) < 0.0 && t.rhs(r) > -opts.feas_tol) t.rhs(r) = 0.0;
    }
    if (++pivots > opts.max_pivots) {
      throw Error(ErrorKind::NumericalFailure, "simplex pivot limit exceeded");
    }
  }
}

}  // namespace

Solution solve(const Problem& problem, const Options& opts) {
  problem.validate();
  const std::size_t n = problem.num_vars();

  // Column layout: structural columns, then one slack per inequality row, then
  // one artificial per row.
  std::vector<VarMap> vars(n);
  std::size_t ncol = 0;
  std::vector<std::pair<std::size_t, double>> bound_rows;  // (col, upper - lower)
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = problem.lower[j];
    const double hi = problem.upper[j];
    if (std::isfinite(lo)) {
      vars[j] = {VarKind::Shifted, ncol++, 0, lo};
      if (std::isfinite(hi)) bound_rows.emplace_back(vars[j].col, hi - lo);
    } else if (std::isfinite(hi)) {
      vars[j] = {VarKind::Negated, ncol++, 0, hi};
    } else {
      vars[j] = {VarKind::Split, ncol, ncol + 1, 0.0};
      ncol += 2;
    }
  }
  const std::size_t nstruct = ncol;

  struct Row {
    std::vector<double> coeffs;  // over structural columns
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(problem.constraints.size() + bound_rows.size());
  for (const Constraint& c : problem.constraints) {
    Row row{std::vector<double>(nstruct, 0.0), c.rel, c.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coeffs[j];
      if (a == 0.0) continue;
      const VarMap& v = vars[j];
      switch (v.kind) {
        case VarKind::Shifted:
          row.coeffs[v.col] += a;
          row.rhs -= a * v.offset;
          break;
        case VarKind::Negated:
          row.coeffs[v.col] -= a;
          row.rhs -= a * v.offset;
          break;
        case VarKind::Split:
          row.coeffs[v.col] += a;
          row.coeffs[v.col_neg] -= a;
          break;
      }
    }
    rows.push_back(std::move(row));
  }
  for (const auto& [col, cap] : bound_rows) {
    Row row{std::vector<double>(nstruct, 0.0), Relation::LessEq, cap};
    row.coeffs[col] = 1.0;
    rows.push_back(std::move(row));
  }

  const std::size_t m = rows.size();
  std::size_t nslack = 0;
  for (const Row& r : rows) nslack += (r.rel != Relation::Equal) ? 1 : 0;
  const std::size_t art0 = nstruct + nslack;
  const std::size_t total = art0 + m;

  Tableau t(m, total);
  std::vector<double> row_sign(m, 1.0);
  std::size_t slack = nstruct;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& r = rows[i];
    const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
    row_sign[i] = sign;
    for (std::size_t c = 0; c < nstruct; ++c) t.at(i, c) = sign * r.coeffs[c];
    if (r.rel == Relation::LessEq) t.at(i, slack++) = sign;
    if (r.rel == Relation::GreaterEq) t.at(i, slack++) = -sign;
    t.at(i, art0 + i) = 1.0;
    t.rhs(i) = sign * r.rhs;
    t.basis()[i] = art0 + i;
  }

  Solution sol;
  std::size_t unbounded_col = 0;

  // Phase 1: minimize the sum of artificials.
  for (std::size_t c = 0; c <= total; ++c) {
    if (c >= art0 && c < total) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t.at(i, c);
    t.cost(c) = -s;
  }
  run_simplex(t, art0, opts, sol.pivots, unbounded_col);
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(rows[i].rhs));
  if (-t.cost(total) > opts.feas_tol * scale) {
    sol.status = Status::Infeasible;
    return sol;
  }
  // Drive zero-level artificials out of the basis where possible; rows with
  // no usable pivot are redundant and keep their artificial at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis()[i] < art0) continue;
    std::size_t best = art0;
    double best_abs = 1e-9;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(t.at(i, c)) > best_abs) {
        best_abs = std::abs(t.at(i, c));
        best = c;
      }
    }
    if (best < art0) {
      t.rhs(i) = 0.0;  // the artificial is at zero up to feas_tol
      t.pivot(i, best);
      ++sol.pivots;
    }
  }

  // Phase 2 costs over standard-form columns.
  std::vector<double> cstd(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const VarMap& v = vars[j];
    const double c = problem.objective[j];
    switch (v.kind) {
      case VarKind::Shifted: cstd[v.col] += c; break;
      case VarKind::Negated: cstd[v.col] -= c; break;
      case VarKind::Split:
        cstd[v.col] += c;
        cstd[v.col_neg] -= c;
        break;
    }
  }
  for (std::size_t c = 0; c <= total; ++c) t.cost(c) = (c < total) ? cstd[c] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cstd[t.basis()[i]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= total; ++c) t.cost(c) -= cb * t.at(i, c);
  }
  const PhaseResult res = run_simplex(t, art0, opts, sol.pivots, unbounded_col);

  std::vector<double> xstd(total, 0.0);
  for (std::size_t i = 0; i < m; ++i) xstd[t.basis()[i]] = t.rhs(i);

  auto to_original = [&](const std::vector<double>& s, bool direction) {
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const VarMap& v = vars[j];
      switch (v.kind) {
        case VarKind::Shifted: x[j] = (direction ? 0.0 : v.offset) + s[v.col]; break;
        case VarKind::Negated: x[j] = (direction ? 0.0 : v.offset) - s[v.col]; break;
        case VarKind::Split: x[j] = s[v.col] - s[v.col_neg]; break;
      }
    }
    return x;
  };

  sol.primal = to_original(xstd, false);
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += problem.objective[j] * sol.primal[j];

  if (res == PhaseResult::Unbounded) {
    sol.status = Status::Unbounded;
    std::vector<double> d(total, 0.0);
    d[unbounded_col] = 1.0;
    for (std::size_t i = 0; i < m; ++i) d[t.basis()[i]] -= t.at(i, unbounded_col);
    sol.ray = to_original(d, true);
    double mx = 0.0;
    for (double v : sol.ray) mx = std::max(mx, std::abs(v));
    if (mx > 0.0) {
      for (double& v : sol.ray) v /= mx;
    }
    return sol;
  }

  sol.status = Status::Optimal;
  // y'_i = c_B B^{-1} e_i is minus the reduced cost of artificial i.
  sol.dual.assign(problem.constraints.size(), 0.0);
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    sol.dual[i] = -t.cost(art0 + i) * row_sign[i];
  }
  sol.reduced_costs = problem.objective;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& a = problem.constraints[i].coeffs;
    for (std::size_t j = 0; j < n; ++j) sol.reduced_costs[j] -= a[j] * sol.dual[i];
  }
  return sol;
}

}  // namespace mmc::lp
