#include "mmc/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "mmc/kernels.hpp"

namespace mmc::types {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void compositions(std::size_t n, std::size_t k, Composition& cur, std::vector<Composition>& out) {
  if (cur.size() + 1 == k) {
    cur.push_back(static_cast<std::uint32_t>(n));
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t c = n + 1; c-- > 0;) {
    cur.push_back(static_cast<std::uint32_t>(c));
    compositions(n - c, k, cur, out);
    cur.pop_back();
  }
}

std::vector<Composition> all_compositions(std::size_t n, std::size_t k) {
  std::vector<Composition> out;
  Composition cur;
  compositions(n, k, cur, out);
  return out;
}

std::size_t lookup(const std::map<Composition, std::size_t>& m, const Composition& c) {
  const auto it = m.find(c);
  if (it == m.end()) throw Error(ErrorKind::InvalidArgument, "not a type of this index");
  return it->second;
}

// Letter counts of the k-th sequence of length n over an alphabet of size a.
Composition counts_of(std::size_t k, std::size_t a, std::size_t n) {
  Composition c(a, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++c[k % a];
    k /= a;
  }
  return c;
}

std::size_t checked_power(std::size_t base, std::size_t n) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > kMaxProductEntries / base) throw Error(ErrorKind::TooLarge, "expansion too large");
    out *= base;
  }
  return out;
}

// Representative comparison of W^n against z in log domain, with a relative
// tie band so values computed along different paths compare equal.
bool above(double log_w, double log_z, bool strict) {
  if (log_w == kNegInf) return !strict && log_z == kNegInf;
  if (log_z == kNegInf) return true;
  const double d = log_w - log_z;
  const bool tie = std::abs(d) <= 1e-12;
  return strict ? (d > 0.0 && !tie) : (d > 0.0 || tie);
}

}  // namespace

double composition_count(std::size_t n, std::size_t k) {
  return std::exp(std::lgamma(static_cast<double>(n + k)) -
                  std::lgamma(static_cast<double>(n + 1)) -
                  std::lgamma(static_cast<double>(k)));
}

double log_multinomial(const Composition& c) {
  double n = 0.0;
  double s = 0.0;
  for (std::uint32_t v : c) {
    n += v;
    s -= std::lgamma(static_cast<double>(v) + 1.0);
  }
  return s + std::lgamma(n + 1.0);
}

TypeClassIndex TypeClassIndex::build(std::size_t nx, std::size_t ny, std::size_t n) {
  if (nx == 0 || ny == 0 || n == 0) {
    throw Error(ErrorKind::InvalidArgument, "alphabets and blocklength must be >= 1");
  }
  if (composition_count(n, nx * ny) > 0.5 + static_cast<double>(kMaxJointTypes)) {
    throw Error(ErrorKind::TooLarge, "joint types exceed " + std::to_string(kMaxJointTypes));
  }
  TypeClassIndex idx;
  idx.n_ = n;
  idx.nx_ = nx;
  idx.ny_ = ny;
  idx.input_types_ = all_compositions(n, nx);
  idx.output_types_ = all_compositions(n, ny);
  for (const auto& c : idx.input_types_) idx.log_size_x_.push_back(log_multinomial(c));
  for (const auto& c : idx.output_types_) idx.log_size_y_.push_back(log_multinomial(c));

  std::map<Composition, std::size_t> out_index;
  for (std::size_t t = 0; t < idx.output_types_.size(); ++t) out_index[idx.output_types_[t]] = t;

  // Joint types: per input letter a, a composition of n_a over the outputs.
  std::vector<std::vector<Composition>> rows_by_count(n + 1);
  for (std::size_t m = 0; m <= n; ++m) rows_by_count[m] = all_compositions(m, ny);

  for (std::size_t tx = 0; tx < idx.input_types_.size(); ++tx) {
    const Composition& px = idx.input_types_[tx];
    std::vector<std::size_t> pick(nx, 0);
    while (true) {
      JointType jt;
      jt.input_type = static_cast<std::uint32_t>(tx);
      jt.counts.assign(nx * ny, 0);
      Composition py(ny, 0);
      double log_joint = std::lgamma(static_cast<double>(n) + 1.0);
      double log_y_given_x = 0.0;
      for (std::size_t a = 0; a < nx; ++a) {
        const Composition& row = rows_by_count[px[a]][pick[a]];
        log_y_given_x += log_multinomial(row);
        for (std::size_t b = 0; b < ny; ++b) {
          jt.counts[a * ny + b] = row[b];
          py[b] += row[b];
          log_joint -= std::lgamma(static_cast<double>(row[b]) + 1.0);
        }
      }
      jt.output_type = static_cast<std::uint32_t>(lookup(out_index, py));
      jt.log_size = log_joint;
      jt.log_size_y_given_x = log_y_given_x;
      double log_x_given_y = 0.0;
      for (std::size_t b = 0; b < ny; ++b) {
        double s = std::lgamma(static_cast<double>(py[b]) + 1.0);
        for (std::size_t a = 0; a < nx; ++a) s -= std::lgamma(jt.counts[a * ny + b] + 1.0);
        log_x_given_y += s;
      }
      jt.log_size_x_given_y = log_x_given_y;
      idx.joint_types_.push_back(std::move(jt));

      // Odometer over the per-letter choices.
      std::size_t a = 0;
      while (a < nx) {
        if (++pick[a] < rows_by_count[px[a]].size()) break;
        pick[a] = 0;
        ++a;
      }
      if (a == nx) break;
    }
  }
  return idx;
}

std::size_t TypeClassIndex::input_type_of(const Composition& c) const {
  const auto it = std::find(input_types_.begin(), input_types_.end(), c);
  if (it == input_types_.end()) throw Error(ErrorKind::InvalidArgument, "unknown input type");
  return static_cast<std::size_t>(it - input_types_.begin());
}

std::size_t TypeClassIndex::output_type_of(const Composition& c) const {
  const auto it = std::find(output_types_.begin(), output_types_.end(), c);
  if (it == output_types_.end()) throw Error(ErrorKind::InvalidArgument, "unknown output type");
  return static_cast<std::size_t>(it - output_types_.begin());
}

double channel_value_on_joint_type(const Channel& w, const JointType& jt) {
  double s = 0.0;
  for (std::size_t a = 0; a < w.nx(); ++a) {
    for (std::size_t b = 0; b < w.ny(); ++b) {
      const std::uint32_t c = jt.counts[a * w.ny() + b];
      if (c == 0) continue;
      if (w(a, b) == 0.0) return kNegInf;
      s += c * std::log(w(a, b));
    }
  }
  return s;
}

double reduced_constraint_mass(const TypeWeights& weights, const TypeClassIndex& index,
                               const Channel& w, std::size_t y_type, bool strict) {
  const double log_z = std::log(weights.z_t.at(y_type));
  std::vector<double> terms;
  for (const JointType& jt : index.joint_types()) {
    if (jt.output_type != y_type) continue;
    const double lam = weights.lambda_t[jt.input_type];
    if (!(lam > 0.0)) continue;
    if (!above(channel_value_on_joint_type(w, jt), log_z, strict)) continue;
    terms.push_back(std::log(lam) + jt.log_size_x_given_y - index.log_size_input(jt.input_type));
  }
  return std::exp(kernels::log_sum_exp(terms));
}

double reduced_gamma(const TypeWeights& weights, const TypeClassIndex& index, const Channel& w,
                     const RatePoint& r) {
  std::vector<double> terms;
  terms.reserve(index.joint_types().size());
  for (const JointType& jt : index.joint_types()) {
    const double lam = weights.lambda_t[jt.input_type];
    const double z = weights.z_t[jt.output_type];
    if (!(lam > 0.0) || !(z > 0.0)) continue;
    const double m = std::min(channel_value_on_joint_type(w, jt), std::log(z));
    terms.push_back(jt.log_size_y_given_x + std::log(lam) + m);
  }
  std::vector<double> rate_terms;
  for (std::size_t t = 0; t < index.output_types().size(); ++t) {
    const double z = weights.z_t[t];
    if (z > 0.0) rate_terms.push_back(index.log_size_output(t) + std::log(z));
  }
  const double lhs = std::exp(kernels::log_sum_exp(terms));
  const double rhs = std::exp(-r.rate() + kernels::log_sum_exp(rate_terms));
  return lhs - rhs;
}

SaddleProblem reduced_problem(const TypeClassIndex& index, const Channel& w) {
  if (w.nx() != index.nx() || w.ny() != index.ny()) {
    throw Error(ErrorKind::DimensionMismatch, "channel does not match the type index");
  }
  std::vector<Atom> atoms;
  atoms.reserve(index.joint_types().size());
  for (const JointType& jt : index.joint_types()) {
    const double log_w = channel_value_on_joint_type(w, jt);
    Atom a;
    a.input = jt.input_type;
    a.output = jt.output_type;
    a.weight = std::exp(jt.log_size_x_given_y - index.log_size_input(jt.input_type));
    a.value = log_w == kNegInf ? 0.0 : std::exp(index.log_size_output(jt.output_type) + log_w);
    atoms.push_back(a);
  }
  return SaddleProblem::from_atoms(index.input_types().size(), index.output_types().size(),
                                   std::move(atoms));
}

DmcSolveResult solve_saddle_dmc(const Channel& w, std::size_t n, const RatePoint& r,
                                const TolerancePolicy& tol) {
  const TypeClassIndex index = TypeClassIndex::build(w.nx(), w.ny(), n);
  const SaddleProblem prob = reduced_problem(index, w);
  SolveResult res = solve_saddle(prob, r.threshold(), tol);
  const SaddleSolution& s = res.solution;

  DmcCertificate c;
  c.n = n;
  c.num_input_types = index.input_types().size();
  c.num_output_types = index.output_types().size();
  c.num_joint_types = index.joint_types().size();
  c.weights.lambda_t = s.qx;
  c.weights.z_t.resize(s.z.size());
  for (std::size_t t = 0; t < s.z.size(); ++t) {
    c.weights.z_t[t] = std::min(1.0, s.z[t] * std::exp(-index.log_size_output(t)));
  }
  c.epsilon = s.epsilon;
  c.gap = s.gap;
  c.farkas = s.farkas;
  c.farkas_system = s.farkas_system;
  c.iterations = s.iterations;
  c.status = s.status;
  c.tol = tol.tol_gap;
  return {std::move(c), std::move(res.trace)};
}

ProbVector expand_qx(const TypeClassIndex& index, const std::vector<double>& lambda_t) {
  const std::size_t total = checked_power(index.nx(), index.n());
  std::vector<double> q(total);
  for (std::size_t k = 0; k < total; ++k) {
    // Sequence k has x_1 most significant; letter counts do not depend on order.
    const std::size_t t = index.input_type_of(counts_of(k, index.nx(), index.n()));
    q[k] = lambda_t[t] * std::exp(-index.log_size_input(t));
  }
  return ProbVector::from(std::move(q), 1e-8);
}

std::vector<double> expand_z(const TypeClassIndex& index, const std::vector<double>& z_t) {
  const std::size_t total = checked_power(index.ny(), index.n());
  std::vector<double> z(total);
  for (std::size_t k = 0; k < total; ++k) {
    z[k] = z_t[index.output_type_of(counts_of(k, index.ny(), index.n()))];
  }
  return z;
}

}  // namespace mmc::types
