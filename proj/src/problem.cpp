#include "mmc/problem.hpp"

#include <algorithm>
#include <cmath>

namespace mmc {

SaddleProblem SaddleProblem::from_channel(const Channel& w) {
  std::vector<Atom> atoms;
  atoms.reserve(w.nx() * w.ny());
  for (std::size_t x = 0; x < w.nx(); ++x)
    for (std::size_t y = 0; y < w.ny(); ++y)
      atoms.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), 1.0, w(x, y)});
  return from_atoms(w.nx(), w.ny(), std::move(atoms));
}

SaddleProblem SaddleProblem::from_atoms(std::size_t num_inputs, std::size_t num_outputs,
                                        std::vector<Atom> atoms, double snap_rel) {
  for (const Atom& a : atoms) {
    if (a.input >= num_inputs || a.output >= num_outputs) {
      throw Error(ErrorKind::DimensionMismatch, "atom index out of range");
    }
    if (!(a.weight >= 0.0) || !(a.value >= 0.0) || !std::isfinite(a.value)) {
      throw Error(ErrorKind::InvalidArgument, "atom weight and value must be finite and >= 0");
    }
  }
  SaddleProblem p;
  p.num_inputs_ = num_inputs;
  p.num_outputs_ = num_outputs;

  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.output != b.output) return a.output < b.output;
    return a.value > b.value;
  });
  // Snap near-equal values within each output to the head of their run.
  for (std::size_t k = 1; k < atoms.size(); ++k) {
    Atom& a = atoms[k];
    const Atom& prev = atoms[k - 1];
    if (a.output == prev.output && prev.value - a.value <= snap_rel * prev.value) {
      a.value = prev.value;
    }
  }
  p.by_output_ = atoms;
  p.out_off_.assign(num_outputs + 1, 0);
  for (const Atom& a : atoms) ++p.out_off_[a.output + 1];
  for (std::size_t j = 0; j < num_outputs; ++j) p.out_off_[j + 1] += p.out_off_[j];

  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.input < b.input; });
  p.by_input_ = std::move(atoms);
  p.in_off_.assign(num_inputs + 1, 0);
  for (const Atom& a : p.by_input_) ++p.in_off_[a.input + 1];
  for (std::size_t i = 0; i < num_inputs; ++i) p.in_off_[i + 1] += p.in_off_[i];
  return p;
}

double output_mass(const SaddleProblem& prob, std::span<const double> q, std::size_t j, double t,
                   bool strict) {
  double m = 0.0;
  for (const Atom& a : prob.output_atoms(j)) {
    if (strict ? a.value > t : a.value >= t) {
      m += q[a.input] * a.weight;
    } else {
      break;  // sorted descending
    }
  }
  return m;
}

double snap_to_value(const SaddleProblem& prob, std::size_t j, double t, double snap_rel) {
  for (const Atom& a : prob.output_atoms(j)) {
    if (std::abs(a.value - t) <= snap_rel * a.value) return a.value;
    if (a.value < t) break;
  }
  return t;
}

std::vector<double> indicator(const SaddleProblem& prob, std::size_t j, double t, bool strict) {
  std::vector<double> v(prob.num_inputs(), 0.0);
  for (const Atom& a : prob.output_atoms(j)) {
    if (strict ? a.value > t : a.value >= t) {
      v[a.input] += a.weight;
    } else {
      break;
    }
  }
  return v;
}

ZInterval optimal_z_interval(const SaddleProblem& prob, std::span<const double> q, std::size_t j,
                             double theta, double tol) {
  const auto atoms = prob.output_atoms(j);
  ZInterval iv{0.0, 0.0};
  bool have_hi = false;
  double cum = 0.0;
  std::size_t k = 0;
  while (k < atoms.size()) {
    const double v = atoms[k].value;
    while (k < atoms.size() && atoms[k].value == v) {
      cum += q[atoms[k].input] * atoms[k].weight;
      ++k;
    }
    if (!have_hi && cum >= theta - tol) {
      iv.hi = v;
      have_hi = true;
    }
    if (cum > theta + tol) {
      iv.lo = v;
      return iv;
    }
  }
  return iv;
}

}  // namespace mmc
