#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mmc/channel.hpp"

namespace mmc {

/// One term weight * min(value, z[output]) of an input's score.
struct Atom {
  std::uint32_t input = 0;
  std::uint32_t output = 0;
  double weight = 1.0;
  double value = 0.0;
};

/// The gamma functional in weighted form:
///
///   score_i(z) = sum_{atoms a of i} a.weight * min(a.value, z[a.output]) - e^{-R} sum_j z_j
///
/// and the mass of output j above threshold t is sum_{atoms of j, value > t} q_i * weight.
/// A plain channel has one atom (weight 1, value W(y|x)) per entry. The type-reduced
/// memoryless problem has one atom per joint type. For every (input, output) pair the
/// atom weights sum to 1, so the non-strict mass at t <= 0 is always 1.
class SaddleProblem {
 public:
  static SaddleProblem from_channel(const Channel& w);

  /// Values in each output that agree to `snap_rel` relative precision are
  /// replaced by a common representative so ties are exact.
  static SaddleProblem from_atoms(std::size_t num_inputs, std::size_t num_outputs,
                                  std::vector<Atom> atoms, double snap_rel = 1e-12);

  std::size_t num_inputs() const noexcept { return num_inputs_; }
  std::size_t num_outputs() const noexcept { return num_outputs_; }
  std::size_t num_atoms() const noexcept { return by_output_.size(); }

  /// Atoms of output j sorted by value, largest first.
  std::span<const Atom> output_atoms(std::size_t j) const {
    return std::span<const Atom>(by_output_).subspan(out_off_[j], out_off_[j + 1] - out_off_[j]);
  }
  /// Atoms of input i grouped by output.
  std::span<const Atom> input_atoms(std::size_t i) const {
    return std::span<const Atom>(by_input_).subspan(in_off_[i], in_off_[i + 1] - in_off_[i]);
  }

 private:
  std::size_t num_inputs_ = 0;
  std::size_t num_outputs_ = 0;
  std::vector<Atom> by_output_;
  std::vector<std::size_t> out_off_;
  std::vector<Atom> by_input_;
  std::vector<std::size_t> in_off_;
};

/// q-mass of output j strictly above t (strict) or at least t (non-strict).
double output_mass(const SaddleProblem& prob, std::span<const double> q, std::size_t j, double t,
                   bool strict);

/// Per-output weighted indicator: entry i is the weight of input i's atoms in
/// output j with value > t (strict) or >= t.
std::vector<double> indicator(const SaddleProblem& prob, std::size_t j, double t, bool strict);

/// The value of an atom of output j within snap_rel of t (relative), else t.
/// Uses the same tie rule as from_atoms.
double snap_to_value(const SaddleProblem& prob, std::size_t j, double t, double snap_rel = 1e-12);

struct ZInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// All z_j satisfying  mass(> z_j) <= theta <= mass(>= z_j)  at tol.
ZInterval optimal_z_interval(const SaddleProblem& prob, std::span<const double> q, std::size_t j,
                             double theta, double tol);

}  // namespace mmc
