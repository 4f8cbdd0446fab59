#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmc/channel.hpp"
#include "mmc/farkas.hpp"
#include "mmc/problem.hpp"
#include "mmc/saddle.hpp"

// Type-class reduction of the saddle problem for n uses of a memoryless
// channel. Variables are the mass lambda_T of each input type class and one z
// per output type class; sizes are kept in log domain (nats).
namespace mmc::types {

using Composition = std::vector<std::uint32_t>;

struct JointType {
  std::uint32_t input_type = 0;
  std::uint32_t output_type = 0;
  std::vector<std::uint32_t> counts;  // counts[a * ny + b] = #{i : x_i = a, y_i = b}
  double log_size = 0.0;              // log |T_{x,y}|
  double log_size_y_given_x = 0.0;    // log |T_{y|x}|
  double log_size_x_given_y = 0.0;    // log |T_{x|y}|
};

/// Upper limit on enumerated joint types.
inline constexpr std::size_t kMaxJointTypes = 2'000'000;

class TypeClassIndex {
 public:
  /// Enumerates all input, output and joint types of length n.
  /// Throws TooLarge when the joint-type count exceeds kMaxJointTypes.
  static TypeClassIndex build(std::size_t nx, std::size_t ny, std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }

  const std::vector<Composition>& input_types() const noexcept { return input_types_; }
  const std::vector<Composition>& output_types() const noexcept { return output_types_; }
  const std::vector<JointType>& joint_types() const noexcept { return joint_types_; }

  double log_size_input(std::size_t t) const { return log_size_x_[t]; }
  double log_size_output(std::size_t t) const { return log_size_y_[t]; }

  /// Index of the type of a sequence given by its letter counts.
  std::size_t input_type_of(const Composition& c) const;
  std::size_t output_type_of(const Composition& c) const;

 private:
  std::size_t n_ = 0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<Composition> input_types_;
  std::vector<Composition> output_types_;
  std::vector<JointType> joint_types_;
  std::vector<double> log_size_x_;
  std::vector<double> log_size_y_;
};

/// Number of compositions of n into k parts, as a double.
double composition_count(std::size_t n, std::size_t k);

/// log multinomial n! / prod c_i! via lgamma.
double log_multinomial(const Composition& c);

/// lambda_T per input type (sums to 1), z_T per output type (unscaled, in [0,1]).
struct TypeWeights {
  std::vector<double> lambda_t;
  std::vector<double> z_t;
};

/// log W^n(y|x) on the joint type; -inf when a count hits a zero of W.
double channel_value_on_joint_type(const Channel& w, const JointType& jt);

/// Q_X{W^n(y|.) > z_T} (strict) or >= z_T for a representative y of the output type.
double reduced_constraint_mass(const TypeWeights& weights, const TypeClassIndex& index,
                               const Channel& w, std::size_t y_type, bool strict);

/// gamma of the expanded problem with Q_X uniform on input types and z constant
/// on output types, computed from type data alone.
double reduced_gamma(const TypeWeights& weights, const TypeClassIndex& index, const Channel& w,
                     const RatePoint& r);

/// The weighted saddle problem on types: one atom per joint type with weight
/// |T_{x|y}| / |T_x| and value |T_y| W^n(y|x). Its z coordinates are |T_y| z_T.
SaddleProblem reduced_problem(const TypeClassIndex& index, const Channel& w);

struct DmcCertificate {
  std::size_t n = 0;
  std::size_t num_input_types = 0;
  std::size_t num_output_types = 0;
  std::size_t num_joint_types = 0;
  TypeWeights weights;
  double epsilon = 0.0;
  double gap = 0.0;
  std::optional<FarkasCertificate> farkas;
  std::optional<FarkasSystem> farkas_system;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  double tol = kDefaultTolGap;
};

struct DmcSolveResult {
  DmcCertificate certificate;
  IterationTrace trace;
};

/// Saddle point for n uses of w at total rate r (M = e^R codewords of length n).
DmcSolveResult solve_saddle_dmc(const Channel& w, std::size_t n, const RatePoint& r,
                                const TolerancePolicy& tol);

/// Q_X(x) = lambda_{T(x)} / |T(x)| over the lexicographic sequences of length n.
ProbVector expand_qx(const TypeClassIndex& index, const std::vector<double>& lambda_t);

/// z_y = z_{T(y)} over the lexicographic output sequences of length n.
std::vector<double> expand_z(const TypeClassIndex& index, const std::vector<double>& z_t);

}  // namespace mmc::types
