#include "mmc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmc::kernels {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

namespace serial {

void input_sums(const SaddleProblem& prob, std::span<const double> z, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < prob.num_outputs(); ++j) {
    for (const Atom& a : prob.output_atoms(j)) {
      out[a.input] += a.weight * std::min(a.value, z[j]);
    }
  }
}

double log_sum_exp(std::span<const double> terms) {
  double mx = kNegInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

}  // namespace serial

namespace parallel {

void input_sums(const SaddleProblem& prob, std::span<const double> z, std::span<double> out) {
  const auto n = static_cast<long>(prob.num_inputs());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    for (const Atom& a : prob.input_atoms(static_cast<std::size_t>(i))) {
      s += a.weight * std::min(a.value, z[a.output]);
    }
    out[static_cast<std::size_t>(i)] = s;
  }
}

double log_sum_exp(std::span<const double> terms) {
  const auto n = static_cast<long>(terms.size());
  double mx = kNegInf;
#pragma omp parallel for reduction(max : mx) schedule(static)
  for (long k = 0; k < n; ++k) mx = std::max(mx, terms[static_cast<std::size_t>(k)]);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (long k = 0; k < n; ++k) s += std::exp(terms[static_cast<std::size_t>(k)] - mx);
  return mx + std::log(s);
}

}  // namespace parallel

void input_sums(const SaddleProblem& prob, std::span<const double> z, std::span<double> out) {
  if (prob.num_atoms() >= kParallelAtomThreshold) {
    parallel::input_sums(prob, z, out);
  } else {
    serial::input_sums(prob, z, out);
  }
}

double log_sum_exp(std::span<const double> terms) {
  return terms.size() >= kParallelAtomThreshold ? parallel::log_sum_exp(terms)
                                                : serial::log_sum_exp(terms);
}

}  // namespace mmc::kernels
