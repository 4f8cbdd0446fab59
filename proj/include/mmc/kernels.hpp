#pragma once

#include <cstddef>
#include <span>

#include "mmc/problem.hpp"

// Data-parallel inner loops. Each kernel has a serial reference with a
// different traversal order, kept for testing and benchmarking.
namespace mmc::kernels {

/// Problems with at least this many atoms (or terms) use the parallel kernels.
inline constexpr std::size_t kParallelAtomThreshold = 4096;

namespace serial {

/// out[i] = sum over atoms a of input i of a.weight * min(a.value, z[a.output]).
/// Traverses by output and scatters into out.
void input_sums(const SaddleProblem& prob, std::span<const double> z, std::span<double> out);

/// log(sum_k exp(terms[k])); -inf terms are skipped, empty sum gives -inf.
double log_sum_exp(std::span<const double> terms);

}  // namespace serial

namespace parallel {

/// Same contract as serial::input_sums; one input per work item, so the
/// per-input summation order is fixed and results do not depend on thread count.
void input_sums(const SaddleProblem& prob, std::span<const double> z, std::span<double> out);

double log_sum_exp(std::span<const double> terms);

}  // namespace parallel

/// Dispatches to the parallel kernel for large problems.
void input_sums(const SaddleProblem& prob, std::span<const double> z, std::span<double> out);
double log_sum_exp(std::span<const double> terms);

}  // namespace mmc::kernels
