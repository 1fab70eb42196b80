#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace infogeom {

/// Number of worker threads used for node-wise reductions. Defaults to 1.
unsigned worker_count();
void set_worker_count(unsigned workers);

/// Reads INFOGEOM_WORKERS from the environment, if set, and applies it.
void configure_workers_from_environment();

/// Sum of term(i) for i in [0, n).
///
/// The summation tree is fixed: leaves of kSumLeafSize consecutive terms are
/// summed left to right, then leaf totals are combined pairwise. The tree does
/// not depend on the worker count, so the result is bit-identical whether the
/// leaves are evaluated serially or concurrently.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// Σ values[i] with the same fixed tree.
double deterministic_sum(std::span<const double> values);

inline constexpr std::size_t kSumLeafSize = 32;

}  // namespace infogeom
