#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace dtm {

/// Worker count used by batch evaluations. Defaults to the DTMECH_THREADS
/// environment variable when set, otherwise the hardware concurrency.
std::size_t thread_count() noexcept;
void set_thread_count(std::size_t count) noexcept;

/// Calls body(i) for every i in [0, count). Each index is visited exactly once;
/// callers write into per-index slots so the result never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise summation with a fixed split order, independent of thread count.
double pairwise_sum(std::span<const double> values) noexcept;
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) noexcept;

}  // namespace dtm
