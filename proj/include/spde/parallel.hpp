#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spde {

/// Worker count used when a caller passes 0.
int default_threads();

/// values[i] = fn(i) for i < n, split into contiguous blocks over `threads`
/// workers. The first exception thrown by any worker is rethrown.
std::vector<double> parallel_map(std::size_t n, int threads,
                                 const std::function<double(std::size_t)>& fn);

/// Pairwise summation in a fixed tree order.
double pairwise_sum(std::span<const double> values);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
};

SampleMoments sample_moments(std::span<const double> values);

}  // namespace spde
