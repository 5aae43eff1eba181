#include "spde/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace spde {

int default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> parallel_map(std::size_t n, int threads,
                                 const std::function<double(std::size_t)>& fn) {
    std::vector<double> values(n);
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) values[i] = fn(i);
        return values;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) values[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return values;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (const double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleMoments sample_moments(std::span<const double> values) {
    SampleMoments m;
    const std::size_t n = values.size();
    if (n == 0) return m;
    m.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return m;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - m.mean) * (values[i] - m.mean);
    m.variance = pairwise_sum(sq) / static_cast<double>(n - 1);
    return m;
}

}  // namespace spde
