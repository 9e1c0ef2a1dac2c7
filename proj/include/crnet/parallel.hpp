#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace crnet {

/// Runs fn(i) for i in [0, n) on up to `jobs` OpenMP threads. Each index
/// must write only its own output slot. The exception of the lowest failing
/// index is rethrown after the loop.
template <class Fn>
void parallel_for_jobs(std::size_t n, int jobs, Fn&& fn)
{
    std::vector<std::exception_ptr> errors(n);
    const int threads = jobs < 1 ? 1 : jobs;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace crnet
