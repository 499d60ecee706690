#include "roughstab/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace roughstab {

int worker_count() {
    int workers = omp_get_max_threads();
    if (const char* env = std::getenv("ROUGHSTAB_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) workers = std::min(workers, cap);
        } catch (const std::exception&) {
            // unparsable values leave the OpenMP default in place
        }
    }
    return std::max(workers, 1);
}

namespace detail {

void parallel_for(std::size_t count, void (*body)(void*, std::size_t), void* ctx) {
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
    for (long long i = 0; i < n; ++i) body(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail
}  // namespace roughstab
