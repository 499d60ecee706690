#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <utility>
#include <vector>

namespace roughstab {

/// serial is the reference path; parallel distributes indices over OpenMP
/// threads. Both produce identical results because every index owns its
/// inputs and outputs are reduced in index order.
enum class Execution { serial, parallel };

/// OpenMP worker count, capped by the ROUGHSTAB_THREADS environment variable.
int worker_count();

namespace detail {
void parallel_for(std::size_t count, void (*body)(void*, std::size_t), void* ctx);
}

/// out[i] = fn(i) for i in [0, count). The first exception (lowest index) is
/// rethrown after all indices finish.
template <typename Fn>
auto map_indices(std::size_t count, Fn&& fn, Execution exec)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using Result = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<Result> out(count);
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(count);
    struct Context {
        std::remove_reference_t<Fn>* fn;
        std::vector<Result>* out;
        std::vector<std::exception_ptr>* errors;
    } ctx{&fn, &out, &errors};
    detail::parallel_for(
        count,
        [](void* raw, std::size_t i) {
            auto* c = static_cast<Context*>(raw);
            try {
                (*c->out)[i] = (*c->fn)(i);
            } catch (...) {
                (*c->errors)[i] = std::current_exception();
            }
        },
        &ctx);
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace roughstab
