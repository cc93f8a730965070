#include "hyperwave/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hyperwave/error.hpp"

namespace hyperwave {

int configured_threads() {
    if (const char* env = std::getenv("HYPERWAVE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw DomainError(std::string("HYPERWAVE_THREADS must be a positive integer, got '") + env + "'");
        }
        return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_each_index(std::size_t count, ExecutionMode mode, const std::function<void(std::size_t)>& f) {
    if (mode == ExecutionMode::serial) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::exception_ptr first;
    std::mutex guard;
    const long n = static_cast<long>(count);
    const int threads = configured_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < n; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

std::vector<cplx> omega0_grid(const SpaceParams& p, const WaveParams& base, std::span<const double> ts,
                              std::span<const double> rs, const CutoffPair& cut, ExecutionMode mode) {
    (void)inversion_constant(p);  // calibrate before threads start
    std::vector<cplx> out(ts.size() * rs.size());
    for_each_index(out.size(), mode, [&](std::size_t k) {
        WaveParams wp = base;
        wp.t = ts[k / rs.size()];
        out[k] = omega0(p, wp, rs[k % rs.size()], cut);
    });
    return out;
}

std::vector<double> phi_grid(const SpaceParams& p, std::span<const double> lambdas, std::span<const double> rs,
                             ExecutionMode mode) {
    std::vector<double> out(lambdas.size() * rs.size());
    for_each_index(out.size(), mode, [&](std::size_t k) {
        out[k] = phi_lambda(p, lambdas[k / rs.size()], rs[k % rs.size()]).real();
    });
    return out;
}

}  // namespace hyperwave
