#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hyperwave/kernels.hpp"

namespace hyperwave {

enum class ExecutionMode { serial, parallel };

/// Thread count for parallel mode: HYPERWAVE_THREADS if set and positive,
/// otherwise the OpenMP default.
int configured_threads();

/// Calls f(i) for i in [0, count). Parallel mode uses a dynamic OpenMP schedule;
/// the first exception thrown by any call is rethrown after the loop.
void for_each_index(std::size_t count, ExecutionMode mode, const std::function<void(std::size_t)>& f);

/// omega0 on the grid ts x rs (row-major in t), all other parameters from `base`.
std::vector<cplx> omega0_grid(const SpaceParams& p, const WaveParams& base, std::span<const double> ts,
                              std::span<const double> rs, const CutoffPair& cut, ExecutionMode mode);

/// phi_lambda(r) on lambdas x rs (row-major in lambda).
std::vector<double> phi_grid(const SpaceParams& p, std::span<const double> lambdas, std::span<const double> rs,
                             ExecutionMode mode);

}  // namespace hyperwave
