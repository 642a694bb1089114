#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel; both produce
// identical results (ties resolve to the smaller index), so the dispatching
// wrappers may pick either without affecting determinism.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

#include "imomd/graph.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace imomd::kernels {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// Minimum score and the smallest index attaining it. Infinite scores are
/// treated as "not a candidate"; index is kNoIndex when nothing qualified.
struct ArgMin {
    double value = kInfinity;
    std::size_t index = kNoIndex;

    bool better_than(const ArgMin& other) const noexcept {
        return value < other.value || (value == other.value && index < other.index);
    }
};

/// Number of threads OpenMP regions will use (1 without OpenMP).
int max_threads() noexcept;

/// Below this many candidates the dispatching wrappers stay serial.
inline constexpr std::size_t kParallelThreshold = 2048;

namespace serial {

template <typename Score>
ArgMin argmin(std::size_t n, Score&& score) {
    ArgMin best;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = score(i);
        if (s < kInfinity && ArgMin{s, i}.better_than(best)) best = {s, i};
    }
    return best;
}

template <typename Body>
void for_each_index(std::size_t n, Body&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace serial

namespace parallel {

/// `score` must not throw.
template <typename Score>
ArgMin argmin(std::size_t n, Score&& score) {
    ArgMin best;
#pragma omp parallel
    {
        ArgMin local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double s = score(idx);
            if (s < kInfinity && ArgMin{s, idx}.better_than(local)) local = {s, idx};
        }
#pragma omp critical(imomd_argmin)
        {
            if (local.better_than(best)) best = local;
        }
    }
    return best;
}

/// `body` must not throw; iterations run in unspecified order.
template <typename Body>
void for_each_index(std::size_t n, Body&& body) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        body(static_cast<std::size_t>(i));
    }
}

}  // namespace parallel

template <typename Score>
ArgMin argmin(std::size_t n, Score&& score) {
    if (n >= kParallelThreshold && max_threads() > 1) return parallel::argmin(n, score);
    return serial::argmin(n, score);
}

struct Nearest {
    NodeId node = kNoNode;
    double distance = kInfinity;
};

namespace serial {
/// Candidate closest to `to` by haversine; ties go to the smaller NodeId.
Nearest nearest_by_haversine(std::span<const NodeId> candidates, std::span<const GeoPoint> points,
                             const GeoPoint& to);
}  // namespace serial

namespace parallel {
Nearest nearest_by_haversine(std::span<const NodeId> candidates, std::span<const GeoPoint> points,
                             const GeoPoint& to);
}  // namespace parallel

Nearest nearest_by_haversine(std::span<const NodeId> candidates, std::span<const GeoPoint> points,
                             const GeoPoint& to);

}  // namespace imomd::kernels
