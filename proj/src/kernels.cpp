#include "imomd/kernels.hpp"

namespace imomd::kernels {

namespace {

// Orders by distance, then by NodeId, matching the serial scan.
bool closer(const Nearest& a, const Nearest& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.node < b.node);
}

}  // namespace

Nearest serial::nearest_by_haversine(std::span<const NodeId> candidates,
                                     std::span<const GeoPoint> points, const GeoPoint& to) {
    Nearest best;
    for (NodeId v : candidates) {
        Nearest c{v, haversine(points[v], to)};
        if (closer(c, best)) best = c;
    }
    return best;
}

Nearest parallel::nearest_by_haversine(std::span<const NodeId> candidates,
                                       std::span<const GeoPoint> points, const GeoPoint& to) {
    Nearest best;
    const auto n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel
    {
        Nearest local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            const NodeId v = candidates[static_cast<std::size_t>(i)];
            Nearest c{v, haversine(points[v], to)};
            if (closer(c, local)) local = c;
        }
#pragma omp critical(imomd_nearest)
        {
            if (closer(local, best)) best = local;
        }
    }
    return best;
}

Nearest nearest_by_haversine(std::span<const NodeId> candidates, std::span<const GeoPoint> points,
                             const GeoPoint& to) {
    if (candidates.size() >= kParallelThreshold && max_threads() > 1) {
        return parallel::nearest_by_haversine(candidates, points, to);
    }
    return serial::nearest_by_haversine(candidates, points, to);
}

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace imomd::kernels
