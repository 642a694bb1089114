#include "imomd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "imomd/errors.hpp"

namespace imomd::rtsp {

namespace {

void guard(const DestGraph& dg) {
    if (dg.size() > kOracleMaxOrder) {
        throw InputError("oracle refuses order " + std::to_string(dg.size()) + " (limit " +
                         std::to_string(kOracleMaxOrder) + ")");
    }
}

struct Closure {
    std::size_t n;
    std::vector<double> dist;
    std::vector<DestIndex> next;

    double d(DestIndex i, DestIndex k) const { return dist[i * n + k]; }
};

Closure floyd_warshall(const DestGraph& dg) {
    const std::size_t n = dg.size();
    Closure c{n, std::vector<double>(n * n), std::vector<DestIndex>(n * n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            c.dist[i * n + k] = dg.theta(i, k);
            if (dg.connected(i, k)) c.next[i * n + k] = k;
        }
    }
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(c.d(i, m) < kInfinity)) continue;
            for (std::size_t k = 0; k < n; ++k) {
                const double via = c.d(i, m) + c.d(m, k);
                if (via < c.dist[i * n + k]) {
                    c.dist[i * n + k] = via;
                    c.next[i * n + k] = c.next[i * n + m];
                }
            }
        }
    }
    return c;
}

}  // namespace

OracleResult brute_force_oracle(const DestGraph& dg) {
    guard(dg);
    const Closure c = floyd_warshall(dg);
    std::vector<DestIndex> middle;
    for (DestIndex i = 0; i < dg.size(); ++i) {
        if (i == dg.source() || i == dg.target() || !dg.required(i)) continue;
        if (!(c.d(dg.source(), i) < kInfinity)) {
            throw NoSequenceError("destination " + std::to_string(i) + " is unreachable");
        }
        middle.push_back(i);
    }
    if (!(c.d(dg.source(), dg.target()) < kInfinity)) throw NoSequenceError("target unreachable from source");

    double best = kInfinity;
    std::vector<DestIndex> best_perm;
    do {
        double cost = 0.0;
        DestIndex at = dg.source();
        for (auto m : middle) {
            cost += c.d(at, m);
            at = m;
        }
        cost += c.d(at, dg.target());
        if (cost < best) {
            best = cost;
            best_perm = middle;
        }
    } while (std::next_permutation(middle.begin(), middle.end()));

    std::vector<DestIndex> order{dg.source()};
    auto expand = [&](DestIndex to) {
        DestIndex at = order.back();
        while (at != to) {
            at = c.next[at * c.n + to];
            order.push_back(at);
        }
    };
    for (auto m : best_perm) expand(m);
    expand(dg.target());
    return {best, make_sequence(dg, std::move(order))};
}

std::optional<double> best_hamiltonian_path(const DestGraph& dg) {
    guard(dg);
    std::vector<DestIndex> middle;
    for (DestIndex i = 0; i < dg.size(); ++i) {
        if (i != dg.source() && i != dg.target()) middle.push_back(i);
    }
    double best = kInfinity;
    do {
        std::vector<DestIndex> order{dg.source()};
        order.insert(order.end(), middle.begin(), middle.end());
        order.push_back(dg.target());
        best = std::min(best, sequence_cost(dg, order));
    } while (std::next_permutation(middle.begin(), middle.end()));
    if (!(best < kInfinity)) return std::nullopt;
    return best;
}

bool same_cost(double a, double b) noexcept {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

OracleStats oracle_stats(std::span<const InstanceCosts> batch) {
    if (batch.empty()) throw InputError("oracle_stats needs at least one instance");
    double sum_oracle = 0.0;
    double sum_solver = 0.0;
    std::vector<double> ratios;
    std::size_t optimal = 0;
    for (const auto& r : batch) {
        sum_oracle += r.oracle_cost;
        sum_solver += r.solver_cost;
        ratios.push_back(r.oracle_cost / r.solver_cost);
        if (same_cost(r.oracle_cost, r.solver_cost)) ++optimal;
    }
    const double n = static_cast<double>(batch.size());
    const double mean_ratio = std::accumulate(ratios.begin(), ratios.end(), 0.0) / n;
    double var = 0.0;
    for (double x : ratios) var += (x - mean_ratio) * (x - mean_ratio);

    OracleStats s;
    s.rho_mean = sum_oracle / sum_solver;
    s.rho_std = std::sqrt(var / n);
    s.rho_optimality = static_cast<double>(optimal) / n;
    s.rho_worst = *std::min_element(ratios.begin(), ratios.end());
    return s;
}

}  // namespace imomd::rtsp
