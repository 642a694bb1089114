#include "imomd/rtsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "imomd/errors.hpp"
#include "imomd/kernels.hpp"

namespace imomd::rtsp {

DestGraph::DestGraph(std::size_t n, DestIndex source, DestIndex target)
    : n_(n), source_(source), target_(target), theta_(n * n, kInfinity), required_(n, true) {
    if (n < 2 || source >= n || target >= n || source == target) {
        throw InputError("destination graph needs distinct source and target within range");
    }
    for (std::size_t i = 0; i < n; ++i) theta_[i * n + i] = 0.0;
}

void DestGraph::set(DestIndex i, DestIndex k, double w) {
    if (i >= n_ || k >= n_) throw InputError("destination index out of range");
    if (i == k) return;
    if (!(w > 0.0)) throw InputError("destination edge weight must be positive");
    theta_[i * n_ + k] = w;
    theta_[k * n_ + i] = w;
}

void DestGraph::set_required(DestIndex i, bool required) {
    if (i == source_ || i == target_) return;
    required_[i] = required;
}

void DestGraph::validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (theta(i, i) != 0.0) throw InputError("destination graph diagonal must be zero");
        for (std::size_t k = i + 1; k < n_; ++k) {
            if (theta(i, k) != theta(k, i)) throw InputError("destination graph must be symmetric");
            if (!(theta(i, k) > 0.0)) throw InputError("destination edges must be positive");
        }
    }
    std::vector<bool> seen(n_, false);
    std::vector<DestIndex> stack{source_};
    seen[source_] = true;
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n_; ++v) {
            if (!seen[v] && connected(u, v)) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (required_[i] && !seen[i]) {
            throw NoSequenceError("destination " + std::to_string(i) + " is unreachable");
        }
    }
}

double sequence_cost(const DestGraph& dg, std::span<const DestIndex> order) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) total += dg.theta(order[i], order[i + 1]);
    return total;
}

VisitSequence make_sequence(const DestGraph& dg, std::vector<DestIndex> order) {
    VisitSequence s{std::move(order), 0.0};
    s.total_cost = sequence_cost(dg, s.order);
    return s;
}

std::optional<std::string> check_sequence(const DestGraph& dg, const VisitSequence& seq) {
    const auto& o = seq.order;
    if (o.size() < 2) return "sequence shorter than two entries";
    if (o.front() != dg.source()) return "sequence does not start at the source";
    if (o.back() != dg.target()) return "sequence does not end at the target";
    std::vector<bool> seen(dg.size(), false);
    for (auto d : o) {
        if (d >= dg.size()) return "destination index out of range";
        seen[d] = true;
    }
    for (std::size_t i = 0; i < dg.size(); ++i) {
        if (dg.required(i) && !seen[i]) return "required destination " + std::to_string(i) + " missing";
    }
    for (std::size_t i = 0; i + 1 < o.size(); ++i) {
        if (!dg.connected(o[i], o[i + 1])) {
            return "no edge between " + std::to_string(o[i]) + " and " + std::to_string(o[i + 1]);
        }
    }
    const double recomputed = sequence_cost(dg, o);
    if (std::abs(recomputed - seq.total_cost) > 1e-9 * std::max(1.0, std::abs(recomputed))) {
        return "total_cost " + std::to_string(seq.total_cost) + " disagrees with recomputed " +
               std::to_string(recomputed);
    }
    return std::nullopt;
}

const char* to_string(InsertionAction a) noexcept {
    switch (a) {
        case InsertionAction::kInSequence: return "in_sequence";
        case InsertionAction::kInPlace: return "in_place";
        case InsertionAction::kSwapLeft: return "swap_left";
        case InsertionAction::kSwapRight: return "swap_right";
        case InsertionAction::kSwapBoth: return "swap_both";
    }
    return "?";
}

VisitSequence initial_sequence(const DestGraph& dg) {
    dg.validate();
    const std::size_t n = dg.size();
    std::vector<double> dist(n, kInfinity);
    std::vector<DestIndex> parent(n, n);
    std::vector<bool> done(n, false);
    dist[dg.source()] = 0.0;
    // Dense O(n^2) Dijkstra; lowest index wins ties.
    for (std::size_t round = 0; round < n; ++round) {
        DestIndex u = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && dist[i] < kInfinity && (u == n || dist[i] < dist[u])) u = i;
        }
        if (u == n || u == dg.target()) break;
        done[u] = true;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v] || !dg.connected(u, v)) continue;
            const double nd = dist[u] + dg.theta(u, v);
            if (nd < dist[v]) {
                dist[v] = nd;
                parent[v] = u;
            }
        }
    }
    if (!(dist[dg.target()] < kInfinity)) throw NoSequenceError("target unreachable from source");
    std::vector<DestIndex> order;
    for (DestIndex x = dg.target(); x != n; x = parent[x]) order.push_back(x);
    std::reverse(order.begin(), order.end());
    return make_sequence(dg, std::move(order));
}

std::optional<double> insertion_cost(const DestGraph& dg, std::span<const DestIndex> s,
                                     std::size_t i, DestIndex d, InsertionAction action) {
    const std::size_t len = s.size();
    if (i >= len) return std::nullopt;
    auto th = [&](DestIndex a, DestIndex b) { return dg.theta(a, b); };
    double delta = kInfinity;
    switch (action) {
        case InsertionAction::kInPlace:
            delta = 2.0 * th(s[i], d);
            break;
        case InsertionAction::kInSequence:
            if (i + 1 >= len) return std::nullopt;
            delta = th(s[i], d) + th(d, s[i + 1]) - th(s[i], s[i + 1]);
            break;
        case InsertionAction::kSwapLeft:
            if (i < 2 || i + 1 >= len) return std::nullopt;
            delta = th(d, s[i + 1]) - th(s[i], s[i + 1]) + th(s[i - 1], d) + th(s[i - 2], s[i]) -
                    th(s[i - 2], s[i - 1]);
            break;
        case InsertionAction::kSwapRight:
            if (i + 3 >= len) return std::nullopt;
            delta = th(s[i], d) - th(s[i], s[i + 1]) + th(d, s[i + 2]) + th(s[i + 1], s[i + 3]) -
                    th(s[i + 2], s[i + 3]);
            break;
        case InsertionAction::kSwapBoth:
            if (i < 2 || i + 3 >= len) return std::nullopt;
            delta = th(s[i - 1], d) + th(s[i - 2], s[i]) - th(s[i - 2], s[i - 1]) -
                    th(s[i], s[i + 1]) + th(d, s[i + 2]) + th(s[i + 1], s[i + 3]) -
                    th(s[i + 2], s[i + 3]);
            break;
    }
    // A missing edge shows up as inf (or inf - inf = nan).
    if (!std::isfinite(delta)) return std::nullopt;
    return delta;
}

std::vector<DestIndex> apply_insertion(std::span<const DestIndex> order, const InsertionPlan& plan) {
    std::vector<DestIndex> s(order.begin(), order.end());
    const auto i = plan.anchor;
    const auto at = [&](std::size_t pos) { return s.begin() + static_cast<std::ptrdiff_t>(pos); };
    switch (plan.action) {
        case InsertionAction::kInPlace:
            s.insert(at(i + 1), {plan.destination, s[i]});
            break;
        case InsertionAction::kInSequence:
            s.insert(at(i + 1), plan.destination);
            break;
        case InsertionAction::kSwapLeft:
            std::swap(s[i - 1], s[i]);
            s.insert(at(i + 1), plan.destination);
            break;
        case InsertionAction::kSwapRight:
            std::swap(s[i + 1], s[i + 2]);
            s.insert(at(i + 1), plan.destination);
            break;
        case InsertionAction::kSwapBoth:
            std::swap(s[i - 1], s[i]);
            std::swap(s[i + 1], s[i + 2]);
            s.insert(at(i + 1), plan.destination);
            break;
    }
    return s;
}

InsertionPlan best_insertion(const DestGraph& dg, const VisitSequence& seq, DestIndex d) {
    InsertionPlan best;
    best.destination = d;
    bool found = false;
    for (auto action : kAllActions) {
        for (std::size_t i = 0; i < seq.order.size(); ++i) {
            auto delta = insertion_cost(dg, seq.order, i, d, action);
            if (delta && (!found || *delta < best.delta_cost)) {
                best = {action, i, d, *delta};
                found = true;
            }
        }
    }
    if (!found) {
        throw NoInsertionError("destination " + std::to_string(d) +
                               " has no legal insertion in the current sequence");
    }
    return best;
}

VisitSequence refine(const DestGraph& dg, VisitSequence seq) {
    auto& o = seq.order;
    std::vector<std::size_t> count(dg.size(), 0);
    for (auto d : o) ++count[d];
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 1; p + 1 < o.size();) {
            const auto x = o[p];
            const bool removable = !dg.required(x) || count[x] > 1;
            const double bypass = dg.theta(o[p - 1], o[p + 1]);
            if (removable && bypass < kInfinity &&
                bypass <= dg.theta(o[p - 1], x) + dg.theta(x, o[p + 1])) {
                o.erase(o.begin() + static_cast<std::ptrdiff_t>(p));
                --count[x];
                changed = true;
            } else {
                ++p;
            }
        }
    }
    seq.total_cost = sequence_cost(dg, o);
    return seq;
}

VisitSequence eci_from(const DestGraph& dg, VisitSequence seq) {
    std::vector<bool> present(dg.size(), false);
    for (auto d : seq.order) present[d] = true;

    auto pick = [&](bool required_pass) -> std::optional<InsertionPlan> {
        std::vector<DestIndex> pending;
        for (DestIndex d = 0; d < dg.size(); ++d) {
            if (!present[d] && dg.required(d) == required_pass) pending.push_back(d);
        }
        std::vector<InsertionPlan> plans(pending.size());
        auto choice = kernels::argmin(pending.size(), [&](std::size_t j) {
            try {
                plans[j] = best_insertion(dg, seq, pending[j]);
                return plans[j].delta_cost;
            } catch (const NoInsertionError&) {
                return kInfinity;
            }
        });
        if (choice.index == kernels::kNoIndex) return std::nullopt;
        return plans[choice.index];
    };

    for (;;) {
        bool missing = false;
        for (DestIndex d = 0; d < dg.size(); ++d) missing = missing || (dg.required(d) && !present[d]);
        if (!missing) break;
        auto plan = pick(true);
        // Optional destinations are only inserted when they bridge to a stuck required one.
        if (!plan) plan = pick(false);
        if (!plan) throw NoInsertionError("remaining required destinations cannot be inserted");
        seq = make_sequence(dg, apply_insertion(seq.order, *plan));
        present[plan->destination] = true;
    }
    return refine(dg, std::move(seq));
}

VisitSequence eci(const DestGraph& dg) { return eci_from(dg, initial_sequence(dg)); }

VisitSequence mutate(const DestGraph& dg, const VisitSequence& parent, const GaConfig& cfg, Rng& rng) {
    const std::size_t len = parent.order.size();
    const std::size_t max_k = std::min(cfg.max_segments, len - 1);
    if (len <= 3 || cfg.min_segments > max_k || cfg.min_segments < 3) return parent;

    std::vector<std::size_t> positions(len - 1);
    std::iota(positions.begin(), positions.end(), std::size_t{1});
    for (std::size_t attempt = 0; attempt < cfg.retry_budget; ++attempt) {
        const auto k = std::uniform_int_distribution<std::size_t>(cfg.min_segments, max_k)(rng);
        // k - 1 distinct cut points from 1..len-1 by partial Fisher-Yates.
        for (std::size_t j = 0; j + 1 < k; ++j) {
            auto r = std::uniform_int_distribution<std::size_t>(j, positions.size() - 1)(rng);
            std::swap(positions[j], positions[r]);
        }
        std::vector<std::size_t> cuts(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(k - 1));
        std::sort(cuts.begin(), cuts.end());

        std::vector<std::pair<std::size_t, std::size_t>> middle;
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) middle.emplace_back(cuts[j], cuts[j + 1]);
        std::vector<std::vector<DestIndex>> pieces;
        for (auto [lo, hi] : middle) {
            pieces.emplace_back(parent.order.begin() + static_cast<std::ptrdiff_t>(lo),
                                parent.order.begin() + static_cast<std::ptrdiff_t>(hi));
            if (std::bernoulli_distribution(0.5)(rng)) std::reverse(pieces.back().begin(), pieces.back().end());
        }
        std::shuffle(pieces.begin(), pieces.end(), rng);

        std::vector<DestIndex> child(parent.order.begin(), parent.order.begin() + static_cast<std::ptrdiff_t>(cuts.front()));
        for (const auto& piece : pieces) child.insert(child.end(), piece.begin(), piece.end());
        child.insert(child.end(), parent.order.begin() + static_cast<std::ptrdiff_t>(cuts.back()),
                     parent.order.end());
        auto offspring = make_sequence(dg, std::move(child));
        if (offspring.total_cost < kInfinity) return offspring;
    }
    return parent;
}

VisitSequence crossover(const DestGraph& dg, const VisitSequence& a, const VisitSequence& b,
                        Rng& rng, std::size_t retry_budget) {
    if (a.order.size() < 2 || b.order.size() < 2 || a.order.front() != b.order.front() ||
        a.order.back() != b.order.back()) {
        throw InternalError("crossover parents disagree on endpoints");
    }
    const std::span<const DestIndex> inner_a(a.order.data() + 1, a.order.size() - 2);
    const std::span<const DestIndex> inner_b(b.order.data() + 1, b.order.size() - 2);
    if (inner_a.empty()) return b;

    std::vector<bool> in_slice(dg.size());
    for (std::size_t attempt = 0; attempt < retry_budget; ++attempt) {
        std::uniform_int_distribution<std::size_t> pos(0, inner_a.size() - 1);
        auto lo = pos(rng);
        auto hi = pos(rng);
        if (hi < lo) std::swap(lo, hi);
        std::vector<DestIndex> slice(inner_a.begin() + static_cast<std::ptrdiff_t>(lo),
                                     inner_a.begin() + static_cast<std::ptrdiff_t>(hi + 1));
        if (std::bernoulli_distribution(0.5)(rng)) std::reverse(slice.begin(), slice.end());

        std::fill(in_slice.begin(), in_slice.end(), false);
        for (auto d : slice) in_slice[d] = true;
        std::vector<DestIndex> fill;
        for (auto d : inner_b) {
            if (!in_slice[d]) fill.push_back(d);
        }
        const auto offset = std::uniform_int_distribution<std::size_t>(0, fill.size())(rng);

        std::vector<DestIndex> child;
        child.reserve(fill.size() + slice.size() + 2);
        child.push_back(a.order.front());
        child.insert(child.end(), fill.begin(), fill.begin() + static_cast<std::ptrdiff_t>(offset));
        child.insert(child.end(), slice.begin(), slice.end());
        child.insert(child.end(), fill.begin() + static_cast<std::ptrdiff_t>(offset), fill.end());
        child.push_back(a.order.back());
        auto offspring = make_sequence(dg, std::move(child));
        if (offspring.total_cost < kInfinity) return offspring;
    }
    return a.total_cost <= b.total_cost ? a : b;
}

std::vector<double> selection_probabilities(std::span<const double> costs) {
    std::vector<double> p(costs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        p[i] = 1.0 / costs[i];
        total += p[i];
    }
    for (auto& x : p) x /= total;
    return p;
}

namespace {

std::size_t hash_order(std::span<const DestIndex> order) {
    std::size_t h = order.size();
    for (auto d : order) h ^= d + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

VisitSequence ga(const DestGraph& dg, const VisitSequence& seed, const GaConfig& cfg) {
    Rng rng(cfg.rng_seed);
    VisitSequence best = seed;

    std::vector<VisitSequence> population;
    std::unordered_set<std::size_t> seen;
    for (std::size_t i = 0; i < cfg.mutation_count; ++i) {
        auto child = refine(dg, mutate(dg, seed, cfg, rng));
        if (!(child.total_cost < seed.total_cost)) continue;
        if (!seen.insert(hash_order(child.order)).second) continue;
        if (child.total_cost < best.total_cost) best = child;
        population.push_back(std::move(child));
    }
    if (population.empty()) return best;

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        std::vector<double> costs;
        for (const auto& p : population) costs.push_back(p.total_cost);
        const double worst = *std::max_element(costs.begin(), costs.end());
        const auto probs = selection_probabilities(costs);
        std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());

        std::vector<VisitSequence> next;
        seen.clear();
        for (std::size_t i = 0; i < cfg.crossover_count; ++i) {
            const auto& pa = population[pick(rng)];
            const auto& pb = population[pick(rng)];
            auto child = refine(dg, crossover(dg, pa, pb, rng, cfg.retry_budget));
            if (!(child.total_cost < worst)) continue;
            if (!seen.insert(hash_order(child.order)).second) continue;
            if (child.total_cost < best.total_cost) best = child;
            next.push_back(std::move(child));
        }
        if (!next.empty()) population = std::move(next);
    }
    return best;
}

SolveStages solve_stages(const DestGraph& dg, const GaConfig& cfg) {
    SolveStages s;
    s.initial = initial_sequence(dg);
    s.eci = eci_from(dg, s.initial);
    s.final_sequence = ga(dg, s.eci, cfg);
    return s;
}

VisitSequence solve(const DestGraph& dg, const GaConfig& cfg) { return solve_stages(dg, cfg).final_sequence; }

}  // namespace imomd::rtsp
