#include "tierroute/router.hpp"

#include "tierroute/centroid.hpp"

#include <spdlog/spdlog.h>

#include <limits>
#include <ostream>

namespace tierroute {

std::string_view to_string(RouterMode mode) {
    return mode == RouterMode::fixed ? "fixed" : "adaptive";
}

RouterMode parse_router_mode(std::string_view s) {
    if (s == "fixed") return RouterMode::fixed;
    if (s == "adaptive") return RouterMode::adaptive;
    throw Error("unknown router mode '" + std::string(s) + "'");
}

RouterState RouterState::from_pools(const PoolModel& pools, RouterMode mode) {
    RouterState state;
    state.mode = mode;
    state.centroids = pools.centroids;
    state.counts = pools.counts;
    for (Pool p : kPools) {
        if (!state.centroid(p)) {
            spdlog::warn("pool '{}' is empty; its tier is unreachable by routing", to_string(p));
        }
    }
    validate(state);
    return state;
}

int RouterState::dim() const {
    for (const auto& c : centroids) {
        if (c) return static_cast<int>(c->size());
    }
    return 0;
}

void validate(const RouterState& state) {
    int dim = -1;
    bool any = false;
    for (Pool p : kPools) {
        const auto& c = state.centroid(p);
        if (!c) continue;
        any = true;
        if (state.count(p) == 0) {
            throw Error("router: present centroid for pool '" + std::string(to_string(p)) + "' has count 0");
        }
        if (dim >= 0 && c->size() != dim) throw Error("router: centroid dimensions disagree");
        dim = static_cast<int>(c->size());
    }
    if (!any) throw Error("router: all centroids absent");
}

RoutingDecision route_one(RouterState& state, const SampleTrace& sample, const TierCosts& costs) {
    RoutingDecision decision;
    decision.id = sample.id;

    std::optional<Pool> best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (Pool p : kPools) {
        const auto& c = state.centroid(p);
        if (!c) continue;
        if (c->size() != sample.embedding.size()) {
            throw Error("router: embedding dimension mismatch for '" + sample.id + "'");
        }
        const double d = euclidean_distance(sample.embedding, *c);
        decision.distances[index(p)] = d;
        if (!best || d < best_distance) {
            best = p;
            best_distance = d;
        }
    }
    if (!best) throw Error("router: all centroids absent");

    decision.tier = tier_for(*best);
    decision.cost = costs[decision.tier];
    decision.correct = sample.tier_correct[decision.tier];

    if (state.mode == RouterMode::adaptive) {
        auto& c = *state.centroids[index(*best)];
        running_mean_update(c, sample.embedding, state.counts[index(*best)]);
        ++state.counts[index(*best)];
    }
    return decision;
}

StreamResult route_stream(RouterState state, const std::vector<const SampleTrace*>& stream,
                          const TierCosts& costs) {
    validate(state);
    StreamResult result;
    result.decisions.reserve(stream.size());
    for (const SampleTrace* s : stream) result.decisions.push_back(route_one(state, *s, costs));
    result.final_state = std::move(state);
    return result;
}

void write_decisions_header(std::ostream& out, bool with_policy) {
    if (with_policy) out << "policy,";
    out << "id,tier,d_easy,d_medium,d_hard,cost,correct\n";
}

void write_decisions(const std::vector<RoutingDecision>& decisions, std::ostream& out,
                     const std::string& policy) {
    for (const auto& d : decisions) {
        if (!policy.empty()) out << policy << ',';
        out << d.id << ',' << to_string(d.tier);
        for (const auto& dist : d.distances) {
            out << ',';
            if (dist) out << format_double(*dist);
        }
        out << ',' << format_double(d.cost) << ',' << (d.correct ? "true" : "false") << '\n';
    }
}

}  // namespace tierroute
