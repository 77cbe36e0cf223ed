#ifndef TIERROUTE_ROUTER_HPP
#define TIERROUTE_ROUTER_HPP

#include "tierroute/cartography.hpp"
#include "tierroute/cost.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tierroute {

enum class RouterMode { fixed, adaptive };

std::string_view to_string(RouterMode mode);
RouterMode parse_router_mode(std::string_view s);

// Nearest-centroid router over the three pool averages. Only the Euclidean
// metric is supported.
struct RouterState {
    std::array<std::optional<Vector>, 3> centroids;  // indexed by Pool
    std::array<std::size_t, 3> counts{};
    RouterMode mode = RouterMode::adaptive;

    static RouterState from_pools(const PoolModel& pools, RouterMode mode);

    int dim() const;
    const std::optional<Vector>& centroid(Pool p) const { return centroids[index(p)]; }
    std::size_t count(Pool p) const { return counts[index(p)]; }
};

// Throws if a present centroid has count 0, dimensions disagree, or no centroid is present.
void validate(const RouterState& state);

struct RoutingDecision {
    std::string id;
    Tier tier = Tier::cloud;
    // Euclidean distance to each pool centroid; empty for absent centroids or
    // for policies that do not measure distance.
    std::array<std::optional<double>, 3> distances;
    double cost = 0.0;
    bool correct = false;
};

// Routes one embedding and, in adaptive mode, folds it into the winning
// centroid. Equal distances go to the cheaper tier (mobile, then edge, then cloud).
RoutingDecision route_one(RouterState& state, const SampleTrace& sample, const TierCosts& costs);

struct StreamResult {
    std::vector<RoutingDecision> decisions;
    RouterState final_state;
};

StreamResult route_stream(RouterState state, const std::vector<const SampleTrace*>& stream,
                          const TierCosts& costs);

// Columns: id,tier,d_easy,d_medium,d_hard,cost,correct. With a non-empty
// policy name a leading "policy" column is added.
void write_decisions_header(std::ostream& out, bool with_policy);
void write_decisions(const std::vector<RoutingDecision>& decisions, std::ostream& out,
                     const std::string& policy = {});

}  // namespace tierroute

#endif  // TIERROUTE_ROUTER_HPP
