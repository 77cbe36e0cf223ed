#ifndef TIERROUTE_HARNESS_HPP
#define TIERROUTE_HARNESS_HPP

#include "tierroute/router.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tierroute {

struct Policy {
    enum class Kind {
        cartography_fixed,
        cartography_adaptive,
        cloud_only,
        edge_only,
        mobile_only,
        random_uniform,
        oracle_cheapest_correct,
    };

    Kind kind = Kind::cartography_adaptive;
    std::uint64_t seed = 0;  // random_uniform only

    static Policy cartography(RouterMode mode);
    static Policy single(Tier tier);
    static Policy random(std::uint64_t seed);
    static Policy oracle();

    bool uses_cartography() const {
        return kind == Kind::cartography_fixed || kind == Kind::cartography_adaptive;
    }
    std::string name() const;

    friend bool operator==(const Policy&, const Policy&) = default;
};

Policy parse_policy(std::string_view name, std::uint64_t seed);

struct StreamMetrics {
    std::size_t stream_length = 0;
    double accuracy = 0.0;
    double mean_cost = 0.0;
    double total_cost = 0.0;
    PerTier<std::size_t> tier_counts;
    // Signed percentage change of mean_cost relative to cloud_only.
    double cost_vs_baseline_pct = 0.0;
    // Validation pool proportions (cartography policies only).
    std::optional<std::array<double, 3>> pool_proportions;

    double fraction(Tier t) const {
        return stream_length == 0 ? 0.0
                                  : static_cast<double>(tier_counts[t]) / static_cast<double>(stream_length);
    }
};

StreamMetrics summarize(const std::vector<RoutingDecision>& decisions, const TierCosts& costs);

struct ExperimentResult {
    Policy policy;
    StreamMetrics metrics;
    std::vector<RoutingDecision> decisions;
    // Cartography policies only.
    std::optional<ThresholdChoice> thresholds;
    std::optional<PoolModel> pools;
    std::optional<RouterState> final_state;
};

// Full pipeline: cartography policies compute stats, tune thresholds, build
// pools and route the test split; baseline policies assign tiers directly.
ExperimentResult run_experiment(const TraceSet& traces, const CostParams& costs,
                                const ThresholdGrid& grid, const Policy& policy);

// Same, reusing already-built pools for cartography policies.
ExperimentResult run_with_pools(const TraceSet& traces, const CostParams& costs,
                                const PoolModel& pools, const Policy& policy);

struct ComparisonRow {
    std::string policy;
    double accuracy = 0.0;
    double mean_cost = 0.0;
    double cost_vs_cloud_pct = 0.0;
};

std::vector<ComparisonRow> compare_policies(const TraceSet& traces, const CostParams& costs,
                                            const ThresholdGrid& grid, const std::vector<Policy>& policies);

enum class CostKnob { lambda_m, lambda_e, o_c };

std::string_view to_string(CostKnob knob);
CostKnob parse_cost_knob(std::string_view s);
CostParams with_cost(CostParams costs, CostKnob knob, double value);

struct SweepRow {
    double value = 0.0;  // absolute cost
    double alpha = 0.0;
    double beta = 0.0;
    double accuracy = 0.0;
    double mean_cost = 0.0;
    double cost_vs_cloud_pct = 0.0;
    PerTier<double> fractions;
};

// Re-tunes thresholds and re-routes once per value of the chosen cost.
std::vector<SweepRow> cost_sweep(const TraceSet& traces, const CostParams& costs, const ThresholdGrid& grid,
                                 CostKnob vary, const std::vector<double>& values, const Policy& policy);

std::string metrics_to_json(const std::vector<ExperimentResult>& results, const CostParams& costs);
void write_comparison(const std::vector<ComparisonRow>& rows, std::ostream& out);
void write_sweep(const std::vector<SweepRow>& rows, CostKnob vary, std::ostream& out);

}  // namespace tierroute

#endif  // TIERROUTE_HARNESS_HPP
