#include "tierroute/harness.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <random>

namespace tierroute {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<const SampleTrace*> test_stream(const TraceSet& traces) {
    auto stream = traces.split(Split::test);
    if (stream.empty()) throw Error("experiment: traces have no test split");
    return stream;
}

RoutingDecision fixed_decision(const SampleTrace& s, Tier tier, const TierCosts& costs) {
    RoutingDecision d;
    d.id = s.id;
    d.tier = tier;
    d.cost = costs[tier];
    d.correct = s.tier_correct[tier];
    return d;
}

Tier cheapest_correct(const SampleTrace& s, const TierCosts& costs) {
    std::optional<Tier> best;
    for (Tier t : kTiers) {
        if (!s.tier_correct[t]) continue;
        if (!best || costs[t] < costs[*best]) best = t;
    }
    return best.value_or(Tier::cloud);
}

double pct_change(double value, double baseline) {
    if (baseline == 0.0) return 0.0;
    return (value - baseline) / baseline * 100.0;
}

ExperimentResult run_baseline(const TraceSet& traces, const TierCosts& tier_costs, const Policy& policy) {
    ExperimentResult result;
    result.policy = policy;
    const auto stream = test_stream(traces);
    result.decisions.reserve(stream.size());

    std::mt19937_64 rng(policy.seed);
    std::uniform_int_distribution<int> pick(0, 2);
    for (const SampleTrace* s : stream) {
        Tier tier = Tier::cloud;
        switch (policy.kind) {
            case Policy::Kind::cloud_only: tier = Tier::cloud; break;
            case Policy::Kind::edge_only: tier = Tier::edge; break;
            case Policy::Kind::mobile_only: tier = Tier::mobile; break;
            case Policy::Kind::random_uniform: tier = static_cast<Tier>(pick(rng)); break;
            case Policy::Kind::oracle_cheapest_correct: tier = cheapest_correct(*s, tier_costs); break;
            default: throw Error("run_baseline: not a baseline policy");
        }
        result.decisions.push_back(fixed_decision(*s, tier, tier_costs));
    }
    result.metrics = summarize(result.decisions, tier_costs);
    return result;
}

RouterMode mode_of(const Policy& policy) {
    return policy.kind == Policy::Kind::cartography_fixed ? RouterMode::fixed : RouterMode::adaptive;
}

}  // namespace

Policy Policy::cartography(RouterMode mode) {
    return {mode == RouterMode::fixed ? Kind::cartography_fixed : Kind::cartography_adaptive, 0};
}

Policy Policy::single(Tier tier) {
    switch (tier) {
        case Tier::mobile: return {Kind::mobile_only, 0};
        case Tier::edge: return {Kind::edge_only, 0};
        case Tier::cloud: return {Kind::cloud_only, 0};
    }
    return {Kind::cloud_only, 0};
}

Policy Policy::random(std::uint64_t seed) { return {Kind::random_uniform, seed}; }
Policy Policy::oracle() { return {Kind::oracle_cheapest_correct, 0}; }

std::string Policy::name() const {
    switch (kind) {
        case Kind::cartography_fixed: return "cartography_fixed";
        case Kind::cartography_adaptive: return "cartography_adaptive";
        case Kind::cloud_only: return "cloud_only";
        case Kind::edge_only: return "edge_only";
        case Kind::mobile_only: return "mobile_only";
        case Kind::random_uniform: return "random_uniform";
        case Kind::oracle_cheapest_correct: return "oracle_cheapest_correct";
    }
    return "?";
}

Policy parse_policy(std::string_view name, std::uint64_t seed) {
    if (name == "cartography_fixed") return Policy::cartography(RouterMode::fixed);
    if (name == "cartography_adaptive") return Policy::cartography(RouterMode::adaptive);
    if (name == "cloud_only") return Policy::single(Tier::cloud);
    if (name == "edge_only") return Policy::single(Tier::edge);
    if (name == "mobile_only") return Policy::single(Tier::mobile);
    if (name == "random_uniform") return Policy::random(seed);
    if (name == "oracle_cheapest_correct") return Policy::oracle();
    throw Error("unknown policy '" + std::string(name) + "'");
}

StreamMetrics summarize(const std::vector<RoutingDecision>& decisions, const TierCosts& costs) {
    StreamMetrics m;
    m.stream_length = decisions.size();
    std::size_t correct = 0;
    for (const auto& d : decisions) {
        m.total_cost += d.cost;
        ++m.tier_counts[d.tier];
        if (d.correct) ++correct;
    }
    if (!decisions.empty()) {
        const double n = static_cast<double>(decisions.size());
        m.accuracy = static_cast<double>(correct) / n;
        // Each tier has a fixed price, so the mean is a mix of tier costs; this keeps single-tier
        // policies exact instead of inheriting the rounding of the running total.
        for (Tier t : kTiers) m.mean_cost += static_cast<double>(m.tier_counts[t]) / n * costs[t];
    }
    m.cost_vs_baseline_pct = pct_change(m.mean_cost, costs.cloud);
    return m;
}

ExperimentResult run_with_pools(const TraceSet& traces, const CostParams& costs, const PoolModel& pools,
                                const Policy& policy) {
    validate(costs);
    const TierCosts tier_costs(costs);
    if (!policy.uses_cartography()) return run_baseline(traces, tier_costs, policy);

    if (pools.dim != traces.header.dim) throw Error("experiment: pool dimension does not match traces");
    ExperimentResult result;
    result.policy = policy;
    StreamResult routed = route_stream(RouterState::from_pools(pools, mode_of(policy)), test_stream(traces), tier_costs);
    result.decisions = std::move(routed.decisions);
    result.final_state = std::move(routed.final_state);
    result.metrics = summarize(result.decisions, tier_costs);
    result.metrics.pool_proportions = std::array<double, 3>{
        pools.proportion(Pool::easy), pools.proportion(Pool::medium), pools.proportion(Pool::hard)};
    result.pools = pools;
    return result;
}

ExperimentResult run_experiment(const TraceSet& traces, const CostParams& costs, const ThresholdGrid& grid,
                                const Policy& policy) {
    validate(costs);
    if (!policy.uses_cartography()) return run_baseline(traces, TierCosts(costs), policy);

    const CartographyStats stats = compute_stats(traces);
    if (stats.size() == 0) throw Error("experiment: traces have no validation split");
    ThresholdChoice choice = tune_thresholds(traces, stats, grid, costs);
    const PoolModel pools = build_pools(traces, stats, choice.alpha, choice.beta);
    ExperimentResult result = run_with_pools(traces, costs, pools, policy);
    result.thresholds = std::move(choice);
    return result;
}

std::vector<ComparisonRow> compare_policies(const TraceSet& traces, const CostParams& costs,
                                            const ThresholdGrid& grid, const std::vector<Policy>& policies) {
    std::vector<ComparisonRow> rows;
    rows.reserve(policies.size());
    for (const Policy& p : policies) {
        const ExperimentResult r = run_experiment(traces, costs, grid, p);
        rows.push_back({p.name(), r.metrics.accuracy, r.metrics.mean_cost, r.metrics.cost_vs_baseline_pct});
    }
    return rows;
}

std::string_view to_string(CostKnob knob) {
    switch (knob) {
        case CostKnob::lambda_m: return "lambda_m";
        case CostKnob::lambda_e: return "lambda_e";
        case CostKnob::o_c: return "o_c";
    }
    return "?";
}

CostKnob parse_cost_knob(std::string_view s) {
    if (s == "lambda_m") return CostKnob::lambda_m;
    if (s == "lambda_e") return CostKnob::lambda_e;
    if (s == "o_c") return CostKnob::o_c;
    throw Error("cannot sweep '" + std::string(s) + "'; expected lambda_m, lambda_e or o_c");
}

CostParams with_cost(CostParams costs, CostKnob knob, double value) {
    switch (knob) {
        case CostKnob::lambda_m: costs.lambda_m = value; break;
        case CostKnob::lambda_e: costs.lambda_e = value; break;
        case CostKnob::o_c: costs.o_c = value; break;
    }
    return costs;
}

std::vector<SweepRow> cost_sweep(const TraceSet& traces, const CostParams& costs, const ThresholdGrid& grid,
                                 CostKnob vary, const std::vector<double>& values, const Policy& policy) {
    for (double v : values) {
        if (!(std::isfinite(v) && v >= 0.0)) throw Error("cost sweep: values must be finite and >= 0");
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        const CostParams point = with_cost(costs, vary, v);
        const ExperimentResult r = run_experiment(traces, point, grid, policy);
        SweepRow row;
        row.value = v;
        if (r.thresholds) {
            row.alpha = r.thresholds->alpha;
            row.beta = r.thresholds->beta;
        }
        row.accuracy = r.metrics.accuracy;
        row.mean_cost = r.metrics.mean_cost;
        row.cost_vs_cloud_pct = r.metrics.cost_vs_baseline_pct;
        for (Tier t : kTiers) row.fractions[t] = r.metrics.fraction(t);
        rows.push_back(row);
    }
    return rows;
}

std::string metrics_to_json(const std::vector<ExperimentResult>& results, const CostParams& costs) {
    const TierCosts tier_costs(costs);
    ordered_json doc;
    doc["kind"] = "tierroute-metrics";
    doc["version"] = 1;
    doc["baseline"] = "cloud_only";
    ordered_json tc;
    for (Tier t : kTiers) tc[std::string(to_string(t))] = tier_costs[t];
    doc["tier_costs"] = std::move(tc);
    doc["lambda_unit"] = costs.lambda_unit;

    ordered_json policies = ordered_json::array();
    for (const auto& r : results) {
        ordered_json p;
        p["policy"] = r.policy.name();
        if (r.policy.kind == Policy::Kind::random_uniform) p["seed"] = r.policy.seed;
        p["stream_length"] = r.metrics.stream_length;
        p["accuracy"] = r.metrics.accuracy;
        p["mean_cost"] = r.metrics.mean_cost;
        p["mean_cost_lambda"] = r.metrics.mean_cost / costs.lambda_unit;
        p["total_cost"] = r.metrics.total_cost;
        p["cost_vs_baseline_pct"] = r.metrics.cost_vs_baseline_pct;
        ordered_json counts;
        for (Tier t : kTiers) counts[std::string(to_string(t))] = r.metrics.tier_counts[t];
        p["tier_counts"] = std::move(counts);
        if (r.pools) {
            p["alpha"] = r.pools->alpha;
            p["beta"] = r.pools->beta;
        }
        if (r.metrics.pool_proportions) {
            ordered_json props;
            for (Pool pool : kPools) props[std::string(to_string(pool))] = (*r.metrics.pool_proportions)[index(pool)];
            p["pool_proportions"] = std::move(props);
        }
        if (r.final_state) {
            ordered_json counts_after;
            for (Pool pool : kPools) counts_after[std::string(to_string(pool))] = r.final_state->count(pool);
            p["final_pool_counts"] = std::move(counts_after);
        }
        policies.push_back(std::move(p));
    }
    doc["policies"] = std::move(policies);
    return doc.dump(2) + "\n";
}

void write_comparison(const std::vector<ComparisonRow>& rows, std::ostream& out) {
    out << "policy,accuracy,mean_cost,cost_vs_cloud_pct\n";
    for (const auto& r : rows) {
        out << r.policy << ',' << format_double(r.accuracy) << ',' << format_double(r.mean_cost) << ','
            << format_double(r.cost_vs_cloud_pct) << '\n';
    }
}

void write_sweep(const std::vector<SweepRow>& rows, CostKnob vary, std::ostream& out) {
    out << "vary,value,alpha,beta,accuracy,mean_cost,cost_vs_cloud_pct,frac_mobile,frac_edge,frac_cloud\n";
    for (const auto& r : rows) {
        out << to_string(vary) << ',' << format_double(r.value) << ',' << format_double(r.alpha) << ','
            << format_double(r.beta) << ',' << format_double(r.accuracy) << ',' << format_double(r.mean_cost)
            << ',' << format_double(r.cost_vs_cloud_pct) << ',' << format_double(r.fractions[Tier::mobile])
            << ',' << format_double(r.fractions[Tier::edge]) << ',' << format_double(r.fractions[Tier::cloud])
            << '\n';
    }
}

}  // namespace tierroute
