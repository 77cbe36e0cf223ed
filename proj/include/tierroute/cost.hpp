#ifndef TIERROUTE_COST_HPP
#define TIERROUTE_COST_HPP

#include "tierroute/cartography.hpp"

#include <iosfwd>
#include <vector>

namespace tierroute {

// Absolute costs. The per-layer edge cost is the base unit lambda; defaults are
// the usual multiples of it (lambda_m = 1.5, o_e = 2.5, o_c = 3, gamma = 20).
struct CostParams {
    double lambda_unit = 0.01;
    double lambda_m = 0.015;  // per-layer processing on mobile
    double lambda_e = 0.01;   // per-layer processing on edge
    double o_e = 0.025;       // mobile -> edge offload
    double o_c = 0.03;        // mobile -> cloud offload
    double gamma = 0.20;      // cloud platform charge per sample
    int m = 4;
    int n = 6;
    int l = 12;

    // Builds params from multiples of `unit`.
    static CostParams from_multiples(double unit, double lambda_m, double lambda_e, double o_e,
                                     double o_c, double gamma, int m, int n, int l);

    friend bool operator==(const CostParams&, const CostParams&) = default;
};

void validate(const CostParams& costs);

// Total cost charged for a sample inferred on each tier.
struct TierCosts {
    double mobile = 0.0;  // lambda_m * m
    double edge = 0.0;    // lambda_e * n + o_e
    double cloud = 0.0;   // o_c + gamma

    explicit TierCosts(const CostParams& c)
        : mobile(c.lambda_m * c.m), edge(c.lambda_e * c.n + c.o_e), cloud(c.o_c + c.gamma) {}

    double operator[](Tier t) const {
        switch (t) {
            case Tier::mobile: return mobile;
            case Tier::edge: return edge;
            case Tier::cloud: return cloud;
        }
        return cloud;
    }
};

struct ThresholdGrid {
    std::vector<double> alpha{0.55, 0.6, 0.65, 0.7, 0.8};
    std::vector<double> beta{0.05, 0.08, 0.11, 0.14, 0.17};

    friend bool operator==(const ThresholdGrid&, const ThresholdGrid&) = default;
};

void validate(const ThresholdGrid& grid);

// Reward of inferring one sample where its data-map region sends it.
double reward(const SampleStats& stats, const PerTier<double>& tier_conf, double alpha, double beta,
              const CostParams& costs);

// Empirical mean reward over the validation split.
double expected_reward(const TraceSet& set, const CartographyStats& stats, double alpha, double beta,
                       const CostParams& costs);

struct RewardCell {
    double alpha = 0.0;
    double beta = 0.0;
    double expected_reward = 0.0;
};

struct ThresholdChoice {
    double alpha = 0.0;
    double beta = 0.0;
    double expected_reward = 0.0;
    std::vector<RewardCell> table;  // alpha-major, both ascending
};

// Exhaustive search over grid.alpha x grid.beta. Ties go to the smallest alpha,
// then the smallest beta.
ThresholdChoice tune_thresholds(const TraceSet& set, const CartographyStats& stats,
                                const ThresholdGrid& grid, const CostParams& costs);

void write_reward_table(const ThresholdChoice& choice, std::ostream& out);

}  // namespace tierroute

#endif  // TIERROUTE_COST_HPP
