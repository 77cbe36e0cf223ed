#include "tierroute/cost.hpp"

#include <cmath>
#include <ostream>

namespace tierroute {
namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

struct ValidationView {
    std::vector<const SampleTrace*> records;
    std::vector<SampleStats> stats;
};

ValidationView collect(const TraceSet& set, const CartographyStats& stats) {
    ValidationView view;
    view.records = set.split(Split::validation);
    if (view.records.empty()) throw Error("expected_reward: empty validation split");
    view.stats.reserve(view.records.size());
    for (const SampleTrace* r : view.records) {
        const auto s = stats.find(r->id);
        if (!s) throw Error("expected_reward: no cartography stats for '" + r->id + "'");
        view.stats.push_back(*s);
    }
    return view;
}

double mean_reward(const ValidationView& view, double alpha, double beta, const CostParams& costs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < view.records.size(); ++i) {
        sum += reward(view.stats[i], view.records[i]->tier_conf, alpha, beta, costs);
    }
    return sum / static_cast<double>(view.records.size());
}

}  // namespace

CostParams CostParams::from_multiples(double unit, double lambda_m, double lambda_e, double o_e,
                                      double o_c, double gamma, int m, int n, int l) {
    CostParams c;
    c.lambda_unit = unit;
    c.lambda_m = lambda_m * unit;
    c.lambda_e = lambda_e * unit;
    c.o_e = o_e * unit;
    c.o_c = o_c * unit;
    c.gamma = gamma * unit;
    c.m = m;
    c.n = n;
    c.l = l;
    return c;
}

void validate(const CostParams& c) {
    if (!(std::isfinite(c.lambda_unit) && c.lambda_unit > 0.0)) throw Error("costs: lambda_unit must be > 0");
    if (!finite_nonneg(c.lambda_m) || !finite_nonneg(c.lambda_e) || !finite_nonneg(c.o_e) ||
        !finite_nonneg(c.o_c) || !finite_nonneg(c.gamma)) {
        throw Error("costs: all costs must be finite and >= 0");
    }
    if (!(1 <= c.m && c.m <= c.n && c.n <= c.l)) throw Error("costs: layer counts must satisfy 1 <= m <= n <= l");
}

void validate(const ThresholdGrid& grid) {
    if (grid.alpha.empty() || grid.beta.empty()) throw Error("threshold grid: empty");
    for (std::size_t i = 0; i < grid.alpha.size(); ++i) {
        const double a = grid.alpha[i];
        if (!(std::isfinite(a) && a >= 0.0 && a <= 1.0)) throw Error("threshold grid: alpha must lie in [0,1]");
        if (i > 0 && !(grid.alpha[i - 1] < a)) throw Error("threshold grid: alpha must be strictly increasing");
    }
    for (std::size_t i = 0; i < grid.beta.size(); ++i) {
        const double b = grid.beta[i];
        if (!finite_nonneg(b)) throw Error("threshold grid: beta must be >= 0");
        if (i > 0 && !(grid.beta[i - 1] < b)) throw Error("threshold grid: beta must be strictly increasing");
    }
}

double reward(const SampleStats& stats, const PerTier<double>& conf, double alpha, double beta,
              const CostParams& costs) {
    switch (classify(stats.mu, stats.sigma, alpha, beta)) {
        case Pool::easy: return conf[Tier::mobile] - costs.lambda_m * costs.m;
        case Pool::medium: return conf[Tier::edge] - costs.lambda_e * costs.n - costs.o_e;
        case Pool::hard: return conf[Tier::cloud] - costs.o_c - costs.gamma;
    }
    return 0.0;
}

double expected_reward(const TraceSet& set, const CartographyStats& stats, double alpha, double beta,
                       const CostParams& costs) {
    return mean_reward(collect(set, stats), alpha, beta, costs);
}

ThresholdChoice tune_thresholds(const TraceSet& set, const CartographyStats& stats,
                                const ThresholdGrid& grid, const CostParams& costs) {
    validate(grid);
    const ValidationView view = collect(set, stats);

    ThresholdChoice choice;
    choice.table.reserve(grid.alpha.size() * grid.beta.size());
    bool first = true;
    for (double a : grid.alpha) {
        for (double b : grid.beta) {
            const double value = mean_reward(view, a, b, costs);
            choice.table.push_back({a, b, value});
            // Strict comparison in ascending order keeps the smallest (alpha, beta) on ties.
            if (first || value > choice.expected_reward) {
                choice.alpha = a;
                choice.beta = b;
                choice.expected_reward = value;
                first = false;
            }
        }
    }
    return choice;
}

void write_reward_table(const ThresholdChoice& choice, std::ostream& out) {
    out << "alpha,beta,expected_reward\n";
    for (const auto& cell : choice.table) {
        out << format_double(cell.alpha) << ',' << format_double(cell.beta) << ','
            << format_double(cell.expected_reward) << '\n';
    }
}

}  // namespace tierroute
