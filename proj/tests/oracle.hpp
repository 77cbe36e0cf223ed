// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numeric code paths.
#ifndef TIERROUTE_TESTS_ORACLE_HPP
#define TIERROUTE_TESTS_ORACLE_HPP

#include "tierroute/trace.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

struct Stats {
    double mu;
    double sigma;
};

// Plain two-pass mean and population variance in long double.
inline Stats stats(const std::vector<double>& p) {
    long double sum = 0;
    for (double v : p) sum += v;
    const long double mean = sum / static_cast<long double>(p.size());
    long double ss = 0;
    for (double v : p) ss += (v - mean) * (v - mean);
    return {static_cast<double>(mean), static_cast<double>(ss / static_cast<long double>(p.size()))};
}

// 0 = easy, 1 = medium, 2 = hard.
inline int region(double mu, double sigma, double alpha, double beta) {
    const bool confident = !(mu < alpha);
    const bool stable = !(sigma > beta);
    if (confident && stable) return 0;
    if (confident) return 1;
    return 2;
}

struct Costs {
    double lambda_m, lambda_e, o_e, o_c, gamma;
    int m, n;
};

inline double reward(const tierroute::SampleTrace& r, const Stats& s, double alpha, double beta, const Costs& c) {
    switch (region(s.mu, s.sigma, alpha, beta)) {
        case 0: return r.tier_conf.values[0] - c.lambda_m * c.m;
        case 1: return r.tier_conf.values[1] - c.lambda_e * c.n - c.o_e;
        default: return r.tier_conf.values[2] - c.o_c - c.gamma;
    }
}

struct Cell {
    double alpha, beta, value;
};

struct Search {
    double alpha = 0, beta = 0, value = -INFINITY;
    std::vector<Cell> table;
};

// Exhaustive search; the first maximum in (alpha, beta) ascending order wins.
inline Search exhaustive(const tierroute::TraceSet& set, const std::vector<double>& alphas,
                         const std::vector<double>& betas, const Costs& c) {
    std::vector<const tierroute::SampleTrace*> val;
    std::vector<Stats> st;
    for (const auto& r : set.records) {
        if (r.split != tierroute::Split::validation) continue;
        val.push_back(&r);
        st.push_back(stats(*r.epoch_true_probs));
    }
    Search out;
    for (double a : alphas) {
        for (double b : betas) {
            long double sum = 0;
            for (std::size_t i = 0; i < val.size(); ++i) sum += reward(*val[i], st[i], a, b, c);
            const double v = static_cast<double>(sum / static_cast<long double>(val.size()));
            out.table.push_back({a, b, v});
        }
    }
    for (const auto& cell : out.table) {
        if (cell.value > out.value) {
            out.value = cell.value;
            out.alpha = cell.alpha;
            out.beta = cell.beta;
        }
    }
    return out;
}

// Mean of a list of D-vectors, coordinate by coordinate.
inline std::vector<double> mean(const std::vector<const Eigen::VectorXd*>& points) {
    if (points.empty()) return {};
    std::vector<long double> acc(static_cast<std::size_t>(points.front()->size()), 0.0L);
    for (const auto* p : points) {
        for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += (*p)[static_cast<Eigen::Index>(d)];
    }
    std::vector<double> out(acc.size());
    for (std::size_t d = 0; d < acc.size(); ++d) out[d] = static_cast<double>(acc[d] / points.size());
    return out;
}

}  // namespace oracle

#endif  // TIERROUTE_TESTS_ORACLE_HPP
