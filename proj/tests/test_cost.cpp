#include "tierroute/cost.hpp"
#include "tierroute/synthetic.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace tierroute;

namespace {

oracle::Costs oracle_costs(const CostParams& c) { return {c.lambda_m, c.lambda_e, c.o_e, c.o_c, c.gamma, c.m, c.n}; }

TraceSet validation_only(std::uint64_t seed, std::size_t n) {
    SyntheticSpec spec = graded_benchmark(seed);
    spec.validation_count = n;
    spec.test_count = 0;
    return generate_synthetic(spec);
}

}  // namespace

TEST_CASE("default costs keep the documented lambda multiples") {
    const CostParams c;
    CHECK(c.lambda_m == doctest::Approx(1.5 * c.lambda_unit));
    CHECK(c.lambda_e == doctest::Approx(c.lambda_unit));
    CHECK(c.o_e == doctest::Approx(2.5 * c.lambda_unit));
    CHECK(c.o_c == doctest::Approx(3.0 * c.lambda_unit));
    const TierCosts t(c);
    CHECK(t.mobile == doctest::Approx(6.0 * c.lambda_unit));
    CHECK(t.edge == doctest::Approx(8.5 * c.lambda_unit));
    CHECK(t.mobile < t.edge);
    CHECK(t.edge < t.cloud);
    CHECK(c == CostParams::from_multiples(0.01, 1.5, 1.0, 2.5, 3.0, 20.0, 4, 6, 12));
}

TEST_CASE("cost and grid validation") {
    CostParams c;
    c.m = 7;  // m > n
    CHECK_THROWS_AS(validate(c), Error);
    c = CostParams{};
    c.lambda_unit = 0.0;
    CHECK_THROWS_AS(validate(c), Error);
    c = CostParams{};
    c.o_e = -1.0;
    CHECK_THROWS_AS(validate(c), Error);

    ThresholdGrid g;
    CHECK_NOTHROW(validate(g));
    g.alpha = {0.6, 0.6};
    CHECK_THROWS_AS(validate(g), Error);
    g = ThresholdGrid{};
    g.beta.clear();
    CHECK_THROWS_AS(validate(g), Error);
    g = ThresholdGrid{};
    g.alpha = {1.2};
    CHECK_THROWS_AS(validate(g), Error);
}

TEST_CASE("reward on the three worked cases") {
    CostParams c;
    c.lambda_unit = 0.01;
    c.lambda_m = 0.015;
    c.m = 4;
    c.lambda_e = 0.01;
    c.n = 6;
    c.o_e = 0.025;
    c.o_c = 0.03;
    c.gamma = 0.06;

    // easy: 0.95 - 0.015 * 4
    CHECK(reward({0.9, 0.05}, {{0.95, 0.0, 0.0}}, 0.7, 0.1, c) == doctest::Approx(0.89).epsilon(1e-14));
    // medium: 0.90 - 0.01 * 6 - 0.025
    CHECK(reward({0.9, 0.2}, {{0.0, 0.90, 0.0}}, 0.7, 0.1, c) == doctest::Approx(0.815).epsilon(1e-14));
    // hard: 0.97 - 0.03 - 0.06
    CHECK(reward({0.3, 0.01}, {{0.0, 0.0, 0.97}}, 0.7, 0.1, c) == doctest::Approx(0.88).epsilon(1e-14));
}

TEST_CASE("expected_reward of a single sample is its reward") {
    TraceSet set = validation_only(3, 1);
    const CartographyStats stats = compute_stats(set);
    const CostParams c;
    const auto s = stats.at(0);
    CHECK(expected_reward(set, stats, 0.6, 0.08, c) == reward(s, set.records[0].tier_conf, 0.6, 0.08, c));
}

TEST_CASE("expected_reward when every sample is hard") {
    TraceSet set = validation_only(4, 50);
    for (auto& r : set.records) *r.epoch_true_probs = std::vector<double>(5, 0.3);
    const CartographyStats stats = compute_stats(set);
    const CostParams c;
    double sum = 0.0;
    for (const auto& r : set.records) sum += r.tier_conf[Tier::cloud] - c.o_c - c.gamma;
    CHECK(expected_reward(set, stats, 0.8, 0.05, c) == doctest::Approx(sum / 50.0).epsilon(1e-14));
}

TEST_CASE("expected_reward matches a brute-force mean on 200 samples") {
    const TraceSet set = validation_only(5, 200);
    const CartographyStats stats = compute_stats(set);
    const CostParams c;
    const auto ref = oracle::exhaustive(set, {0.55, 0.7}, {0.05, 0.14}, oracle_costs(c));
    for (const auto& cell : ref.table) {
        CHECK(std::abs(expected_reward(set, stats, cell.alpha, cell.beta, c) - cell.value) <= 1e-12);
    }
}

TEST_CASE("expected_reward needs validation data") {
    TraceSet set = validation_only(5, 10);
    const CartographyStats stats = compute_stats(set);
    for (auto& r : set.records) r.split = Split::test;
    CHECK_THROWS_AS(expected_reward(set, stats, 0.6, 0.1, CostParams{}), Error);
}

TEST_CASE("tune_thresholds with a one-pair grid returns that pair") {
    const TraceSet set = validation_only(6, 100);
    const CartographyStats stats = compute_stats(set);
    ThresholdGrid g;
    g.alpha = {0.65};
    g.beta = {0.11};
    const auto choice = tune_thresholds(set, stats, g, CostParams{});
    CHECK(choice.alpha == 0.65);
    CHECK(choice.beta == 0.11);
    CHECK(choice.table.size() == 1);
}

TEST_CASE("tune_thresholds agrees with exhaustive search and fills the table") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const TraceSet set = validation_only(seed, 300);
        const CartographyStats stats = compute_stats(set);
        const ThresholdGrid g;
        const CostParams c;
        const auto choice = tune_thresholds(set, stats, g, c);
        const auto ref = oracle::exhaustive(set, g.alpha, g.beta, oracle_costs(c));
        CHECK(choice.alpha == ref.alpha);
        CHECK(choice.beta == ref.beta);
        REQUIRE(choice.table.size() == 25);
        double best = -1e300;
        for (std::size_t i = 0; i < 25; ++i) {
            CHECK(choice.table[i].alpha == ref.table[i].alpha);
            CHECK(choice.table[i].beta == ref.table[i].beta);
            CHECK(std::abs(choice.table[i].expected_reward - ref.table[i].value) <= 1e-12);
            best = std::max(best, choice.table[i].expected_reward);
        }
        CHECK(choice.expected_reward == best);
    }
}

TEST_CASE("ties resolve to the smallest alpha then beta") {
    // Every sample has mu = 0.3, so all grid points classify everything hard.
    TraceSet set = validation_only(7, 20);
    for (auto& r : set.records) *r.epoch_true_probs = std::vector<double>(5, 0.3);
    const auto choice = tune_thresholds(set, compute_stats(set), ThresholdGrid{}, CostParams{});
    CHECK(choice.alpha == 0.55);
    CHECK(choice.beta == 0.05);
}

TEST_CASE("expensive cloud makes the search avoid the hard pool") {
    // Every mu lies in [0.6, 1], so alpha = 0.55 leaves nothing hard while
    // alpha = 0.8 sends part of the set to the cloud.
    TraceSet set = validation_only(8, 120);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.6, 1.0);
    for (auto& r : set.records) {
        const double base = u(rng);
        *r.epoch_true_probs = {base, base, base, base, base};
    }
    const CartographyStats stats = compute_stats(set);
    CostParams c;
    c.o_c = 1000 * c.lambda_unit;
    c.gamma = 1000 * c.lambda_unit;
    const ThresholdGrid g;
    const auto choice = tune_thresholds(set, stats, g, c);

    std::size_t hard = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        if (classify(stats.at(i).mu, stats.at(i).sigma, choice.alpha, choice.beta) == Pool::hard) ++hard;
    }
    CHECK(hard == 0);
    const auto ref = oracle::exhaustive(set, g.alpha, g.beta, oracle_costs(c));
    CHECK(choice.alpha == ref.alpha);
    // Cells that push samples to the cloud score far below the chosen one.
    for (const auto& cell : choice.table) {
        if (cell.alpha == 0.8) CHECK(cell.expected_reward < choice.expected_reward - 1.0);
    }
}

TEST_CASE("confidence shift moves expected reward by the shift and keeps the argmax") {
    TraceSet set = validation_only(9, 150);
    // Keep confidences well inside [0,1] so a shift stays valid.
    for (auto& r : set.records) {
        for (Tier t : kTiers) r.tier_conf[t] = 0.3 + 0.5 * r.tier_conf[t];
    }
    const CartographyStats stats = compute_stats(set);
    const CostParams c;
    const auto before = tune_thresholds(set, stats, ThresholdGrid{}, c);
    for (auto& r : set.records) {
        for (Tier t : kTiers) r.tier_conf[t] += 0.125;
    }
    const auto after = tune_thresholds(set, stats, ThresholdGrid{}, c);
    CHECK(after.alpha == before.alpha);
    CHECK(after.beta == before.beta);
    for (std::size_t i = 0; i < before.table.size(); ++i) {
        CHECK(after.table[i].expected_reward - before.table[i].expected_reward == doctest::Approx(0.125).epsilon(1e-12));
    }
}

TEST_CASE("expected reward is flat between consecutive sample confidences") {
    const TraceSet set = validation_only(10, 80);
    const CartographyStats stats = compute_stats(set);
    std::vector<double> mus(stats.mu().data(), stats.mu().data() + stats.size());
    std::sort(mus.begin(), mus.end());
    const CostParams c;
    for (std::size_t i = 0; i + 1 < mus.size(); i += 7) {
        if (!(mus[i + 1] - mus[i] > 1e-9)) continue;
        const double lo = mus[i] + 0.25 * (mus[i + 1] - mus[i]);
        const double hi = mus[i] + 0.75 * (mus[i + 1] - mus[i]);
        CHECK(expected_reward(set, stats, lo, 0.1, c) == expected_reward(set, stats, hi, 0.1, c));
    }
}

TEST_CASE("tune_thresholds is invariant under record permutation") {
    TraceSet set = validation_only(12, 200);
    const auto a = tune_thresholds(set, compute_stats(set), ThresholdGrid{}, CostParams{});
    std::mt19937_64 rng(3);
    std::shuffle(set.records.begin(), set.records.end(), rng);
    const auto b = tune_thresholds(set, compute_stats(set), ThresholdGrid{}, CostParams{});
    CHECK(a.alpha == b.alpha);
    CHECK(a.beta == b.beta);
    for (std::size_t i = 0; i < a.table.size(); ++i) {
        CHECK(std::abs(a.table[i].expected_reward - b.table[i].expected_reward) <= 1e-12);
    }
}

TEST_CASE("reward table CSV") {
    const TraceSet set = validation_only(13, 40);
    ThresholdGrid g;
    g.alpha = {0.6, 0.7};
    g.beta = {0.05};
    const auto choice = tune_thresholds(set, compute_stats(set), g, CostParams{});
    std::ostringstream out;
    write_reward_table(choice, out);
    const std::string csv = out.str();
    CHECK(csv.rfind("alpha,beta,expected_reward\n0.6,0.05,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
