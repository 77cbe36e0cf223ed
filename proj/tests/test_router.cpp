#include "tierroute/router.hpp"
#include "tierroute/synthetic.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

using namespace tierroute;

namespace {

SampleTrace sample(std::string id, Vector x) {
    SampleTrace s;
    s.id = std::move(id);
    s.split = Split::test;
    s.embedding = std::move(x);
    s.tier_conf = {{0.8, 0.8, 0.8}};
    s.tier_correct = {{true, false, true}};
    return s;
}

RouterState three_point_state(RouterMode mode) {
    RouterState st;
    st.mode = mode;
    st.centroids[0] = Vector::Unit(3, 0);
    st.centroids[1] = Vector::Unit(3, 1);
    st.centroids[2] = Vector::Unit(3, 2);
    st.counts = {1, 1, 1};
    return st;
}

struct Fixture {
    TraceSet traces;
    PoolModel pools;
};

Fixture synthetic_fixture(SyntheticSpec spec) {
    Fixture f;
    f.traces = generate_synthetic(spec);
    f.pools = build_pools(f.traces, compute_stats(f.traces), 0.55, 0.05);
    return f;
}

}  // namespace

TEST_CASE("sample at the easy centroid routes to mobile at distance zero") {
    RouterState st = three_point_state(RouterMode::fixed);
    const TierCosts costs{CostParams{}};
    const auto d = route_one(st, sample("x", Vector::Unit(3, 0)), costs);
    CHECK(d.tier == Tier::mobile);
    CHECK(*d.distances[0] == 0.0);
    CHECK(*d.distances[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.cost == costs.mobile);
    CHECK(d.correct);
}

TEST_CASE("adaptive update with one prior member averages two points") {
    RouterState st = three_point_state(RouterMode::adaptive);
    const Vector x(Vector::Constant(3, 0.4));
    const Vector c = *st.centroids[0];
    const auto d = route_one(st, sample("x", Vector(Vector::Unit(3, 0) * 0.9 + x * 0.1)), TierCosts{CostParams{}});
    REQUIRE(d.tier == Tier::mobile);
    const Vector expected = (c + Vector(Vector::Unit(3, 0) * 0.9 + x * 0.1)) / 2.0;
    CHECK((*st.centroids[0] - expected).norm() < 1e-15);
    CHECK(st.counts[0] == 2);
    CHECK(st.counts[1] == 1);
}

TEST_CASE("fixed mode never mutates state") {
    RouterState st = three_point_state(RouterMode::fixed);
    const RouterState before = st;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int i = 0; i < 200; ++i) {
        Vector x(3);
        for (int d = 0; d < 3; ++d) x[d] = n(rng);
        route_one(st, sample("s" + std::to_string(i), x), TierCosts{CostParams{}});
    }
    for (Pool p : kPools) CHECK(*st.centroid(p) == *before.centroid(p));
    CHECK(st.counts == before.counts);
}

TEST_CASE("equal distances prefer the cheaper tier") {
    RouterState st = three_point_state(RouterMode::fixed);
    // Equidistant from all three unit vectors.
    CHECK(route_one(st, sample("t", Vector::Zero(3)), TierCosts{CostParams{}}).tier == Tier::mobile);
    st.centroids[0].reset();
    st.counts[0] = 0;
    CHECK(route_one(st, sample("t", Vector::Zero(3)), TierCosts{CostParams{}}).tier == Tier::edge);
}

TEST_CASE("absent centroids never win") {
    RouterState st = three_point_state(RouterMode::adaptive);
    st.centroids[0].reset();
    st.counts[0] = 0;
    const auto d = route_one(st, sample("x", Vector::Unit(3, 0)), TierCosts{CostParams{}});
    CHECK(d.tier != Tier::mobile);
    CHECK_FALSE(d.distances[0].has_value());
    CHECK_FALSE(st.centroids[0].has_value());
    CHECK(st.counts[0] == 0);
}

TEST_CASE("router errors") {
    RouterState st = three_point_state(RouterMode::fixed);
    CHECK_THROWS_AS(route_one(st, sample("x", Vector::Zero(4)), TierCosts{CostParams{}}), Error);
    for (auto& c : st.centroids) c.reset();
    CHECK_THROWS_AS(route_one(st, sample("x", Vector::Zero(3)), TierCosts{CostParams{}}), Error);
    CHECK_THROWS_AS(validate(st), Error);

    RouterState zero = three_point_state(RouterMode::fixed);
    zero.counts[1] = 0;
    CHECK_THROWS_AS(validate(zero), Error);
}

TEST_CASE("empty stream leaves state unchanged") {
    const RouterState st = three_point_state(RouterMode::adaptive);
    const StreamResult r = route_stream(st, {}, TierCosts{CostParams{}});
    CHECK(r.decisions.empty());
    for (Pool p : kPools) CHECK(*r.final_state.centroid(p) == *st.centroid(p));
    CHECK(r.final_state.counts == st.counts);
}

TEST_CASE("adaptive centroids equal brute-force means over members and routed samples") {
    SyntheticSpec spec = default_benchmark(31);
    spec.test_count = 1000;
    const Fixture f = synthetic_fixture(spec);
    const auto stream = f.traces.split(Split::test);
    const RouterState initial = RouterState::from_pools(f.pools, RouterMode::adaptive);
    const StreamResult r = route_stream(initial, stream, TierCosts{CostParams{}});

    std::map<std::string, const SampleTrace*> by_id;
    for (const auto& rec : f.traces.records) by_id[rec.id] = &rec;
    std::array<std::vector<const Vector*>, 3> members;
    for (const auto& [id, pool] : f.pools.assignment) members[index(pool)].push_back(&by_id.at(id)->embedding);
    std::array<std::size_t, 3> tally{};
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const Pool p = pool_for(r.decisions[i].tier);
        members[index(p)].push_back(&stream[i]->embedding);
        ++tally[index(p)];
    }
    for (Pool p : kPools) {
        const auto ref = oracle::mean(members[index(p)]);
        const Vector& c = *r.final_state.centroid(p);
        for (std::size_t d = 0; d < ref.size(); ++d) CHECK(std::abs(c[static_cast<Eigen::Index>(d)] - ref[d]) <= 1e-9);
        CHECK(r.final_state.count(p) - initial.count(p) == tally[index(p)]);
    }
}

TEST_CASE("fixed-mode decisions are permutation equivariant") {
    SyntheticSpec spec = default_benchmark(32);
    spec.test_count = 400;
    const Fixture f = synthetic_fixture(spec);
    auto stream = f.traces.split(Split::test);
    const RouterState st = RouterState::from_pools(f.pools, RouterMode::fixed);
    const TierCosts costs{CostParams{}};
    const auto a = route_stream(st, stream, costs);
    std::map<std::string, Tier> first;
    for (const auto& d : a.decisions) first[d.id] = d.tier;

    std::mt19937_64 rng(9);
    std::shuffle(stream.begin(), stream.end(), rng);
    const auto b = route_stream(st, stream, costs);
    for (std::size_t i = 0; i < stream.size(); ++i) {
        CHECK(b.decisions[i].id == stream[i]->id);
        CHECK(b.decisions[i].tier == first.at(stream[i]->id));
    }
}

TEST_CASE("uniform scaling of embeddings and centroids keeps every assignment") {
    SyntheticSpec spec = graded_benchmark(33);
    spec.test_count = 300;
    Fixture f = synthetic_fixture(spec);
    const RouterState st = RouterState::from_pools(f.pools, RouterMode::fixed);
    const auto stream = f.traces.split(Split::test);
    const auto base = route_stream(st, stream, TierCosts{CostParams{}});

    for (double scale : {0.25, 3.0, 17.5}) {
        RouterState scaled = st;
        for (auto& c : scaled.centroids) {
            if (c) *c *= scale;
        }
        std::vector<SampleTrace> copies;
        copies.reserve(stream.size());
        for (const auto* s : stream) {
            copies.push_back(*s);
            copies.back().embedding *= scale;
        }
        std::vector<const SampleTrace*> ptrs;
        for (const auto& s : copies) ptrs.push_back(&s);
        const auto r = route_stream(scaled, ptrs, TierCosts{CostParams{}});
        for (std::size_t i = 0; i < stream.size(); ++i) CHECK(r.decisions[i].tier == base.decisions[i].tier);
    }
}

TEST_CASE("adaptive and fixed diverge once the stream drifts past the centroid gap") {
    SyntheticSpec spec = drifting_benchmark(34, 200);
    spec.test_count = 1200;
    const Fixture f = synthetic_fixture(spec);
    const auto stream = f.traces.split(Split::test);
    const TierCosts costs{CostParams{}};
    const auto fixed = route_stream(RouterState::from_pools(f.pools, RouterMode::fixed), stream, costs);
    const auto adaptive = route_stream(RouterState::from_pools(f.pools, RouterMode::adaptive), stream, costs);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) differ += fixed.decisions[i].tier != adaptive.decisions[i].tier;
    CHECK(differ >= 1);
}

TEST_CASE("decision costs come from the tier cost table") {
    SyntheticSpec spec = default_benchmark(35);
    spec.test_count = 500;
    const Fixture f = synthetic_fixture(spec);
    const TierCosts costs{CostParams{}};
    const auto r = route_stream(RouterState::from_pools(f.pools, RouterMode::adaptive), f.traces.split(Split::test), costs);
    for (const auto& d : r.decisions) {
        CHECK(d.cost == costs[d.tier]);
        double best = 1e300;
        for (const auto& dist : d.distances) best = std::min(best, dist.value_or(1e300));
        CHECK(*d.distances[index(pool_for(d.tier))] == best);
    }
}

TEST_CASE("decision CSV layout") {
    RouterState st = three_point_state(RouterMode::fixed);
    st.centroids[2].reset();
    st.counts[2] = 0;
    const auto d = route_one(st, sample("abc", Vector::Unit(3, 1)), TierCosts{CostParams{}});
    std::ostringstream out;
    write_decisions_header(out, false);
    write_decisions({d}, out);
    CHECK(out.str() ==
          "id,tier,d_easy,d_medium,d_hard,cost,correct\n"
          "abc,edge,1.4142135623730951,0,," + format_double(TierCosts{CostParams{}}.edge) + ",false\n");
}
