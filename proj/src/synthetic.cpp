#include "tierroute/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace tierroute {
namespace {

bool in_unit(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string record_id(Split split, std::size_t i, Archetype a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu", i);
    return std::string(to_string(split)) + "-" + buf + "-" + std::string(to_string(a));
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return normal_(rng_); }
    bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

    Archetype archetype(const std::array<double, 3>& weights) {
        const double u = uniform(0.0, 1.0);
        double acc = 0.0;
        for (Archetype a : kPools) {
            acc += weights[index(a)];
            if (u < acc) return a;
        }
        // u landed in the rounding gap above the cumulative sum; take the last
        // archetype with positive weight.
        for (auto it = kPools.rbegin(); it != kPools.rend(); ++it) {
            if (weights[index(*it)] > 0.0) return *it;
        }
        return Archetype::hard;
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

void validate(const SyntheticSpec& spec) {
    if (spec.dim < 1) throw Error("synthetic spec: dim must be >= 1");
    if (spec.epochs < 1) throw Error("synthetic spec: epochs must be >= 1");
    if (spec.num_classes < 2) throw Error("synthetic spec: num_classes must be >= 2");
    if (!(spec.conf_threshold > 1.0 / spec.num_classes && spec.conf_threshold < 1.0)) {
        throw Error("synthetic spec: conf_threshold must lie in (1/num_classes, 1)");
    }
    double total = 0.0;
    for (double w : spec.weights) {
        if (!std::isfinite(w) || w < 0.0) throw Error("synthetic spec: weights must be >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("synthetic spec: weights must sum to 1");
    for (Archetype a : kPools) {
        const auto& p = spec[a];
        const std::string name(to_string(a));
        if (p.centroid.size() != spec.dim) {
            throw Error("synthetic spec: " + name + " centroid dimension mismatch");
        }
        if (!p.centroid.allFinite()) throw Error("synthetic spec: " + name + " centroid not finite");
        if (!(std::isfinite(p.spread) && p.spread > 0.0)) {
            throw Error("synthetic spec: " + name + " spread must be > 0");
        }
        if (!in_unit(p.base_confidence)) {
            throw Error("synthetic spec: " + name + " base_confidence must lie in [0,1]");
        }
        if (!(std::isfinite(p.epoch_noise) && p.epoch_noise >= 0.0)) {
            throw Error("synthetic spec: " + name + " epoch_noise must be >= 0");
        }
        for (Tier t : kTiers) {
            if (!in_unit(p.correct_prob[t])) {
                throw Error("synthetic spec: " + name + " correct_prob must lie in [0,1]");
            }
        }
    }
    if (spec.drift) {
        if (spec.drift->shift.size() != spec.dim) throw Error("synthetic spec: drift dimension mismatch");
        if (!spec.drift->shift.allFinite()) throw Error("synthetic spec: drift shift not finite");
    }
}

TraceSet generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);

    TraceSet set;
    set.header.dim = spec.dim;
    set.header.epochs = spec.epochs;
    set.header.num_classes = spec.num_classes;
    set.header.seed = spec.seed;
    set.header.note = "synthetic; tier_conf from final model";
    set.records.reserve(spec.train_count + spec.validation_count + spec.test_count);

    Sampler rng(spec.seed);
    const double conf_floor = 1.0 / spec.num_classes;

    auto emit = [&](Split split, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            const Archetype a = rng.archetype(spec.weights);
            const ArchetypeParams& p = spec[a];

            SampleTrace r;
            r.id = record_id(split, i, a);
            r.split = split;
            r.embedding.resize(spec.dim);
            for (int d = 0; d < spec.dim; ++d) r.embedding[d] = p.centroid[d] + p.spread * rng.normal();
            if (split == Split::test && spec.drift && i >= spec.drift->start_index) {
                double scale = 1.0;
                if (spec.drift->ramp > 0) {
                    const double progressed = static_cast<double>(i - spec.drift->start_index + 1);
                    scale = std::min(1.0, progressed / static_cast<double>(spec.drift->ramp));
                }
                r.embedding += scale * spec.drift->shift;
            }

            if (split != Split::test) {
                std::vector<double> probs(static_cast<std::size_t>(spec.epochs));
                for (double& v : probs) {
                    v = std::clamp(p.base_confidence + p.epoch_noise * rng.normal(), 0.0, 1.0);
                }
                r.epoch_true_probs = std::move(probs);
            }

            for (Tier t : kTiers) r.tier_correct[t] = rng.bernoulli(p.correct_prob[t]);
            for (Tier t : kTiers) {
                r.tier_conf[t] = r.tier_correct[t] ? rng.uniform(spec.conf_threshold, 1.0)
                                                   : rng.uniform(conf_floor, spec.conf_threshold);
            }
            r.label = static_cast<int>(rng.uniform(0.0, 1.0) * spec.num_classes);
            if (r.label >= spec.num_classes) r.label = spec.num_classes - 1;
            set.records.push_back(std::move(r));
        }
    };

    emit(Split::train, spec.train_count);
    emit(Split::validation, spec.validation_count);
    emit(Split::test, spec.test_count);
    return set;
}

std::optional<Archetype> archetype_of(std::string_view id) {
    const auto dash = id.rfind('-');
    if (dash == std::string_view::npos) return std::nullopt;
    const auto suffix = id.substr(dash + 1);
    for (Archetype a : kPools) {
        if (suffix == to_string(a)) return a;
    }
    return std::nullopt;
}

std::array<std::size_t, 3> count_archetypes(const TraceSet& set, std::optional<Split> split) {
    std::array<std::size_t, 3> counts{};
    for (const auto& r : set.records) {
        if (split && r.split != *split) continue;
        if (auto a = archetype_of(r.id)) ++counts[index(*a)];
    }
    return counts;
}

SyntheticSpec default_benchmark(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.dim = 8;
    spec.epochs = 5;
    spec.num_classes = 2;
    spec.seed = seed;
    spec.train_count = 0;
    spec.validation_count = 600;
    spec.test_count = 3000;

    auto axis = [&](int k) {
        Vector v = Vector::Zero(spec.dim);
        v[k] = 3.0;
        return v;
    };

    auto& easy = spec[Archetype::easy];
    easy.centroid = axis(0);
    easy.spread = 0.5;
    easy.base_confidence = 0.95;
    easy.epoch_noise = 0.04;
    easy.correct_prob = {{0.98, 0.98, 0.98}};

    auto& medium = spec[Archetype::medium];
    medium.centroid = axis(1);
    medium.spread = 0.5;
    medium.base_confidence = 0.8;
    medium.epoch_noise = 0.45;
    medium.correct_prob = {{0.4, 0.95, 0.95}};

    auto& hard = spec[Archetype::hard];
    hard.centroid = axis(2);
    hard.spread = 0.5;
    hard.base_confidence = 0.2;
    hard.epoch_noise = 0.1;
    hard.correct_prob = {{0.1, 0.3, 0.9}};
    return spec;
}

SyntheticSpec graded_benchmark(std::uint64_t seed) {
    SyntheticSpec spec = default_benchmark(seed);
    spec[Archetype::medium].epoch_noise = 0.3;
    spec[Archetype::hard].base_confidence = 0.62;
    spec[Archetype::hard].epoch_noise = 0.12;
    return spec;
}

SyntheticSpec drifting_benchmark(std::uint64_t seed, std::size_t start_index) {
    SyntheticSpec spec = default_benchmark(seed);
    Drift drift;
    drift.shift = 0.5 * (spec[Archetype::easy].centroid - spec[Archetype::hard].centroid);
    drift.start_index = start_index;
    drift.ramp = 0;
    spec.drift = std::move(drift);
    return spec;
}

}  // namespace tierroute
