#ifndef TIERROUTE_SYNTHETIC_HPP
#define TIERROUTE_SYNTHETIC_HPP

#include "tierroute/trace.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace tierroute {

// Archetypes share their names and order with pools: easy, medium, hard.
using Archetype = Pool;

struct ArchetypeParams {
    Vector centroid;              // embedding-space center
    double spread = 1.0;          // isotropic standard deviation around centroid
    double base_confidence = 0.5; // mean true-label probability per epoch
    double epoch_noise = 0.0;     // std-dev of the per-epoch perturbation
    PerTier<double> correct_prob; // P(tier classifier is correct)
};

// Shift applied to every test embedding with test index >= start_index.
// With ramp > 0 the shift grows linearly and reaches full size after `ramp`
// samples; ramp == 0 is a step change.
struct Drift {
    Vector shift;
    std::size_t start_index = 0;
    std::size_t ramp = 0;
};

struct SyntheticSpec {
    int dim = 8;
    int epochs = 5;
    int num_classes = 2;
    std::array<ArchetypeParams, 3> archetypes;
    std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::size_t train_count = 0;
    std::size_t validation_count = 0;
    std::size_t test_count = 0;
    std::optional<Drift> drift;
    std::uint64_t seed = 0;
    // tier_conf ~ U(conf_threshold, 1) when correct, U(1/num_classes, conf_threshold) otherwise.
    double conf_threshold = 0.7;

    ArchetypeParams& operator[](Archetype a) { return archetypes[index(a)]; }
    const ArchetypeParams& operator[](Archetype a) const { return archetypes[index(a)]; }
};

void validate(const SyntheticSpec& spec);

// Deterministic in spec (including seed). Record ids have the form
// "<split>-<index>-<archetype>", e.g. "test-000042-hard".
TraceSet generate_synthetic(const SyntheticSpec& spec);

// Parses the archetype suffix of a synthetic record id.
std::optional<Archetype> archetype_of(std::string_view id);

// Counts records per archetype (ids without a suffix are skipped).
std::array<std::size_t, 3> count_archetypes(const TraceSet& set, std::optional<Split> split = {});

// Well-separated three-archetype benchmark: easy samples are correct on every
// tier, medium samples need the edge model, hard samples need the cloud model.
SyntheticSpec default_benchmark(std::uint64_t seed = 1);

// default_benchmark with hard and medium confidences overlapping the default
// alpha grid, so the tuned thresholds react to cost changes.
SyntheticSpec graded_benchmark(std::uint64_t seed = 1);

// default_benchmark with a drift toward the easy region injected into the test
// stream at `start_index`.
SyntheticSpec drifting_benchmark(std::uint64_t seed = 1, std::size_t start_index = 1000);

}  // namespace tierroute

#endif  // TIERROUTE_SYNTHETIC_HPP
