#ifndef TIERROUTE_TRACE_HPP
#define TIERROUTE_TRACE_HPP

#include "tierroute/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tierroute {

// Everything the router and the simulator know about one input sample.
struct SampleTrace {
    std::string id;
    Split split = Split::validation;
    Vector embedding;
    // True-label probability after each training epoch. Required on validation
    // records consumed by the cartography pipeline.
    std::optional<std::vector<double>> epoch_true_probs;
    PerTier<double> tier_conf;   // max class probability at each exit
    PerTier<bool> tier_correct;
    int label = 0;

    friend bool operator==(const SampleTrace&, const SampleTrace&) = default;
};

struct TraceHeader {
    int dim = 0;          // D
    int epochs = 0;       // E
    int num_classes = 2;
    std::optional<std::uint64_t> seed;
    std::string note;

    friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct TraceSet {
    TraceHeader header;
    std::vector<SampleTrace> records;

    // Records of one split, in file order.
    std::vector<const SampleTrace*> split(Split s) const;

    friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

// Throws Error naming the first violated invariant.
void validate(const TraceHeader& header);
void validate(const SampleTrace& record, const TraceHeader& header);
void validate(const TraceSet& set);

// JSON Lines: header object on line 1, one record per following line.
TraceSet read_traces(std::istream& in);
TraceSet read_traces(const std::filesystem::path& path);
void write_traces(const TraceSet& set, std::ostream& out);
void write_traces(const TraceSet& set, const std::filesystem::path& path);

}  // namespace tierroute

#endif  // TIERROUTE_TRACE_HPP
