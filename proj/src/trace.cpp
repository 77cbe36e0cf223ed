#include "tierroute/trace.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace tierroute {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kKind = "tierroute-traces";
constexpr int kVersion = 1;

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void check_probability(double p, const std::string& what) {
    if (!is_probability(p)) {
        throw Error("probability out of range: " + what + " = " +
                    (std::isfinite(p) ? format_double(p) : std::string("non-finite")));
    }
}

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw Error("field '" + what + "' must be a number");
    return v.get<double>();
}

TraceHeader parse_header(const json& j) {
    if (!j.is_object()) throw Error("header must be a JSON object");
    const auto& kind = require(j, "kind");
    if (!kind.is_string() || kind.get<std::string>() != kKind) {
        throw Error("header kind must be \"tierroute-traces\"");
    }
    const auto& version = require(j, "version");
    if (!version.is_number_integer() || version.get<int>() != kVersion) {
        throw Error("unsupported trace format version");
    }
    TraceHeader h;
    const auto& d = require(j, "D");
    const auto& e = require(j, "E");
    const auto& k = require(j, "num_classes");
    if (!d.is_number_integer() || !e.is_number_integer() || !k.is_number_integer()) {
        throw Error("header D, E and num_classes must be integers");
    }
    h.dim = d.get<int>();
    h.epochs = e.get<int>();
    h.num_classes = k.get<int>();
    const auto& seed = require(j, "seed");
    if (seed.is_number_unsigned()) {
        h.seed = seed.get<std::uint64_t>();
    } else if (!seed.is_null()) {
        throw Error("header seed must be a non-negative integer or null");
    }
    const auto& note = require(j, "note");
    if (!note.is_string()) throw Error("header note must be a string");
    h.note = note.get<std::string>();
    return h;
}

PerTier<double> parse_conf(const json& j) {
    if (!j.is_object()) throw Error("tier_conf must be an object");
    PerTier<double> out;
    for (Tier t : kTiers) {
        const std::string name(to_string(t));
        out[t] = as_number(require(j, name.c_str()), "tier_conf." + name);
    }
    return out;
}

PerTier<bool> parse_correct(const json& j) {
    if (!j.is_object()) throw Error("tier_correct must be an object");
    PerTier<bool> out;
    for (Tier t : kTiers) {
        const std::string name(to_string(t));
        const auto& v = require(j, name.c_str());
        if (!v.is_boolean()) throw Error("tier_correct." + name + " must be a boolean");
        out[t] = v.get<bool>();
    }
    return out;
}

SampleTrace parse_record(const json& j) {
    if (!j.is_object()) throw Error("record must be a JSON object");
    SampleTrace r;
    const auto& id = require(j, "id");
    if (!id.is_string()) throw Error("id must be a string");
    r.id = id.get<std::string>();
    const auto& split = require(j, "split");
    if (!split.is_string()) throw Error("split must be a string");
    r.split = parse_split(split.get<std::string>());

    const auto& emb = require(j, "embedding");
    if (!emb.is_array()) throw Error("embedding must be an array");
    r.embedding.resize(static_cast<Eigen::Index>(emb.size()));
    for (std::size_t i = 0; i < emb.size(); ++i) {
        r.embedding[static_cast<Eigen::Index>(i)] = as_number(emb[i], "embedding");
    }

    const auto& probs = require(j, "epoch_true_probs");
    if (probs.is_array()) {
        std::vector<double> p;
        p.reserve(probs.size());
        for (const auto& v : probs) p.push_back(as_number(v, "epoch_true_probs"));
        r.epoch_true_probs = std::move(p);
    } else if (!probs.is_null()) {
        throw Error("epoch_true_probs must be an array or null");
    }

    r.tier_conf = parse_conf(require(j, "tier_conf"));
    r.tier_correct = parse_correct(require(j, "tier_correct"));
    const auto& label = require(j, "label");
    if (!label.is_number_integer()) throw Error("label must be an integer");
    r.label = label.get<int>();
    return r;
}

ordered_json header_json(const TraceHeader& h) {
    ordered_json j;
    j["kind"] = kKind;
    j["version"] = kVersion;
    j["D"] = h.dim;
    j["E"] = h.epochs;
    j["num_classes"] = h.num_classes;
    j["seed"] = h.seed ? ordered_json(*h.seed) : ordered_json(nullptr);
    j["note"] = h.note;
    return j;
}

ordered_json record_json(const SampleTrace& r) {
    ordered_json j;
    j["id"] = r.id;
    j["split"] = to_string(r.split);
    ordered_json emb = ordered_json::array();
    for (Eigen::Index i = 0; i < r.embedding.size(); ++i) emb.push_back(r.embedding[i]);
    j["embedding"] = std::move(emb);
    j["epoch_true_probs"] =
        r.epoch_true_probs ? ordered_json(*r.epoch_true_probs) : ordered_json(nullptr);
    ordered_json conf;
    ordered_json correct;
    for (Tier t : kTiers) {
        conf[std::string(to_string(t))] = r.tier_conf[t];
        correct[std::string(to_string(t))] = r.tier_correct[t];
    }
    j["tier_conf"] = std::move(conf);
    j["tier_correct"] = std::move(correct);
    j["label"] = r.label;
    return j;
}

}  // namespace

std::vector<const SampleTrace*> TraceSet::split(Split s) const {
    std::vector<const SampleTrace*> out;
    for (const auto& r : records) {
        if (r.split == s) out.push_back(&r);
    }
    return out;
}

void validate(const TraceHeader& h) {
    if (h.dim < 1) throw Error("header D must be >= 1");
    if (h.epochs < 0) throw Error("header E must be >= 0");
    if (h.num_classes < 2) throw Error("header num_classes must be >= 2");
}

void validate(const SampleTrace& r, const TraceHeader& h) {
    if (r.id.empty()) throw Error("record id must be non-empty");
    if (r.embedding.size() != h.dim) {
        throw Error("embedding dimension mismatch: record '" + r.id + "' has " +
                    std::to_string(r.embedding.size()) + ", header D = " +
                    std::to_string(h.dim));
    }
    if (!r.embedding.allFinite()) throw Error("embedding of '" + r.id + "' is not finite");
    if (r.epoch_true_probs) {
        if (r.epoch_true_probs->size() != static_cast<std::size_t>(h.epochs)) {
            throw Error("epoch count mismatch: record '" + r.id + "' has " +
                        std::to_string(r.epoch_true_probs->size()) + ", header E = " +
                        std::to_string(h.epochs));
        }
        for (double p : *r.epoch_true_probs) check_probability(p, r.id + ".epoch_true_probs");
    }
    for (Tier t : kTiers) {
        check_probability(r.tier_conf[t], r.id + ".tier_conf." + std::string(to_string(t)));
    }
    if (r.label < 0 || r.label >= h.num_classes) {
        throw Error("label of '" + r.id + "' outside [0, num_classes)");
    }
}

void validate(const TraceSet& set) {
    validate(set.header);
    std::unordered_set<std::string_view> ids;
    ids.reserve(set.records.size());
    for (const auto& r : set.records) {
        validate(r, set.header);
        if (!ids.insert(r.id).second) throw Error("duplicate record id '" + r.id + "'");
    }
}

TraceSet read_traces(std::istream& in) {
    TraceSet set;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::unordered_set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            if (!have_header) {
                set.header = parse_header(j);
                validate(set.header);
                have_header = true;
                continue;
            }
            SampleTrace r = parse_record(j);
            validate(r, set.header);
            if (!ids.insert(r.id).second) throw Error("duplicate record id '" + r.id + "'");
            set.records.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw Error("trace file has no header line");
    return set;
}

TraceSet read_traces(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file " + path.string());
    return read_traces(in);
}

void write_traces(const TraceSet& set, std::ostream& out) {
    validate(set);
    out << header_json(set.header).dump() << '\n';
    for (const auto& r : set.records) out << record_json(r).dump() << '\n';
    if (!out) throw Error("failed writing traces");
}

void write_traces(const TraceSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_traces(set, out);
}

}  // namespace tierroute
