#include "tierroute/config.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace tierroute {
namespace {

using json = nlohmann::json;

void allow_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) throw Error("config: " + where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw Error("config: unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("config: invalid value for '") + key + "' in " + where);
    }
}

template <typename T>
void maybe(const json& obj, const char* key, const std::string& where, T& out) {
    if (obj.contains(key)) out = get<T>(obj, key, where);
}

Vector vector_of(const json& obj, const char* key, const std::string& where) {
    const auto v = get<std::vector<double>>(obj, key, where);
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

CostParams parse_costs(const json& j) {
    allow_keys(j, {"lambda", "lambda_m", "lambda_e", "o_e", "o_c", "gamma", "m", "n", "l"}, "costs");
    double unit = 0.01, lm = 1.5, le = 1.0, oe = 2.5, oc = 3.0, gamma = 20.0;
    int m = 4, n = 6, l = 12;
    maybe(j, "lambda", "costs", unit);
    maybe(j, "lambda_m", "costs", lm);
    maybe(j, "lambda_e", "costs", le);
    maybe(j, "o_e", "costs", oe);
    maybe(j, "o_c", "costs", oc);
    maybe(j, "gamma", "costs", gamma);
    maybe(j, "m", "costs", m);
    maybe(j, "n", "costs", n);
    maybe(j, "l", "costs", l);
    CostParams c = CostParams::from_multiples(unit, lm, le, oe, oc, gamma, m, n, l);
    validate(c);
    return c;
}

ThresholdGrid parse_grid(const json& j) {
    allow_keys(j, {"alpha", "beta"}, "grid");
    ThresholdGrid g;
    maybe(j, "alpha", "grid", g.alpha);
    maybe(j, "beta", "grid", g.beta);
    validate(g);
    return g;
}

void parse_archetype(const json& j, ArchetypeParams& p, const std::string& where) {
    allow_keys(j, {"centroid", "spread", "base_confidence", "epoch_noise", "correct_prob"}, where);
    if (j.contains("centroid")) p.centroid = vector_of(j, "centroid", where);
    maybe(j, "spread", where, p.spread);
    maybe(j, "base_confidence", where, p.base_confidence);
    maybe(j, "epoch_noise", where, p.epoch_noise);
    if (j.contains("correct_prob")) {
        const auto& c = j.at("correct_prob");
        const std::string w = where + ".correct_prob";
        allow_keys(c, {"mobile", "edge", "cloud"}, w);
        for (Tier t : kTiers) maybe(c, std::string(to_string(t)).c_str(), w, p.correct_prob[t]);
    }
}

SyntheticSpec parse_synthetic(const json& j, std::uint64_t seed) {
    allow_keys(j,
               {"preset", "dim", "epochs", "num_classes", "weights", "counts", "conf_threshold", "archetypes",
                "drift"},
               "synthetic");
    std::string preset = "default";
    maybe(j, "preset", "synthetic", preset);
    SyntheticSpec spec;
    if (preset == "default") {
        spec = default_benchmark(seed);
    } else if (preset == "graded") {
        spec = graded_benchmark(seed);
    } else if (preset == "drifting") {
        spec = drifting_benchmark(seed);
    } else {
        throw Error("config: unknown synthetic preset '" + preset + "'");
    }
    spec.seed = seed;
    maybe(j, "dim", "synthetic", spec.dim);
    maybe(j, "epochs", "synthetic", spec.epochs);
    maybe(j, "num_classes", "synthetic", spec.num_classes);
    maybe(j, "conf_threshold", "synthetic", spec.conf_threshold);
    maybe(j, "weights", "synthetic", spec.weights);
    if (j.contains("counts")) {
        const auto& c = j.at("counts");
        allow_keys(c, {"train", "validation", "test"}, "synthetic.counts");
        maybe(c, "train", "synthetic.counts", spec.train_count);
        maybe(c, "validation", "synthetic.counts", spec.validation_count);
        maybe(c, "test", "synthetic.counts", spec.test_count);
    }
    if (j.contains("archetypes")) {
        const auto& a = j.at("archetypes");
        allow_keys(a, {"easy", "medium", "hard"}, "synthetic.archetypes");
        for (Archetype arch : kPools) {
            const std::string name(to_string(arch));
            if (a.contains(name)) parse_archetype(a.at(name), spec[arch], "synthetic.archetypes." + name);
        }
    }
    if (j.contains("drift")) {
        const auto& d = j.at("drift");
        if (d.is_null()) {
            spec.drift.reset();
        } else {
            allow_keys(d, {"shift", "start_index", "ramp"}, "synthetic.drift");
            Drift drift = spec.drift.value_or(Drift{});
            if (d.contains("shift")) drift.shift = vector_of(d, "shift", "synthetic.drift");
            maybe(d, "start_index", "synthetic.drift", drift.start_index);
            maybe(d, "ramp", "synthetic.drift", drift.ramp);
            spec.drift = std::move(drift);
        }
    }
    validate(spec);
    return spec;
}

}  // namespace

std::vector<Policy> RunConfig::resolved_policies() const {
    std::vector<Policy> out;
    out.reserve(policies.size());
    for (const auto& name : policies) {
        out.push_back(name == "cartography" ? Policy::cartography(mode) : parse_policy(name, seed));
    }
    return out;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("config: malformed JSON: ") + e.what());
    }
    allow_keys(j, {"version", "traces", "out", "seed", "mode", "policies", "costs", "grid", "sweep", "synthetic"},
               "config");
    if (!j.contains("version") || get<int>(j, "version", "config") != 1) {
        throw Error("config: \"version\": 1 is required");
    }

    RunConfig cfg;
    if (j.contains("traces")) cfg.traces = resolve(get<std::string>(j, "traces", "config"), base_dir);
    if (j.contains("out")) cfg.out = get<std::string>(j, "out", "config");
    cfg.out = resolve(cfg.out, base_dir);
    maybe(j, "seed", "config", cfg.seed);
    if (j.contains("mode")) cfg.mode = parse_router_mode(get<std::string>(j, "mode", "config"));
    maybe(j, "policies", "config", cfg.policies);
    if (j.contains("costs")) cfg.costs = parse_costs(j.at("costs"));
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        allow_keys(s, {"vary", "values"}, "sweep");
        SweepConfig sweep;
        if (s.contains("vary")) sweep.vary = parse_cost_knob(get<std::string>(s, "vary", "sweep"));
        maybe(s, "values", "sweep", sweep.values);
        cfg.sweep = std::move(sweep);
    }
    if (j.contains("synthetic")) cfg.synthetic = parse_synthetic(j.at("synthetic"), cfg.seed);
    cfg.resolved_policies();  // rejects unknown policy names early
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

}  // namespace tierroute
