// tierroute: command-line driver for the tiered-inference routing simulator.

#include "tierroute/config.hpp"
#include "tierroute/harness.hpp"
#include "tierroute/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace tierroute;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> policies;
    std::string mode;
    std::string vary;
    std::string values;
};

// Exclusive lock on an output directory for the lifetime of one command.
class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& dir) : path_(dir / ".tierroute.lock") {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0) throw Error("output directory " + dir.string() + " is locked by another run (" + path_.string() + ")");
    }
    ~DirectoryLock() {
        ::close(fd_);
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    fs::path path_;
    int fd_ = -1;
};

void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<double> parse_csv_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw Error("--values: '" + item + "' is not a number");
        values.push_back(v);
    }
    if (values.empty()) throw Error("--values: empty list");
    return values;
}

RunConfig load(const Options& opt) {
    RunConfig cfg = load_config(opt.config);
    if (!opt.out.empty()) cfg.out = opt.out;
    if (opt.seed) {
        cfg.seed = *opt.seed;
        if (cfg.synthetic) cfg.synthetic->seed = *opt.seed;
    }
    if (!opt.mode.empty()) cfg.mode = parse_router_mode(opt.mode);
    if (!opt.policies.empty()) cfg.policies = opt.policies;
    cfg.resolved_policies();
    return cfg;
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    return cfg.out;
}

fs::path traces_path(const RunConfig& cfg) { return cfg.traces.empty() ? cfg.out / "traces.jsonl" : cfg.traces; }

TraceSet load_traces(const RunConfig& cfg) {
    const fs::path path = traces_path(cfg);
    spdlog::debug("reading traces from {}", path.string());
    return read_traces(path);
}

int cmd_gen(const Options& opt) {
    const RunConfig cfg = load(opt);
    if (!cfg.synthetic) throw Error("config has no \"synthetic\" section");
    const fs::path target = traces_path(cfg);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    DirectoryLock lock(target.has_parent_path() ? target.parent_path() : fs::path("."));

    const TraceSet set = generate_synthetic(*cfg.synthetic);
    std::ostringstream buffer;
    write_traces(set, buffer);
    write_file(target, buffer.str());
    if (!(read_traces(target) == set)) throw Error("written trace file did not validate");

    std::cout << "wrote " << set.records.size() << " records to " << target.string() << '\n';
    for (Split s : {Split::train, Split::validation, Split::test}) {
        const auto counts = count_archetypes(set, s);
        std::cout << to_string(s) << ": easy=" << counts[0] << " medium=" << counts[1] << " hard=" << counts[2]
                  << '\n';
    }
    return 0;
}

int cmd_pools(const Options& opt) {
    const RunConfig cfg = load(opt);
    const fs::path out = prepare_out(cfg);
    DirectoryLock lock(out);

    const TraceSet traces = load_traces(cfg);
    const CartographyStats stats = compute_stats(traces);
    if (stats.size() == 0) throw Error("traces have no validation split");
    const ThresholdChoice choice = tune_thresholds(traces, stats, cfg.grid, cfg.costs);
    const PoolModel pools = build_pools(traces, stats, choice.alpha, choice.beta);

    const std::string pools_text = pools_to_json(pools);
    std::ostringstream table;
    write_reward_table(choice, table);
    write_file(out / "pools.json", pools_text);
    write_file(out / "reward_table.csv", table.str());
    read_pools(out / "pools.json");

    std::cout << "alpha=" << format_double(choice.alpha) << " beta=" << format_double(choice.beta)
              << " expected_reward=" << format_double(choice.expected_reward) << '\n';
    for (Pool p : kPools) {
        std::cout << to_string(p) << ": n=" << pools.count(p) << " proportion=" << format_double(pools.proportion(p))
                  << '\n';
    }
    return 0;
}

int cmd_route(const Options& opt) {
    const RunConfig cfg = load(opt);
    const fs::path out = prepare_out(cfg);
    DirectoryLock lock(out);

    const TraceSet traces = load_traces(cfg);
    const auto policies = cfg.resolved_policies();
    std::optional<PoolModel> pools;
    const fs::path pools_path = out / "pools.json";
    if (fs::exists(pools_path)) {
        spdlog::info("using pools from {}", pools_path.string());
        pools = read_pools(pools_path);
    }

    std::vector<ExperimentResult> results;
    for (const Policy& p : policies) {
        results.push_back(pools ? run_with_pools(traces, cfg.costs, *pools, p)
                                : run_experiment(traces, cfg.costs, cfg.grid, p));
    }

    std::ostringstream decisions;
    write_decisions_header(decisions, true);
    for (const auto& r : results) write_decisions(r.decisions, decisions, r.policy.name());
    write_file(out / "metrics.json", metrics_to_json(results, cfg.costs));
    write_file(out / "decisions.csv", decisions.str());

    for (const auto& r : results) {
        std::cout << r.policy.name() << ": accuracy=" << format_double(r.metrics.accuracy)
                  << " mean_cost=" << format_double(r.metrics.mean_cost)
                  << " cost_vs_cloud_pct=" << format_double(r.metrics.cost_vs_baseline_pct) << '\n';
    }
    return 0;
}

int cmd_sweep(const Options& opt) {
    const RunConfig cfg = load(opt);
    const fs::path out = prepare_out(cfg);
    DirectoryLock lock(out);

    SweepConfig sweep = cfg.sweep.value_or(SweepConfig{});
    if (!opt.vary.empty()) sweep.vary = parse_cost_knob(opt.vary);
    if (!opt.values.empty()) sweep.values = parse_csv_list(opt.values);
    if (sweep.values.empty()) throw Error("sweep needs values (--values or config sweep.values)");

    Policy policy = Policy::cartography(cfg.mode);
    for (const Policy& p : cfg.resolved_policies()) {
        if (p.uses_cartography()) {
            policy = p;
            break;
        }
    }

    std::vector<double> absolute;
    absolute.reserve(sweep.values.size());
    for (double v : sweep.values) absolute.push_back(v * cfg.costs.lambda_unit);

    const TraceSet traces = load_traces(cfg);
    const auto rows = cost_sweep(traces, cfg.costs, cfg.grid, sweep.vary, absolute, policy);
    std::ostringstream csv;
    write_sweep(rows, sweep.vary, csv);
    write_file(out / "sweep.csv", csv.str());
    std::cout << csv.str();
    return 0;
}

int cmd_report(const Options& opt) {
    const RunConfig cfg = load(opt);
    const fs::path out = prepare_out(cfg);
    DirectoryLock lock(out);

    const TraceSet traces = load_traces(cfg);
    const auto rows = compare_policies(traces, cfg.costs, cfg.grid, cfg.resolved_policies());
    std::ostringstream csv;
    write_comparison(rows, csv);
    write_file(out / "comparison.csv", csv.str());

    std::printf("%-26s %10s %12s %10s\n", "policy", "accuracy", "mean_cost", "dcost%");
    for (const auto& r : rows) {
        std::printf("%-26s %10.4f %12.6f %+9.1f%%\n", r.policy.c_str(), r.accuracy, r.mean_cost, r.cost_vs_cloud_pct);
    }
    return 0;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("tierroute");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("TIERROUTE_LOG")) {
        const std::string_view v(level);
        if (v == "debug") spdlog::set_level(spdlog::level::debug);
        else if (v == "info") spdlog::set_level(spdlog::level::info);
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Cost-aware mobile/edge/cloud inference routing simulator"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "Output directory (overrides config \"out\")");
        sub->add_option("--seed", opt.seed, "Seed for synthetic generation and the random policy");
    };
    auto add_policy = [&](CLI::App* sub) {
        sub->add_option("--policy", opt.policies,
                        "Policy to run (repeatable): cartography, cartography_fixed, cartography_adaptive, "
                        "cloud_only, edge_only, mobile_only, random_uniform, oracle_cheapest_correct");
        sub->add_option("--mode", opt.mode, "Router mode for the cartography policy")
            ->check(CLI::IsMember({"fixed", "adaptive"}));
    };

    auto* gen = app.add_subcommand("gen", "Generate a synthetic trace file");
    add_common(gen);
    auto* pools = app.add_subcommand("pools", "Tune thresholds and build pools (pools.json, reward_table.csv)");
    add_common(pools);
    auto* route = app.add_subcommand("route", "Route the test stream (metrics.json, decisions.csv)");
    add_common(route);
    add_policy(route);
    auto* sweep = app.add_subcommand("sweep", "Vary one cost and re-run routing (sweep.csv)");
    add_common(sweep);
    add_policy(sweep);
    sweep->add_option("--vary", opt.vary, "Cost to vary")->check(CLI::IsMember({"lambda_m", "lambda_e", "o_c"}));
    sweep->add_option("--values", opt.values, "Comma-separated values in multiples of lambda");
    auto* report = app.add_subcommand("report", "Compare policies (comparison.csv and a table on stdout)");
    add_common(report);
    add_policy(report);

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (*gen) return cmd_gen(opt);
        if (*pools) return cmd_pools(opt);
        if (*route) return cmd_route(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*report) return cmd_report(opt);
    } catch (const std::exception& e) {
        nlohmann::json line{{"error", e.what()}, {"command", command}};
        std::cerr << line.dump() << '\n';
        return 1;
    }
    return 1;
}
