#ifndef TIERROUTE_CONFIG_HPP
#define TIERROUTE_CONFIG_HPP

#include "tierroute/harness.hpp"
#include "tierroute/synthetic.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tierroute {

struct SweepConfig {
    CostKnob vary = CostKnob::o_c;
    std::vector<double> values;  // multiples of lambda_unit
};

// Versioned JSON run configuration. Costs are written in multiples of the
// base unit "lambda"; relative paths resolve against the config file's directory.
struct RunConfig {
    std::filesystem::path traces;
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;
    RouterMode mode = RouterMode::adaptive;
    std::vector<std::string> policies{"cartography_adaptive", "cloud_only"};
    CostParams costs;
    ThresholdGrid grid;
    std::optional<SweepConfig> sweep;
    std::optional<SyntheticSpec> synthetic;

    // Resolves policy names; "cartography" expands to the configured mode.
    std::vector<Policy> resolved_policies() const;
};

// Unknown keys anywhere in the document are an error.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace tierroute

#endif  // TIERROUTE_CONFIG_HPP
