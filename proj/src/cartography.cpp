#include "tierroute/cartography.hpp"

#include "tierroute/centroid.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace tierroute {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kPoolsKind = "tierroute-pools";

}  // namespace

CartographyStats::CartographyStats(std::vector<std::string> ids, Vector mu, Vector sigma)
    : ids_(std::move(ids)), mu_(std::move(mu)), sigma_(std::move(sigma)) {
    if (mu_.size() != static_cast<Eigen::Index>(ids_.size()) || sigma_.size() != mu_.size()) {
        throw Error("cartography stats: ids, mu and sigma lengths differ");
    }
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (!index_.emplace(ids_[i], i).second) throw Error("cartography stats: duplicate id '" + ids_[i] + "'");
    }
}

std::optional<SampleStats> CartographyStats::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return at(it->second);
}

SampleStats compute_sample_stats(const std::vector<double>& probs) {
    if (probs.empty()) throw Error("cartography: E = 0, no epoch probabilities");
    const Eigen::Map<const Eigen::RowVectorXd> row(probs.data(), static_cast<Eigen::Index>(probs.size()));
    Vector mean;
    Vector variance;
    row_mean_variance(row, mean, variance);
    return {mean[0], variance[0]};
}

CartographyStats compute_stats(const std::vector<const SampleTrace*>& records) {
    std::vector<std::string> ids;
    ids.reserve(records.size());
    if (records.empty()) return CartographyStats({}, Vector(0), Vector(0));

    Eigen::Index epochs = -1;
    for (const SampleTrace* r : records) {
        if (!r->epoch_true_probs) throw Error("cartography: record '" + r->id + "' has no epoch_true_probs");
        const auto e = static_cast<Eigen::Index>(r->epoch_true_probs->size());
        if (e == 0) throw Error("cartography: E = 0, no epoch probabilities");
        if (epochs >= 0 && e != epochs) throw Error("cartography: epoch count mismatch at '" + r->id + "'");
        epochs = e;
    }

    Eigen::MatrixXd probs(static_cast<Eigen::Index>(records.size()), epochs);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& p = *records[i]->epoch_true_probs;
        for (Eigen::Index e = 0; e < epochs; ++e) probs(static_cast<Eigen::Index>(i), e) = p[static_cast<std::size_t>(e)];
        ids.push_back(records[i]->id);
    }

    Vector mu;
    Vector sigma;
    row_mean_variance(probs, mu, sigma);
    return CartographyStats(std::move(ids), std::move(mu), std::move(sigma));
}

CartographyStats compute_stats(const TraceSet& set) {
    return compute_stats(set.split(Split::validation));
}

Pool classify(double mu, double sigma, double alpha, double beta) {
    if (mu < alpha) return Pool::hard;
    return sigma <= beta ? Pool::easy : Pool::medium;
}

double PoolModel::proportion(Pool p) const {
    const std::size_t n = total();
    return n == 0 ? 0.0 : static_cast<double>(count(p)) / static_cast<double>(n);
}

PoolModel build_pools(const TraceSet& set, const CartographyStats& stats, double alpha, double beta) {
    const auto validation = set.split(Split::validation);
    if (validation.empty()) throw Error("build_pools: empty validation split");

    PoolModel model;
    model.alpha = alpha;
    model.beta = beta;
    model.dim = set.header.dim;
    model.assignment.reserve(validation.size());

    Eigen::MatrixXd embeddings(set.header.dim, static_cast<Eigen::Index>(validation.size()));
    std::array<std::vector<std::size_t>, 3> members;
    for (std::size_t i = 0; i < validation.size(); ++i) {
        const SampleTrace& r = *validation[i];
        const auto s = stats.find(r.id);
        if (!s) throw Error("build_pools: no cartography stats for '" + r.id + "'");
        const Pool pool = classify(s->mu, s->sigma, alpha, beta);
        embeddings.col(static_cast<Eigen::Index>(i)) = r.embedding;
        members[index(pool)].push_back(i);
        model.assignment.emplace_back(r.id, pool);
    }

    for (Pool p : kPools) {
        const auto& m = members[index(p)];
        model.counts[index(p)] = m.size();
        if (!m.empty()) model.centroids[index(p)] = mean_of_columns(embeddings, m);
    }
    return model;
}

std::string pools_to_json(const PoolModel& model) {
    ordered_json j;
    j["kind"] = kPoolsKind;
    j["version"] = 1;
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["D"] = model.dim;
    ordered_json counts;
    ordered_json proportions;
    ordered_json centroids;
    for (Pool p : kPools) {
        const std::string name(to_string(p));
        counts[name] = model.count(p);
        proportions[name] = model.proportion(p);
        if (const auto& c = model.centroid(p)) {
            centroids[name] = std::vector<double>(c->data(), c->data() + c->size());
        } else {
            centroids[name] = nullptr;
        }
    }
    j["counts"] = std::move(counts);
    j["proportions"] = std::move(proportions);
    j["centroids"] = std::move(centroids);
    ordered_json assignment = ordered_json::object();
    for (const auto& [id, pool] : model.assignment) assignment[id] = to_string(pool);
    j["assignment"] = std::move(assignment);
    return j.dump(2) + "\n";
}

PoolModel pools_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
        if (j.at("kind").get<std::string>() != kPoolsKind) throw Error("pools: wrong document kind");
        if (j.at("version").get<int>() != 1) throw Error("pools: unsupported version");

        PoolModel model;
        model.alpha = j.at("alpha").get<double>();
        model.beta = j.at("beta").get<double>();
        model.dim = j.at("D").get<int>();
        for (Pool p : kPools) {
            const std::string name(to_string(p));
            model.counts[index(p)] = j.at("counts").at(name).get<std::size_t>();
            const auto& c = j.at("centroids").at(name);
            if (c.is_null()) continue;
            const auto values = c.get<std::vector<double>>();
            if (static_cast<int>(values.size()) != model.dim) throw Error("pools: centroid dimension mismatch");
            model.centroids[index(p)] = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
        }
        for (const auto& [id, pool] : j.at("assignment").items()) {
            model.assignment.emplace_back(id, parse_pool(pool.get<std::string>()));
        }
        for (Pool p : kPools) {
            if (model.centroid(p).has_value() != (model.count(p) > 0)) {
                throw Error("pools: centroid presence inconsistent with count for " + std::string(to_string(p)));
            }
        }
        return model;
    } catch (const ordered_json::exception& e) {
        throw Error(std::string("pools: malformed document: ") + e.what());
    }
}

void write_pools(const PoolModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << pools_to_json(model);
    if (!out) throw Error("failed writing " + path.string());
}

PoolModel read_pools(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pools file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return pools_from_json(buffer.str());
}

}  // namespace tierroute
