#ifndef TIERROUTE_CARTOGRAPHY_HPP
#define TIERROUTE_CARTOGRAPHY_HPP

#include "tierroute/trace.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tierroute {

// Training-dynamics coordinates of one sample on the data map.
struct SampleStats {
    double mu = 0.0;     // mean true-label probability across epochs
    double sigma = 0.0;  // population variance of that probability

    friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

// Data-map coordinates of every validation sample, in trace order.
class CartographyStats {
public:
    CartographyStats() = default;
    CartographyStats(std::vector<std::string> ids, Vector mu, Vector sigma);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const Vector& mu() const { return mu_; }
    const Vector& sigma() const { return sigma_; }

    SampleStats at(std::size_t i) const { return {mu_[static_cast<Eigen::Index>(i)], sigma_[static_cast<Eigen::Index>(i)]}; }
    std::optional<SampleStats> find(const std::string& id) const;

private:
    std::vector<std::string> ids_;
    Vector mu_;
    Vector sigma_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Mean and population variance of a single probability sequence.
SampleStats compute_sample_stats(const std::vector<double>& probs);

// Stats for every validation record of the set.
CartographyStats compute_stats(const TraceSet& set);
CartographyStats compute_stats(const std::vector<const SampleTrace*>& records);

// easy:   mu >= alpha and sigma <= beta
// medium: mu >= alpha and sigma >  beta
// hard:   mu <  alpha
Pool classify(double mu, double sigma, double alpha, double beta);

struct PoolModel {
    double alpha = 0.0;
    double beta = 0.0;
    int dim = 0;
    // Absent when the pool received no validation sample.
    std::array<std::optional<Vector>, 3> centroids;
    std::array<std::size_t, 3> counts{};
    // Validation ids with their pool, in trace order.
    std::vector<std::pair<std::string, Pool>> assignment;

    std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
    double proportion(Pool p) const;
    const std::optional<Vector>& centroid(Pool p) const { return centroids[index(p)]; }
    std::size_t count(Pool p) const { return counts[index(p)]; }
};

PoolModel build_pools(const TraceSet& set, const CartographyStats& stats, double alpha, double beta);

std::string pools_to_json(const PoolModel& model);
PoolModel pools_from_json(const std::string& text);
void write_pools(const PoolModel& model, const std::filesystem::path& path);
PoolModel read_pools(const std::filesystem::path& path);

}  // namespace tierroute

#endif  // TIERROUTE_CARTOGRAPHY_HPP
