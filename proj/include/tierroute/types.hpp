#ifndef TIERROUTE_TYPES_HPP
#define TIERROUTE_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tierroute {

using Vector = Eigen::VectorXd;

// Every recoverable failure in the library surfaces as this exception type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Split { train, validation, test };

// Inference location. Ordered by the default cost ranking: mobile < edge < cloud.
enum class Tier { mobile = 0, edge = 1, cloud = 2 };

// Data-map region of a validation sample. Pools map one-to-one onto tiers.
enum class Pool { easy = 0, medium = 1, hard = 2 };

inline constexpr std::array<Tier, 3> kTiers{Tier::mobile, Tier::edge, Tier::cloud};
inline constexpr std::array<Pool, 3> kPools{Pool::easy, Pool::medium, Pool::hard};

constexpr std::size_t index(Tier t) { return static_cast<std::size_t>(t); }
constexpr std::size_t index(Pool p) { return static_cast<std::size_t>(p); }

constexpr Tier tier_for(Pool p) { return static_cast<Tier>(static_cast<int>(p)); }
constexpr Pool pool_for(Tier t) { return static_cast<Pool>(static_cast<int>(t)); }

std::string_view to_string(Split s);
std::string_view to_string(Tier t);
std::string_view to_string(Pool p);

Split parse_split(std::string_view s);
Tier parse_tier(std::string_view s);
Pool parse_pool(std::string_view s);

// One value per tier, indexed by Tier.
template <typename T>
struct PerTier {
    std::array<T, 3> values{};

    T& operator[](Tier t) { return values[index(t)]; }
    const T& operator[](Tier t) const { return values[index(t)]; }

    friend bool operator==(const PerTier&, const PerTier&) = default;
};

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace tierroute

#endif  // TIERROUTE_TYPES_HPP
