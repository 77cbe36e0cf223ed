#include "tierroute/types.hpp"

#include <charconv>
#include <cmath>

namespace tierroute {

std::string_view to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "?";
}

std::string_view to_string(Tier t) {
    switch (t) {
        case Tier::mobile: return "mobile";
        case Tier::edge: return "edge";
        case Tier::cloud: return "cloud";
    }
    return "?";
}

std::string_view to_string(Pool p) {
    switch (p) {
        case Pool::easy: return "easy";
        case Pool::medium: return "medium";
        case Pool::hard: return "hard";
    }
    return "?";
}

Split parse_split(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "validation") return Split::validation;
    if (s == "test") return Split::test;
    throw Error("unknown split '" + std::string(s) + "'");
}

Tier parse_tier(std::string_view s) {
    if (s == "mobile") return Tier::mobile;
    if (s == "edge") return Tier::edge;
    if (s == "cloud") return Tier::cloud;
    throw Error("unknown tier '" + std::string(s) + "'");
}

Pool parse_pool(std::string_view s) {
    if (s == "easy") return Pool::easy;
    if (s == "medium") return Pool::medium;
    if (s == "hard") return Pool::hard;
    throw Error("unknown pool '" + std::string(s) + "'");
}

std::string format_double(double v) {
    if (!std::isfinite(v)) throw Error("cannot format non-finite value");
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("number formatting failed");
    return std::string(buf, end);
}

}  // namespace tierroute
