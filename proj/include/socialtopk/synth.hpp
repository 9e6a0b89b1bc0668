#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "socialtopk/store.hpp"

namespace socialtopk {

/// Draws ranks 0..n-1 with probability proportional to 1/(rank+1)^s.
class ZipfSampler {
public:
    ZipfSampler(std::size_t n, double s);
    std::size_t operator()(std::mt19937_64& rng) const;
    std::size_t size() const noexcept { return cdf_.size(); }

private:
    std::vector<double> cdf_;
};

/// Community-structured folksonomy with power-law user activity, item
/// popularity and tag usage.
struct SynthSpec {
    std::size_t users = 2000;
    std::size_t items = 4000;
    std::size_t tags = 100;
    std::size_t communities = 40;
    /// Pareto shape of bookmarks per user; smaller means heavier tail.
    double activity_shape = 1.2;
    std::size_t min_bookmarks = 3;
    std::size_t max_bookmarks = 200;
    double item_skew = 1.0;
    double tag_skew = 1.0;
    /// Probability a bookmark comes from the user's community pool.
    double community_affinity = 0.85;
    std::size_t tags_per_item = 5;
    std::size_t max_tags_per_bookmark = 3;
    std::uint64_t seed = 1;
};

/// Deterministic for a given spec on a given standard library.
std::vector<Triple> synthesize_tagging(const SynthSpec& spec);

}  // namespace socialtopk
