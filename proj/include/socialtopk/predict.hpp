#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socialtopk/graph.hpp"
#include "socialtopk/store.hpp"

namespace socialtopk {

/// Bookmark-prediction protocol: hide a seeker's own tagging, ask for the top-k
/// items of one of her tags at alpha = 0, and count the pair as predicted
/// when any returned item is one she tagged with that tag.
struct PredictSpec {
    std::size_t pairs = 100;
    /// Popularity band on the seeker's user list for the tag.
    std::size_t min_items = 1;
    std::size_t max_items = 50;
    /// Minimum number of uses of the tag across all users.
    std::size_t min_tag_uses = 5;
    std::vector<std::size_t> ks{1, 5, 10};
    std::uint64_t seed = 1;
};

struct NamedProximity {
    std::string name;
    ProximityFunction function;
};

/// mul, min, pow1.1, pow2.
std::vector<NamedProximity> default_prediction_functions();

struct PredictRow {
    std::string function;  ///< proximity name, or "global" for the network-unaware baseline
    std::size_t k;
    std::size_t pairs;
    std::size_t predicted;
    double hit_rate;
};

struct PredictReport {
    std::size_t eligible_pairs = 0;
    std::vector<PredictRow> rows;
    /// Non-empty when fewer pairs qualified than requested.
    std::string warning;
};

struct SeekerTag {
    UserId user;
    TagId tag;
};

/// Pairs in the popularity band, sampled without replacement (seeded).
std::vector<SeekerTag> sample_prediction_pairs(const TaggingStore& store, const PredictSpec& spec,
                                               std::size_t* eligible = nullptr);

/// Top-k by tf with the seeker's own triples removed (item id breaks ties).
std::vector<ItemId> global_top_k(const TaggingStore& store, UserId seeker, TagId tag, std::size_t k);

PredictReport predict_eval(const SocialNetwork& network, const TaggingStore& store, const PredictSpec& spec,
                           const std::vector<NamedProximity>& functions = default_prediction_functions());

/// Columns function,k,pairs,predicted,hit_rate.
void write_predict_csv(std::ostream& out, const PredictReport& report);

}  // namespace socialtopk
