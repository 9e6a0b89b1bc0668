#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "socialtopk/graph.hpp"
#include "socialtopk/store.hpp"

namespace socialtopk {

enum class SimilarityBasis { Items, Tags, ItemsAndTags };

struct SimilaritySpec {
    SimilarityBasis basis = SimilarityBasis::Items;
    /// Users with fewer distinct tags are dropped. Applies to the TAGS basis only.
    std::size_t min_distinct_tags = 10;
    /// An edge is kept only when its Dice value exceeds this.
    double weight_floor = 0.0;
};

/// 2|X n Y| / (|X| + |Y|) over sorted, duplicate-free sets.
/// Throws DomainError when both sets are empty.
double dice(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y);

struct NetworkBuildReport {
    std::size_t users_considered = 0;
    /// Distinct user pairs that share at least one feature.
    std::size_t pairs_examined = 0;
    std::size_t edges = 0;
};

/// Sorted feature set of every user under `basis`. ITEMS_AND_TAGS
/// interleaves namespaces: item i becomes 2i and tag t becomes 2t+1.
std::vector<std::vector<std::uint32_t>> user_features(const TaggingStore& store, SimilarityBasis basis);

/// Dice similarity edges (u < v). Pairs are enumerated through a feature ->
/// users index, so users without a common feature are never compared.
std::vector<Edge> similarity_edges(const TaggingStore& store, const SimilaritySpec& spec,
                                   NetworkBuildReport* report = nullptr);

/// Network over the store's user id space.
SocialNetwork build_network(const TaggingStore& store, const SimilaritySpec& spec,
                            NetworkBuildReport* report = nullptr);

}  // namespace socialtopk
