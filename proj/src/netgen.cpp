#include "socialtopk/netgen.hpp"

#include <algorithm>

#include "socialtopk/common.hpp"

namespace socialtopk {

double dice(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
    if (x.empty() && y.empty()) throw DomainError("dice of two empty sets is undefined");
    std::size_t common = 0;
    auto a = x.begin();
    auto b = y.begin();
    while (a != x.end() && b != y.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++common;
            ++a;
            ++b;
        }
    }
    return 2.0 * static_cast<double>(common) / static_cast<double>(x.size() + y.size());
}

std::vector<std::vector<std::uint32_t>> user_features(const TaggingStore& store, SimilarityBasis basis) {
    std::vector<std::vector<std::uint32_t>> features(store.num_users());
    for (const Triple& t : store.triples()) {
        auto& f = features[t.user];
        switch (basis) {
            case SimilarityBasis::Items: f.push_back(t.item); break;
            case SimilarityBasis::Tags: f.push_back(t.tag); break;
            case SimilarityBasis::ItemsAndTags:
                f.push_back(2 * t.item);
                f.push_back(2 * t.tag + 1);
                break;
        }
    }
    for (auto& f : features) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
    }
    return features;
}

std::vector<Edge> similarity_edges(const TaggingStore& store, const SimilaritySpec& spec,
                                   NetworkBuildReport* report) {
    if (!(spec.weight_floor >= 0.0)) throw DomainError("weight floor must be non-negative");
    std::vector<std::vector<std::uint32_t>> features = user_features(store, spec.basis);
    if (spec.basis == SimilarityBasis::Tags) {
        for (UserId u = 0; u < features.size(); ++u) {
            if (store.distinct_tags_of(u) < spec.min_distinct_tags) features[u].clear();
        }
    }

    std::uint32_t feature_space = 0;
    for (const auto& f : features) {
        if (!f.empty()) feature_space = std::max(feature_space, f.back() + 1);
    }
    std::vector<std::vector<UserId>> holders(feature_space);
    NetworkBuildReport local;
    for (UserId u = 0; u < features.size(); ++u) {
        if (features[u].empty()) continue;
        ++local.users_considered;
        for (std::uint32_t f : features[u]) holders[f].push_back(u);
    }

    std::vector<Edge> edges;
    std::vector<std::uint32_t> common(features.size(), 0);
    std::vector<UserId> touched;
    for (UserId u = 0; u < features.size(); ++u) {
        touched.clear();
        for (std::uint32_t f : features[u]) {
            // holders[f] is ascending, so the partners above u form a suffix.
            const auto& list = holders[f];
            for (auto it = std::upper_bound(list.begin(), list.end(), u); it != list.end(); ++it) {
                if (common[*it]++ == 0) touched.push_back(*it);
            }
        }
        std::sort(touched.begin(), touched.end());
        local.pairs_examined += touched.size();
        for (UserId v : touched) {
            const double w = 2.0 * static_cast<double>(common[v]) /
                             static_cast<double>(features[u].size() + features[v].size());
            common[v] = 0;
            if (w > spec.weight_floor && w > 0.0) edges.push_back({u, v, std::min(w, 1.0)});
        }
    }
    local.edges = edges.size();
    if (report != nullptr) *report = local;
    return edges;
}

SocialNetwork build_network(const TaggingStore& store, const SimilaritySpec& spec, NetworkBuildReport* report) {
    const std::vector<Edge> edges = similarity_edges(store, spec, report);
    return SocialNetwork(store.num_users(), edges);
}

}  // namespace socialtopk
