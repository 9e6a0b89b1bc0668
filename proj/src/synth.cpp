#include "socialtopk/synth.hpp"

#include <algorithm>
#include <cmath>

#include "socialtopk/common.hpp"

namespace socialtopk {

ZipfSampler::ZipfSampler(std::size_t n, double s) {
    if (n == 0) throw DomainError("zipf sampler needs at least one rank");
    cdf_.resize(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), s);
        cdf_[r] = total;
    }
    for (double& c : cdf_) c /= total;
}

std::size_t ZipfSampler::operator()(std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

std::vector<Triple> synthesize_tagging(const SynthSpec& spec) {
    if (spec.users == 0 || spec.items == 0 || spec.tags == 0 || spec.communities == 0)
        throw DomainError("synthetic corpus needs users, items, tags and communities");
    if (spec.min_bookmarks == 0 || spec.max_bookmarks < spec.min_bookmarks)
        throw DomainError("bookmark range must satisfy 1 <= min <= max");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t communities = std::min(spec.communities, spec.items);
    const std::size_t pool_size = (spec.items + communities - 1) / communities;
    const ZipfSampler global_items(spec.items, spec.item_skew);
    const ZipfSampler pool_items(pool_size, spec.item_skew);
    const ZipfSampler tag_ranks(spec.tags, spec.tag_skew);
    const std::size_t per_item = std::clamp<std::size_t>(spec.tags_per_item, 1, spec.tags);
    const ZipfSampler item_tag_ranks(per_item, spec.tag_skew);

    // Topical tags per item: each community rotates the global tag ranking.
    std::vector<std::vector<TagId>> item_tags(spec.items);
    for (std::size_t i = 0; i < spec.items; ++i) {
        const std::size_t offset = (i % communities) * spec.tags / communities;
        auto& tags = item_tags[i];
        while (tags.size() < per_item) {
            const auto t = static_cast<TagId>((tag_ranks(rng) + offset) % spec.tags);
            if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(t);
        }
    }

    std::vector<Triple> triples;
    for (std::size_t u = 0; u < spec.users; ++u) {
        const std::size_t community = u % communities;
        const double pareto = static_cast<double>(spec.min_bookmarks) /
                              std::pow(1.0 - unit(rng), 1.0 / spec.activity_shape);
        const auto bookmarks = static_cast<std::size_t>(
            std::min(pareto, static_cast<double>(spec.max_bookmarks)));
        for (std::size_t b = 0; b < bookmarks; ++b) {
            std::size_t item;
            if (unit(rng) < spec.community_affinity) {
                item = community + communities * pool_items(rng);
                if (item >= spec.items) item = community;
            } else {
                item = global_items(rng);
            }
            const std::size_t n_tags = 1 + static_cast<std::size_t>(unit(rng) * spec.max_tags_per_bookmark);
            for (std::size_t n = 0; n < std::min(n_tags, spec.max_tags_per_bookmark); ++n) {
                triples.push_back({static_cast<UserId>(u), static_cast<ItemId>(item),
                                   item_tags[item][item_tag_ranks(rng)]});
            }
        }
    }
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    return triples;
}

}  // namespace socialtopk
