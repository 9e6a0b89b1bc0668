#include "socialtopk/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace socialtopk {

double social_frequency(std::span<const double> tagger_proximities) {
    double sf = 0.0;
    for (double s : tagger_proximities) sf += s;
    return sf;
}

double idf(std::size_t num_items, std::size_t items_with_tag) {
    const double n_t = static_cast<double>(items_with_tag);
    return std::log((static_cast<double>(num_items) - n_t + 0.5) / (n_t + 0.5));
}

double idf(TagId tag, const TaggingStore& store) {
    return idf(store.num_items(), store.items_with_tag(tag));
}

RankingFunction::RankingFunction(RankingSpec spec, double idf_value)
    : spec_(spec), idf_(spec.idf_floor ? std::max(0.0, idf_value) : idf_value) {
    if (spec_.kind == RankingKind::Bm15 && !(spec_.k1 > 0.0)) {
        throw DomainError("BM15 requires k1 > 0");
    }
}

double RankingFunction::fr_factor(double fr) const noexcept {
    switch (spec_.kind) {
        case RankingKind::Identity:
        case RankingKind::TfIdf:
            return fr;
        case RankingKind::Bm15:
            return (spec_.k1 + 1.0) * fr / (spec_.k1 + fr);
    }
    return fr;
}

double RankingFunction::operator()(double fr) const noexcept {
    if (spec_.kind == RankingKind::Identity) return fr;
    return fr_factor(fr) * idf_;
}

double aggregate_query(std::span<const double> per_tag_scores) {
    double total = 0.0;
    for (double s : per_tag_scores) total += s;
    return total;
}

void validate(const Query& query) {
    if (query.k == 0) throw DomainError("k must be at least 1");
    if (!(query.alpha >= 0.0 && query.alpha <= 1.0)) {
        throw DomainError("alpha " + std::to_string(query.alpha) + " outside [0,1]");
    }
    for (std::size_t i = 0; i < query.tags.size(); ++i) {
        for (std::size_t j = i + 1; j < query.tags.size(); ++j) {
            if (query.tags[i] == query.tags[j] && query.tags[i] != kUnknownTag) {
                throw DomainError("query tags must be distinct");
            }
        }
    }
}

ScoreModel ScoreModel::for_query(const Query& query, const TaggingStore& store) {
    ScoreModel model;
    model.alpha = query.alpha;
    model.semantics = query.semantics;
    model.h.reserve(query.tags.size());
    for (TagId t : query.tags) {
        model.h.emplace_back(query.ranking, idf(t, store));
    }
    return model;
}

}  // namespace socialtopk
