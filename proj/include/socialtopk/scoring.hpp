#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "socialtopk/common.hpp"
#include "socialtopk/store.hpp"

namespace socialtopk {

enum class RankingKind { Identity, TfIdf, Bm15 };

enum class Semantics { Disjunctive, Conjunctive };

struct RankingSpec {
    RankingKind kind = RankingKind::Identity;
    double k1 = 1.2;
    /// Clamp idf at 0 instead of passing negative values through.
    bool idf_floor = false;
};

/// Sum of proximities of the visited taggers.
double social_frequency(std::span<const double> tagger_proximities);

/// alpha * tf + (1 - alpha) * sf. Every engine and the oracle go through this
/// one expression so bounds and exact scores round identically.
inline double overall_frequency(double tf, double sf, double alpha) noexcept {
    return alpha * tf + (1.0 - alpha) * sf;
}

/// Natural-log idf with 0.5 smoothing: log((|I| - n_t + 0.5) / (n_t + 0.5)).
double idf(std::size_t num_items, std::size_t items_with_tag);
double idf(TagId tag, const TaggingStore& store);

/// h(fr) for one query dimension. Monotone in fr (increasing for idf >= 0,
/// decreasing for negative idf) with h(0) = 0.
class RankingFunction {
public:
    RankingFunction() = default;
    RankingFunction(RankingSpec spec, double idf_value);

    double operator()(double fr) const noexcept;

    /// The part of h that depends on fr, before the idf factor.
    double fr_factor(double fr) const noexcept;

    /// TFIDF and IDENTITY scale linearly with fr; BM15 is concave. Pessimistic
    /// proximity estimates may only be substituted into linear functions.
    bool linear() const noexcept { return spec_.kind != RankingKind::Bm15; }

    double idf_value() const noexcept { return idf_; }
    const RankingSpec& spec() const noexcept { return spec_; }

private:
    RankingSpec spec_;
    double idf_ = 1.0;
};

/// g: summation over the per-tag scores, in query order.
double aggregate_query(std::span<const double> per_tag_scores);

/// A query: the seeker and its distinct tags plus score parameters.
struct Query {
    UserId seeker = 0;
    std::vector<TagId> tags;
    std::size_t k = 10;
    double alpha = 0.0;
    RankingSpec ranking;
    Semantics semantics = Semantics::Disjunctive;
    /// Count the seeker's own tagging toward social frequency.
    bool include_seeker = false;
    /// Keep visiting until the k returned scores are final.
    bool exact_scores = false;
};

/// Throws DomainError on k == 0, alpha outside [0,1], or repeated known tags.
void validate(const Query& query);

/// Per-query scoring parameters, including h for each query tag.
struct ScoreModel {
    double alpha = 0.0;
    Semantics semantics = Semantics::Disjunctive;
    std::vector<RankingFunction> h;

    static ScoreModel for_query(const Query& query, const TaggingStore& store);

    std::size_t dimensions() const noexcept { return h.size(); }
};

}  // namespace socialtopk
