#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "socialtopk/approx.hpp"
#include "socialtopk/scoring.hpp"

namespace socialtopk {

/// What a run knows about one (item, query tag) pair.
struct TagState {
    double sf = 0.0;               ///< running sum of visited taggers' proximities
    std::uint32_t partial_tf = 0;  ///< visited taggers so far
    bool tf_known = false;         ///< consumed from the inverted list (in CIL)
    std::uint32_t tf = 0;
};

struct Candidate {
    ItemId item = 0;
    std::vector<TagState> tags;  ///< one entry per query tag
};

/// Upper bound on yet unvisited taggers of (item, tag). Before the tf is known
/// the cursor head bounds it; this equals the value maintained by decrementing
/// on each visit and propagating every top_tf drop to items outside CIL.
inline std::uint32_t unseen_users(const TagState& s, std::uint32_t top_tf) noexcept {
    const std::uint32_t bound = s.tf_known ? s.tf : top_tf;
    return bound > s.partial_tf ? bound - s.partial_tf : 0u;
}

/// Evidence that the item matches this dimension (pessimistic fr > 0).
bool has_evidence(const TagState& s, double alpha) noexcept;

struct FrRange {
    double lo;
    double hi;
};

/// Pessimistic and optimistic overall frequency of one dimension. With the
/// exact estimate (top(H), 0) these are the exact-algorithm bounds; other
/// estimates give the approximate substitutions (EstMin only for consumed
/// items and only when `use_est_min`).
FrRange fr_bounds(const TagState& s, double alpha, std::uint32_t top_tf, const ProximityEstimate& est,
                  bool use_est_min) noexcept;

struct ScoreBounds {
    double min;
    double max;
};

/// Candidate bounds summed over the query dimensions. `estimates` holds one
/// estimate per query tag (the estimate may depend on unseen_users).
/// CONJUNCTIVE semantics pins min to 0 until every dimension has evidence.
ScoreBounds candidate_bounds(const Candidate& c, const ScoreModel& model, std::span<const std::uint32_t> top_tfs,
                             std::span<const ProximityEstimate> estimates);

/// Exact-algorithm optimistic bound.
double max_score(const Candidate& c, const ScoreModel& model, double top_h, std::span<const std::uint32_t> top_tfs);
/// h of the pessimistic fr summed over the tags. Equals candidate_bounds().min
/// whenever every h is non-decreasing (idf >= 0).
double min_score(const Candidate& c, const ScoreModel& model);

/// Bound on any item not yet met: per tag fr = alpha*top_tf + (1-alpha)*top_h*top_tf.
double max_score_unseen(const ScoreModel& model, double top_h, std::span<const std::uint32_t> top_tfs);

/// Same with EstMax per tag in place of top(H).
double max_score_unseen(const ScoreModel& model, std::span<const std::uint32_t> top_tfs,
                        std::span<const double> est_max);

}  // namespace socialtopk
