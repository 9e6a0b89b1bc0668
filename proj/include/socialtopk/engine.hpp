#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "socialtopk/approx.hpp"
#include "socialtopk/bounds.hpp"
#include "socialtopk/graph.hpp"
#include "socialtopk/scoring.hpp"
#include "socialtopk/store.hpp"

namespace socialtopk {

/// Abstract access costs: c_UL per user list visit, c_S per sequential
/// inverted-list read.
struct CostModel {
    double user_list = 100.0;
    double sequential = 1.0;
};

struct RunStats {
    std::size_t users_visited = 0;
    std::size_t seqitems = 0;
    std::size_t steps = 0;           ///< loop iterations until the stop condition
    std::size_t social_steps = 0;
    std::size_t textual_steps = 0;
    double wall_ms = 0.0;
};

double cost(const RunStats& stats, const CostModel& model = {});

struct ResultItem {
    ItemId item;
    double score;      ///< MinScore at stop time; exact when min == max
    double max_score;
};

struct TopKResult {
    std::vector<ResultItem> items;
    bool partial = false;       ///< some returned score is not final
    bool short_result = false;  ///< fewer than k scorable items exist
    RunStats stats;
};

/// One candidate's bounds as seen by an observer.
struct CandidateView {
    ItemId item;
    double min;
    double max;
};

struct StepSnapshot {
    std::size_t step;
    double top_h;
    double max_score_unseen;
    std::span<const CandidateView> candidates;
};

using StepObserver = std::function<void(const StepSnapshot&)>;

struct EngineOptions {
    ProximityFunction proximity = ProximityFunction::mul();
    /// Consume inverted-list heads that are already candidates during the
    /// social branch. Turning it off only changes cost, never results.
    bool consume_inverted_lists = true;
    /// Called after initialization and after every step.
    StepObserver observer;
    /// When set, receives every visited user in visit order.
    std::vector<Visit>* visit_trace = nullptr;
};

enum class Branch { Social, Textual };

struct BranchInputs {
    std::uint32_t unseen;  ///< unseen_users(r, t)
    bool tf_known;         ///< tf(t, r) already read
    std::uint32_t top_tf;
};

/// Branch that weighs most in the optimistic score of r, the best candidate
/// outside the top-k: SOCIAL iff (1-alpha)*unseen*top(H) > alpha*top_tf (the
/// latter 0 once tf is known) for some tag. alpha = 0 is always SOCIAL and
/// alpha = 1 always TEXTUAL.
Branch choose_branch(double alpha, double top_h, std::span<const BranchInputs> r_tags);

/// Branch rule without a reference candidate (|D| <= k).
inline Branch fallback_branch(double alpha) noexcept { return alpha < 1.0 ? Branch::Social : Branch::Textual; }

struct ScoredItem {
    ItemId item;
    double score;
};

/// Top-k engines over one shared, immutable network and store. Every method
/// is const and thread-safe; each call owns its private run state.
class SearchEngine {
public:
    SearchEngine(const SocialNetwork& network, const TaggingStore& store);

    /// Exclusively social search. Throws DomainError unless alpha == 0.
    TopKResult topks_alpha0(const Query& query, const EngineOptions& options = {}) const;

    /// Hybrid social/textual search for any alpha.
    TopKResult topks(const Query& query, const EngineOptions& options = {}) const;

    /// topks with EstMax/EstMin supplied by `estimator`.
    TopKResult topks_approx(const Query& query, BoundEstimator& estimator, const EngineOptions& options = {}) const;

    /// Mean/variance bounds. delta == 0 runs the exact algorithm.
    TopKResult topks_mvar(const Query& query, const SeekerSummary& summary, double delta,
                          const EngineOptions& options = {}) const;

    /// Histogram bounds. delta == 0 runs the exact algorithm.
    TopKResult topks_hist(const Query& query, const ProximityHistogram& histogram, double delta,
                          const EngineOptions& options = {}) const;

    /// Baseline over a precomputed proximity vector (seeker first): no
    /// inverted-list consumption in the social branch, round-robin branch
    /// choice on max_tf.
    TopKResult context_merge(const Query& query, std::span<const Visit> proximity_vector,
                             const EngineOptions& options = {}) const;

    /// Materializes the seeker's proximity vector (outside the timed region)
    /// and runs context_merge.
    TopKResult context_merge(const Query& query, const EngineOptions& options = {}) const;

    /// Exact score of every item that matches the query, best first
    /// (score desc, item asc).
    std::vector<ScoredItem> exact_scores(const Query& query, const EngineOptions& options = {}) const;

    /// Top-k of exact_scores with full-scan costs.
    TopKResult full_scan(const Query& query, const EngineOptions& options = {}) const;

    const SocialNetwork& network() const noexcept { return *network_; }
    const TaggingStore& store() const noexcept { return *store_; }

private:
    const SocialNetwork* network_;
    const TaggingStore* store_;
};

}  // namespace socialtopk
