#include "socialtopk/engine.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <unordered_map>

namespace socialtopk {

double cost(const RunStats& stats, const CostModel& model) {
    return model.user_list * static_cast<double>(stats.users_visited) +
           model.sequential * static_cast<double>(stats.seqitems);
}

Branch choose_branch(double alpha, double top_h, std::span<const BranchInputs> r_tags) {
    if (alpha <= 0.0) return Branch::Social;
    if (alpha >= 1.0) return Branch::Textual;
    for (const BranchInputs& in : r_tags) {
        const double max_social = (1.0 - alpha) * static_cast<double>(in.unseen) * top_h;
        const double max_textual = in.tf_known ? 0.0 : alpha * static_cast<double>(in.top_tf);
        if (max_social > max_textual) return Branch::Social;
    }
    return Branch::Textual;
}

namespace {

enum class Mode { Topks, ContextMerge };

bool ranks_before(const CandidateView& a, const CandidateView& b) noexcept {
    if (a.min != b.min) return a.min > b.min;
    if (a.max != b.max) return a.max > b.max;
    return a.item < b.item;
}

/// Private state of one query execution.
class Run {
public:
    Run(const SocialNetwork& network, const TaggingStore& store, const Query& query, const EngineOptions& options,
        Mode mode, BoundEstimator& estimator, std::span<const Visit> vector)
        : store_(store), query_(query), options_(options), mode_(mode), estimator_(estimator),
          model_(ScoreModel::for_query(query, store)), vector_(vector) {
        if (mode_ == Mode::Topks) iterator_.emplace(network, options.proximity, query.seeker);
        const std::size_t r = query.tags.size();
        cursors_.reserve(r);
        for (TagId t : query.tags) cursors_.emplace_back(store.inverted_list(t));
        top_tfs_.assign(r, 0);
        estimates_.resize(r);
        est_unseen_.resize(r);
    }

    TopKResult execute() {
        const auto start = std::chrono::steady_clock::now();
        if (!trivially_empty()) loop();
        TopKResult result = finish();
        result.stats.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return result;
    }

private:
    // A query none of whose items can match.
    bool trivially_empty() const {
        bool any = false;
        bool all = true;
        for (const InvertedCursor& c : cursors_) {
            any = any || !c.empty_list();
            all = all && !c.empty_list();
        }
        return query_.semantics == Semantics::Conjunctive ? !all : !any;
    }

    void loop() {
        if (mode_ == Mode::ContextMerge) {
            max_tfs_.reserve(cursors_.size());
            for (const InvertedCursor& c : cursors_) {
                max_tfs_.push_back(c.max_tf());
                if (!c.empty_list()) ++stats_.seqitems;
            }
        }
        bool done = evaluate();
        while (!done) {
            const bool social_ok = social_available();
            const bool textual_ok = textual_available();
            if (query_.alpha <= 0.0 ? !social_ok
                : query_.alpha >= 1.0 ? !textual_ok
                : !social_ok && !textual_ok)
                break;
            Branch branch = mode_ == Mode::ContextMerge ? context_merge_branch(social_ok) : topks_branch();
            if (branch == Branch::Social && !social_ok) branch = Branch::Textual;
            if (branch == Branch::Textual && !textual_ok) branch = Branch::Social;
            if (branch == Branch::Social) {
                social_step();
                ++stats_.social_steps;
            } else {
                textual_step();
                ++stats_.textual_steps;
            }
            ++stats_.steps;
            done = evaluate();
        }
    }

    // Proximity source.

    double top_h() {
        if (iterator_) return iterator_->peek_top();
        return vector_pos_ < vector_.size() ? vector_[vector_pos_].sigma : 0.0;
    }

    bool social_available() { return top_h() > 0.0; }

    std::optional<Visit> next_user() {
        if (iterator_) return iterator_->next();
        if (vector_pos_ >= vector_.size() || vector_[vector_pos_].sigma <= 0.0) return std::nullopt;
        return vector_[vector_pos_++];
    }

    bool textual_available() const {
        return std::any_of(cursors_.begin(), cursors_.end(), [](const InvertedCursor& c) { return !c.spent(); });
    }

    // Candidate bookkeeping.

    Candidate& candidate(ItemId item) {
        const auto [it, inserted] = index_.try_emplace(item, static_cast<std::uint32_t>(candidates_.size()));
        if (inserted) candidates_.push_back(Candidate{item, std::vector<TagState>(cursors_.size())});
        return candidates_[it->second];
    }

    bool in_candidates(ItemId item) const { return index_.contains(item); }

    void consume(std::size_t j) {
        const std::optional<Posting> head = cursors_[j].advance();
        ++stats_.seqitems;
        TagState& s = candidate(head->item).tags[j];
        s.tf_known = true;
        s.tf = head->tf;
    }

    void social_step() {
        const std::optional<Visit> visit = next_user();
        ++stats_.users_visited;
        if (options_.visit_trace != nullptr) options_.visit_trace->push_back(*visit);
        const bool is_seeker = visit->user == query_.seeker;
        if (!is_seeker) estimator_.observe(visit->sigma);
        if (!is_seeker || query_.include_seeker) {
            for (std::size_t j = 0; j < cursors_.size(); ++j) {
                for (ItemId item : store_.user_list(visit->user, query_.tags[j])) {
                    TagState& s = candidate(item).tags[j];
                    s.sf += visit->sigma;
                    ++s.partial_tf;
                }
            }
        }
        if (mode_ == Mode::Topks && options_.consume_inverted_lists) consume_known_heads();
    }

    // Advances every cursor whose head is already a candidate, until no head is.
    void consume_known_heads() {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t j = 0; j < cursors_.size(); ++j) {
                while (!cursors_[j].spent() && in_candidates(cursors_[j].top_item())) {
                    consume(j);
                    progress = true;
                }
            }
        }
    }

    void textual_step() {
        if (mode_ == Mode::ContextMerge) {
            consume(textual_tag_);
            return;
        }
        for (std::size_t j = 0; j < cursors_.size(); ++j) {
            if (!cursors_[j].spent()) consume(j);
        }
    }

    Branch topks_branch() {
        if (!r_) return fallback_branch(query_.alpha);
        const Candidate& r = candidates_[*r_];
        std::vector<BranchInputs> inputs;
        inputs.reserve(cursors_.size());
        for (std::size_t j = 0; j < cursors_.size(); ++j) {
            const TagState& s = r.tags[j];
            inputs.push_back({unseen_users(s, top_tfs_[j]), s.tf_known, top_tfs_[j]});
        }
        return choose_branch(query_.alpha, top_h_, inputs);
    }

    // Round-robin over tags comparing the tag's largest possible social
    // contribution with its textual one.
    Branch context_merge_branch(bool social_ok) {
        const std::size_t r = cursors_.size();
        const std::size_t j = rr_++ % r;
        const double alpha = query_.alpha;
        const double max_social = (1.0 - alpha) * static_cast<double>(max_tfs_[j]) * top_h_;
        const double max_textual = alpha * static_cast<double>(cursors_[j].top_tf());
        if (alpha <= 0.0 || (max_social > max_textual && social_ok)) return Branch::Social;
        for (std::size_t step = 0; step < r; ++step) {
            const std::size_t t = (j + step) % r;
            if (!cursors_[t].spent()) {
                textual_tag_ = t;
                return Branch::Textual;
            }
        }
        return Branch::Social;
    }

    // Recomputes every bound, the ranked view and the stop condition.
    bool evaluate() {
        top_h_ = top_h();
        for (std::size_t j = 0; j < cursors_.size(); ++j) top_tfs_[j] = cursors_[j].top_tf();
        const bool exact = estimator_.exact();

        views_.clear();
        ranked_.clear();
        others_.clear();
        for (std::size_t idx = 0; idx < candidates_.size(); ++idx) {
            const Candidate& c = candidates_[idx];
            for (std::size_t j = 0; j < cursors_.size(); ++j) {
                estimates_[j] = exact ? ProximityEstimate{top_h_, 0.0}
                                      : estimator_.estimate(unseen_users(c.tags[j], top_tfs_[j]), top_h_);
            }
            const ScoreBounds b = candidate_bounds(c, model_, top_tfs_, estimates_);
            views_.push_back({c.item, b.min, b.max});
            (qualified(c) ? ranked_ : others_).push_back(static_cast<std::uint32_t>(idx));
        }

        if (exact) {
            max_unseen_ = max_score_unseen(model_, top_h_, top_tfs_);
        } else {
            for (std::size_t j = 0; j < cursors_.size(); ++j)
                est_unseen_[j] = top_tfs_[j] == 0 ? 0.0 : estimator_.estimate(top_tfs_[j], top_h_).max;
            max_unseen_ = max_score_unseen(model_, top_tfs_, est_unseen_);
        }

        const auto by_rank = [this](std::uint32_t a, std::uint32_t b) { return ranks_before(views_[a], views_[b]); };
        const std::size_t k = std::min(query_.k, ranked_.size());
        std::partial_sort(ranked_.begin(), ranked_.begin() + static_cast<std::ptrdiff_t>(k), ranked_.end(), by_rank);
        others_.insert(others_.end(), ranked_.begin() + static_cast<std::ptrdiff_t>(k), ranked_.end());
        ranked_.resize(k);

        // r: the best optimistic candidate outside the top-k.
        r_.reset();
        double best_other = -std::numeric_limits<double>::infinity();
        for (std::uint32_t idx : others_) {
            const CandidateView& v = views_[idx];
            if (!r_ || v.max > best_other || (v.max == best_other && v.item < views_[*r_].item)) {
                r_ = idx;
                best_other = v.max;
            }
        }

        if (options_.observer) options_.observer(StepSnapshot{stats_.steps, top_h_, max_unseen_, views_});

        if (ranked_.size() < query_.k) return false;
        const double threshold = views_[ranked_.back()].min;
        if (!(threshold > best_other && threshold > max_unseen_)) return false;
        if (query_.exact_scores) {
            for (std::uint32_t idx : ranked_) {
                if (views_[idx].min != views_[idx].max) return false;
            }
        }
        terminated_ = true;
        return true;
    }

    // Whether the candidate may appear in the answer: evidence of a match on
    // some dimension, or on all of them for CONJUNCTIVE semantics.
    bool qualified(const Candidate& c) const {
        const auto evidence = [this](const TagState& s) { return has_evidence(s, query_.alpha); };
        if (query_.semantics == Semantics::Conjunctive) return std::all_of(c.tags.begin(), c.tags.end(), evidence);
        return std::any_of(c.tags.begin(), c.tags.end(), evidence);
    }

    TopKResult finish() {
        TopKResult result;
        result.stats = stats_;
        for (std::uint32_t idx : ranked_) {
            const CandidateView& v = views_[idx];
            result.items.push_back({v.item, v.min, v.max});
            result.partial = result.partial || v.min != v.max;
        }
        result.short_result = result.items.size() < query_.k;
        return result;
    }

    const TaggingStore& store_;
    const Query& query_;
    const EngineOptions& options_;
    Mode mode_;
    BoundEstimator& estimator_;
    ScoreModel model_;

    std::optional<ProximityIterator> iterator_;
    std::span<const Visit> vector_;
    std::size_t vector_pos_ = 0;

    std::vector<InvertedCursor> cursors_;
    std::vector<std::uint32_t> max_tfs_;
    std::size_t rr_ = 0;
    std::size_t textual_tag_ = 0;

    std::vector<Candidate> candidates_;
    std::unordered_map<ItemId, std::uint32_t> index_;

    // Scratch and results of the latest evaluate().
    double top_h_ = 0.0;
    double max_unseen_ = 0.0;
    std::vector<std::uint32_t> top_tfs_;
    std::vector<ProximityEstimate> estimates_;
    std::vector<double> est_unseen_;
    std::vector<CandidateView> views_;
    std::vector<std::uint32_t> ranked_;
    std::vector<std::uint32_t> others_;
    std::optional<std::uint32_t> r_;
    bool terminated_ = false;

    RunStats stats_;
};

}  // namespace

SearchEngine::SearchEngine(const SocialNetwork& network, const TaggingStore& store)
    : network_(&network), store_(&store) {}

TopKResult SearchEngine::topks_alpha0(const Query& query, const EngineOptions& options) const {
    if (query.alpha != 0.0) throw DomainError("topks_alpha0 requires alpha = 0");
    return topks(query, options);
}

TopKResult SearchEngine::topks(const Query& query, const EngineOptions& options) const {
    ExactEstimator exact;
    return topks_approx(query, exact, options);
}

TopKResult SearchEngine::topks_approx(const Query& query, BoundEstimator& estimator,
                                      const EngineOptions& options) const {
    validate(query);
    Run run(*network_, *store_, query, options, Mode::Topks, estimator, {});
    return run.execute();
}

TopKResult SearchEngine::topks_mvar(const Query& query, const SeekerSummary& summary, double delta,
                                    const EngineOptions& options) const {
    if (delta == 0.0 || query.tags.empty()) return topks(query, options);
    MeanVarianceEstimator estimator(summary, drill_delta_query(delta, query.tags.size()));
    return topks_approx(query, estimator, options);
}

TopKResult SearchEngine::topks_hist(const Query& query, const ProximityHistogram& histogram, double delta,
                                    const EngineOptions& options) const {
    if (delta == 0.0 || query.tags.empty()) return topks(query, options);
    HistogramEstimator estimator(histogram, drill_delta_query(delta, query.tags.size()));
    return topks_approx(query, estimator, options);
}

TopKResult SearchEngine::context_merge(const Query& query, std::span<const Visit> proximity_vector,
                                       const EngineOptions& options) const {
    validate(query);
    if (!proximity_vector.empty() && proximity_vector.front().user != query.seeker)
        throw DomainError("proximity vector does not start at the seeker");
    ExactEstimator exact;
    Run run(*network_, *store_, query, options, Mode::ContextMerge, exact, proximity_vector);
    return run.execute();
}

TopKResult SearchEngine::context_merge(const Query& query, const EngineOptions& options) const {
    const std::vector<Visit> vector = materialize_proximity(*network_, options.proximity, query.seeker);
    return context_merge(query, vector, options);
}

std::vector<ScoredItem> SearchEngine::exact_scores(const Query& query, const EngineOptions& options) const {
    validate(query);
    const std::vector<Visit> visits = materialize_proximity(*network_, options.proximity, query.seeker);
    const ScoreModel model = ScoreModel::for_query(query, *store_);
    const std::size_t r = query.tags.size();

    // Item universe: everything tagged with some query tag.
    std::unordered_map<ItemId, std::size_t> slot;
    std::vector<ItemId> items;
    for (TagId t : query.tags) {
        for (const Posting& p : store_->inverted_list(t)) {
            if (slot.try_emplace(p.item, items.size()).second) items.push_back(p.item);
        }
    }
    std::vector<double> sf(items.size() * r, 0.0);
    std::vector<std::uint32_t> tf(items.size() * r, 0);
    for (std::size_t j = 0; j < r; ++j) {
        for (const Posting& p : store_->inverted_list(query.tags[j])) tf[slot.at(p.item) * r + j] = p.tf;
    }
    for (const Visit& v : visits) {
        if (v.user == query.seeker && !query.include_seeker) continue;
        for (std::size_t j = 0; j < r; ++j) {
            for (ItemId item : store_->user_list(v.user, query.tags[j])) sf[slot.at(item) * r + j] += v.sigma;
        }
    }

    std::vector<ScoredItem> scored;
    std::vector<double> per_tag(r);
    for (std::size_t n = 0; n < items.size(); ++n) {
        std::size_t matched = 0;
        for (std::size_t j = 0; j < r; ++j) {
            const double fr = overall_frequency(tf[n * r + j], sf[n * r + j], query.alpha);
            if (fr > 0.0) ++matched;
            per_tag[j] = model.h[j](fr);
        }
        const bool matches = query.semantics == Semantics::Conjunctive ? matched == r : matched > 0;
        if (matches) scored.push_back({items[n], aggregate_query(per_tag)});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    return scored;
}

TopKResult SearchEngine::full_scan(const Query& query, const EngineOptions& options) const {
    const auto start = std::chrono::steady_clock::now();
    std::vector<ScoredItem> scored = exact_scores(query, options);
    TopKResult result;
    const std::size_t k = std::min(query.k, scored.size());
    for (std::size_t n = 0; n < k; ++n) result.items.push_back({scored[n].item, scored[n].score, scored[n].score});
    result.short_result = scored.size() < query.k;
    result.stats.users_visited = materialize_proximity(*network_, options.proximity, query.seeker).size();
    for (TagId t : query.tags) result.stats.seqitems += store_->inverted_list(t).size();
    result.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace socialtopk
