#include "socialtopk/bounds.hpp"

#include <algorithm>

namespace socialtopk {

bool has_evidence(const TagState& s, double alpha) noexcept {
    const double tf_lo = s.tf_known ? s.tf : s.partial_tf;
    return overall_frequency(tf_lo, s.sf, alpha) > 0.0;
}

FrRange fr_bounds(const TagState& s, double alpha, std::uint32_t top_tf, const ProximityEstimate& est,
                  bool use_est_min) noexcept {
    const double unseen = unseen_users(s, top_tf);
    const double tf_hi = s.tf_known ? s.tf : top_tf;
    const double hi = overall_frequency(tf_hi, s.sf + est.max * unseen, alpha);
    double lo;
    if (s.tf_known) {
        const double est_min = use_est_min ? est.min : 0.0;
        lo = overall_frequency(s.tf, s.sf + est_min * unseen, alpha);
    } else {
        lo = overall_frequency(s.partial_tf, s.sf, alpha);
    }
    return {lo, hi};
}

ScoreBounds candidate_bounds(const Candidate& c, const ScoreModel& model, std::span<const std::uint32_t> top_tfs,
                             std::span<const ProximityEstimate> estimates) {
    ScoreBounds b{0.0, 0.0};
    bool all_evidence = true;
    for (std::size_t j = 0; j < model.h.size(); ++j) {
        const RankingFunction& h = model.h[j];
        const FrRange fr = fr_bounds(c.tags[j], model.alpha, top_tfs[j], estimates[j], h.linear());
        const double a = h(fr.lo);
        const double z = h(fr.hi);
        b.min += std::min(a, z);
        b.max += std::max(a, z);
        all_evidence = all_evidence && has_evidence(c.tags[j], model.alpha);
    }
    if (model.semantics == Semantics::Conjunctive && !all_evidence) b.min = 0.0;
    return b;
}

double max_score(const Candidate& c, const ScoreModel& model, double top_h, std::span<const std::uint32_t> top_tfs) {
    std::vector<ProximityEstimate> est(model.h.size(), ProximityEstimate{top_h, 0.0});
    return candidate_bounds(c, model, top_tfs, est).max;
}

double min_score(const Candidate& c, const ScoreModel& model) {
    double total = 0.0;
    bool all_evidence = true;
    for (std::size_t j = 0; j < model.h.size(); ++j) {
        const TagState& s = c.tags[j];
        total += model.h[j](overall_frequency(s.tf_known ? s.tf : s.partial_tf, s.sf, model.alpha));
        all_evidence = all_evidence && has_evidence(s, model.alpha);
    }
    return model.semantics == Semantics::Conjunctive && !all_evidence ? 0.0 : total;
}

double max_score_unseen(const ScoreModel& model, std::span<const std::uint32_t> top_tfs,
                        std::span<const double> est_max) {
    double total = 0.0;
    for (std::size_t j = 0; j < model.h.size(); ++j) {
        const double tf = top_tfs[j];
        const double fr = overall_frequency(tf, est_max[j] * tf, model.alpha);
        total += std::max(0.0, model.h[j](fr));
    }
    return total;
}

double max_score_unseen(const ScoreModel& model, double top_h, std::span<const std::uint32_t> top_tfs) {
    std::vector<double> est(model.h.size(), top_h);
    return max_score_unseen(model, top_tfs, est);
}

}  // namespace socialtopk
