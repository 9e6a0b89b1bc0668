#include "socialtopk/predict.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <random>

#include "socialtopk/engine.hpp"

namespace socialtopk {

namespace {

bool hit(std::span<const ItemId> own, const std::vector<ItemId>& returned) {
    return std::any_of(returned.begin(), returned.end(),
                       [&](ItemId i) { return std::binary_search(own.begin(), own.end(), i); });
}

}  // namespace

std::vector<NamedProximity> default_prediction_functions() {
    return {{"mul", ProximityFunction::mul()},
            {"min", ProximityFunction::min()},
            {"pow1.1", ProximityFunction::pow(1.1)},
            {"pow2", ProximityFunction::pow(2.0)}};
}

std::vector<SeekerTag> sample_prediction_pairs(const TaggingStore& store, const PredictSpec& spec,
                                               std::size_t* eligible) {
    std::vector<SeekerTag> pool;
    std::vector<std::size_t> uses(store.num_tags());
    for (TagId t = 0; t < uses.size(); ++t) uses[t] = store.tag_uses(t);
    // triples() is sorted by user, item, tag; collect each (user, tag) once.
    std::vector<std::pair<UserId, TagId>> seen;
    for (const Triple& tr : store.triples()) seen.emplace_back(tr.user, tr.tag);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& [u, t] : seen) {
        const std::size_t n = store.user_list(u, t).size();
        if (n >= spec.min_items && n <= spec.max_items && uses[t] >= spec.min_tag_uses) pool.push_back({u, t});
    }
    if (eligible != nullptr) *eligible = pool.size();
    std::mt19937_64 rng(spec.seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(pool.size(), spec.pairs));
    return pool;
}

std::vector<ItemId> global_top_k(const TaggingStore& store, UserId seeker, TagId tag, std::size_t k) {
    const std::span<const ItemId> own = store.user_list(seeker, tag);
    std::vector<Posting> adjusted;
    for (const Posting& p : store.inverted_list(tag)) {
        const std::uint32_t tf = p.tf - (std::binary_search(own.begin(), own.end(), p.item) ? 1u : 0u);
        if (tf > 0) adjusted.push_back({p.item, tf});
    }
    std::sort(adjusted.begin(), adjusted.end(), [](const Posting& a, const Posting& b) {
        if (a.tf != b.tf) return a.tf > b.tf;
        return a.item < b.item;
    });
    std::vector<ItemId> out;
    for (std::size_t n = 0; n < std::min(k, adjusted.size()); ++n) out.push_back(adjusted[n].item);
    return out;
}

PredictReport predict_eval(const SocialNetwork& network, const TaggingStore& store, const PredictSpec& spec,
                           const std::vector<NamedProximity>& functions) {
    PredictReport report;
    const std::vector<SeekerTag> pairs = sample_prediction_pairs(store, spec, &report.eligible_pairs);
    if (pairs.size() < spec.pairs) {
        report.warning = "only " + std::to_string(pairs.size()) + " of " + std::to_string(spec.pairs) +
                         " requested (user, tag) pairs qualify";
    }
    const SearchEngine engine(network, store);
    const auto rate = [&](std::size_t predicted) {
        return pairs.empty() ? 0.0 : static_cast<double>(predicted) / static_cast<double>(pairs.size());
    };
    for (const NamedProximity& f : functions) {
        EngineOptions options;
        options.proximity = f.function;
        for (std::size_t k : spec.ks) {
            std::size_t predicted = 0;
            for (const SeekerTag& p : pairs) {
                Query q;
                q.seeker = p.user;
                q.tags = {p.tag};
                q.k = k;
                q.alpha = 0.0;
                q.include_seeker = false;
                std::vector<ItemId> returned;
                if (network.contains(p.user)) {
                    for (const ResultItem& r : engine.topks(q, options).items) returned.push_back(r.item);
                }
                predicted += hit(store.user_list(p.user, p.tag), returned);
            }
            report.rows.push_back({f.name, k, pairs.size(), predicted, rate(predicted)});
        }
    }
    for (std::size_t k : spec.ks) {
        std::size_t predicted = 0;
        for (const SeekerTag& p : pairs)
            predicted += hit(store.user_list(p.user, p.tag), global_top_k(store, p.user, p.tag, k));
        report.rows.push_back({"global", k, pairs.size(), predicted, rate(predicted)});
    }
    return report;
}

void write_predict_csv(std::ostream& out, const PredictReport& report) {
    out << "function,k,pairs,predicted,hit_rate\n";
    for (const PredictRow& row : report.rows) {
        char rate[32];
        std::snprintf(rate, sizeof rate, "%.6f", row.hit_rate);
        out << row.function << ',' << row.k << ',' << row.pairs << ',' << row.predicted << ',' << rate << '\n';
    }
}

}  // namespace socialtopk
