#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace oracle {

std::vector<double> enumerate_paths(const SocialNetwork& g, const ProximityFunction& f, UserId seeker) {
    const std::size_t n = g.num_users();
    std::vector<double> best(n, 0.0);
    std::vector<char> on_path(n, 0);
    std::vector<double> weights;
    std::function<void(UserId)> dfs = [&](UserId u) {
        best[u] = std::max(best[u], f.aggregate(weights));
        on_path[u] = 1;
        for (const Neighbor& nb : g.neighbors(u)) {
            if (on_path[nb.user]) continue;
            weights.push_back(nb.weight);
            dfs(nb.user);
            weights.pop_back();
        }
        on_path[u] = 0;
    };
    dfs(seeker);
    return best;
}

namespace {

std::vector<double> dijkstra(const SocialNetwork& g, UserId seeker, const std::function<double(double)>& length) {
    const std::size_t n = g.num_users();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, UserId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[seeker] = 0.0;
    pq.push({0.0, seeker});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const Neighbor& nb : g.neighbors(u)) {
            const double nd = d + length(nb.weight);
            if (nd < dist[nb.user]) {
                dist[nb.user] = nd;
                pq.push({nd, nb.user});
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<double> dijkstra_neg_log(const SocialNetwork& g, UserId seeker) {
    std::vector<double> dist = dijkstra(g, seeker, [](double w) { return -std::log(w); });
    for (double& d : dist) d = std::isinf(d) ? 0.0 : std::exp(-d);
    return dist;
}

std::vector<double> dijkstra_pow(const SocialNetwork& g, double lambda, UserId seeker) {
    std::vector<double> dist = dijkstra(g, seeker, [](double w) { return 1.0 / w; });
    for (double& d : dist) d = std::isinf(d) ? 0.0 : std::pow(lambda, -d);
    return dist;
}

std::vector<double> bottleneck_mst(const SocialNetwork& g, UserId seeker) {
    const std::size_t n = g.num_users();
    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.weight > b.weight; });
    std::vector<UserId> parent(n);
    std::iota(parent.begin(), parent.end(), UserId{0});
    std::function<UserId(UserId)> find = [&](UserId x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<std::vector<std::pair<UserId, double>>> tree(n);
    for (const Edge& e : edges) {
        const UserId a = find(e.u);
        const UserId b = find(e.v);
        if (a == b) continue;
        parent[a] = b;
        tree[e.u].push_back({e.v, e.weight});
        tree[e.v].push_back({e.u, e.weight});
    }
    std::vector<double> best(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<UserId> stack{seeker};
    best[seeker] = 1.0;
    seen[seeker] = 1;
    while (!stack.empty()) {
        const UserId u = stack.back();
        stack.pop_back();
        for (const auto& [v, w] : tree[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            best[v] = std::min(best[u], w);
            stack.push_back(v);
        }
    }
    return best;
}

std::vector<double> proximity(const SocialNetwork& g, const ProximityFunction& f, UserId seeker) {
    switch (f.kind()) {
        case ProximityKind::Mul: return dijkstra_neg_log(g, seeker);
        case ProximityKind::Min: return bottleneck_mst(g, seeker);
        case ProximityKind::Pow: return dijkstra_pow(g, f.lambda(), seeker);
    }
    return {};
}

std::vector<ScoredItem> brute_force_scores(const SocialNetwork& g, const TaggingStore& store, const Query& q,
                                           const ProximityFunction& f) {
    const std::vector<double> sigma = proximity(g, f, q.seeker);
    const std::size_t r = q.tags.size();
    std::map<ItemId, std::vector<std::pair<double, double>>> acc;  // item -> per tag (tf, sf)
    for (const Triple& t : store.triples()) {
        for (std::size_t j = 0; j < r; ++j) {
            if (t.tag != q.tags[j]) continue;
            auto& v = acc.try_emplace(t.item, r, std::pair<double, double>{0.0, 0.0}).first->second;
            v[j].first += 1.0;
            if (t.user != q.seeker || q.include_seeker) v[j].second += t.user < sigma.size() ? sigma[t.user] : 0.0;
        }
    }
    const std::size_t num_items = store.num_items();
    std::vector<ScoredItem> out;
    for (const auto& [item, v] : acc) {
        double score = 0.0;
        std::size_t matched = 0;
        for (std::size_t j = 0; j < r; ++j) {
            const double fr = q.alpha * v[j].first + (1.0 - q.alpha) * v[j].second;
            if (fr > 0.0) ++matched;
            std::set<ItemId> tagged;
            for (const Triple& t : store.triples()) {
                if (t.tag == q.tags[j]) tagged.insert(t.item);
            }
            const double n_t = static_cast<double>(tagged.size());
            const double idf_value = std::log((static_cast<double>(num_items) - n_t + 0.5) / (n_t + 0.5));
            switch (q.ranking.kind) {
                case RankingKind::Identity: score += fr; break;
                case RankingKind::TfIdf: score += fr * idf_value; break;
                case RankingKind::Bm15:
                    score += (q.ranking.k1 + 1.0) * fr / (q.ranking.k1 + fr) * idf_value;
                    break;
            }
        }
        const bool matches = q.semantics == Semantics::Conjunctive ? matched == r : matched > 0;
        if (matches) out.push_back({item, score});
    }
    std::sort(out.begin(), out.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    return out;
}

SocialNetwork random_network(std::size_t users, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    std::vector<Edge> edges;
    for (UserId u = 0; u < users; ++u) {
        for (UserId v = u + 1; v < users; ++v) {
            if (!coin(rng)) continue;
            double w = 1.0 - weight(rng);  // (0,1]
            edges.push_back({u, v, w});
        }
    }
    return SocialNetwork(users, edges);
}

Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
    std::uniform_int_distribution<std::size_t> users_d(1, shape.max_users);
    std::uniform_int_distribution<std::size_t> items_d(1, shape.max_items);
    std::uniform_int_distribution<std::size_t> tags_d(1, shape.max_tags);
    const std::size_t users = users_d(rng);
    const std::size_t items = items_d(rng);
    const std::size_t tags = tags_d(rng);
    const double degree = std::uniform_real_distribution<double>(1.0, 6.0)(rng);
    const double p = users > 1 ? std::min(1.0, degree / static_cast<double>(users - 1)) : 0.0;

    Instance inst;
    inst.network = random_network(users, p, rng);
    inst.num_tags = tags;
    // Skewed popularity: item and tag ranks drawn from a squared uniform.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Triple> triples;
    const double activity = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
    for (UserId u = 0; u < users; ++u) {
        const auto n = static_cast<std::size_t>(std::floor(unit(rng) * 2.0 * activity));
        for (std::size_t b = 0; b < n; ++b) {
            const double a = unit(rng);
            const double c = unit(rng);
            triples.push_back({u, static_cast<ItemId>(a * a * items), static_cast<TagId>(c * c * tags)});
        }
    }
    inst.store = TaggingStore(std::move(triples), users, items, tags);
    return inst;
}

Query random_query(const Instance& instance, std::mt19937_64& rng) {
    Query q;
    const std::size_t users = instance.network.num_users();
    q.seeker = static_cast<UserId>(std::uniform_int_distribution<std::size_t>(0, users - 1)(rng));
    std::vector<TagId> tags(instance.num_tags);
    std::iota(tags.begin(), tags.end(), TagId{0});
    std::shuffle(tags.begin(), tags.end(), rng);
    const std::size_t count = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, tags.size()))(rng);
    tags.resize(count);
    q.tags = tags;
    static constexpr std::size_t ks[] = {1, 3, 5};
    q.k = ks[std::uniform_int_distribution<int>(0, 2)(rng)];
    return q;
}

std::vector<double> returned_exact_scores(const TopKResult& result, const std::vector<ScoredItem>& exact) {
    std::vector<double> out;
    for (const ResultItem& r : result.items) {
        const auto it = std::find_if(exact.begin(), exact.end(), [&](const ScoredItem& s) { return s.item == r.item; });
        if (it == exact.end()) return {std::numeric_limits<double>::quiet_NaN()};
        out.push_back(it->score);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> top_scores(const std::vector<ScoredItem>& exact, std::size_t k) {
    std::vector<double> out;
    for (std::size_t n = 0; n < std::min(k, exact.size()); ++n) out.push_back(exact[n].score);
    return out;
}

bool same_scores(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (!(std::abs(a[n] - b[n]) <= tol)) return false;
    }
    return true;
}

}  // namespace oracle
