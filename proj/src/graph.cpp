#include "socialtopk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace socialtopk {

namespace {

bool valid_weight(double w) { return w > 0.0 && w <= 1.0; }

void check_weight(double w) {
    if (!valid_weight(w)) {
        throw DomainError("edge weight " + std::to_string(w) + " outside (0,1]");
    }
}

}  // namespace

ProximityFunction::ProximityFunction(ProximityKind kind, double lambda)
    : kind_(kind), lambda_(lambda), log_lambda_(std::log(lambda)) {}

ProximityFunction ProximityFunction::pow(double lambda) {
    if (!(lambda >= 1.0)) {
        throw DomainError("pow proximity requires lambda >= 1, got " + std::to_string(lambda));
    }
    return ProximityFunction(ProximityKind::Pow, lambda);
}

double ProximityFunction::aggregate(std::span<const double> weights) const {
    for (double w : weights) check_weight(w);
    switch (kind_) {
        case ProximityKind::Mul: {
            double p = 1.0;
            for (double w : weights) p *= w;
            return p;
        }
        case ProximityKind::Min: {
            double m = 1.0;
            for (double w : weights) m = std::min(m, w);
            return m;
        }
        case ProximityKind::Pow: {
            double exponent = 0.0;
            for (double w : weights) exponent += 1.0 / w;
            return std::exp(-log_lambda_ * exponent);
        }
    }
    return 0.0;
}

double ProximityFunction::extend(double sigma, double weight) const {
    if (!(sigma >= 0.0 && sigma <= 1.0)) {
        throw DomainError("proximity " + std::to_string(sigma) + " outside [0,1]");
    }
    check_weight(weight);
    return extend_unchecked(sigma, weight);
}

double ProximityFunction::extend_unchecked(double sigma, double weight) const noexcept {
    switch (kind_) {
        case ProximityKind::Mul:
            return sigma * weight;
        case ProximityKind::Min:
            return std::min(sigma, weight);
        case ProximityKind::Pow:
            return sigma * std::exp(-log_lambda_ / weight);
    }
    return 0.0;
}

SocialNetwork::SocialNetwork(std::size_t num_users, std::span<const Edge> edges) {
    std::vector<std::size_t> degree(num_users, 0);
    for (const Edge& e : edges) {
        if (e.u >= num_users || e.v >= num_users) {
            throw DomainError("edge endpoint outside user range");
        }
        if (e.u == e.v) {
            throw DomainError("self-loop on user " + std::to_string(e.u));
        }
        check_weight(e.weight);
        ++degree[e.u];
        ++degree[e.v];
    }
    offsets_.assign(num_users + 1, 0);
    for (std::size_t u = 0; u < num_users; ++u) offsets_[u + 1] = offsets_[u] + degree[u];
    adjacency_.resize(offsets_[num_users]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges) {
        adjacency_[fill[e.u]++] = {e.v, e.weight};
        adjacency_[fill[e.v]++] = {e.u, e.weight};
    }
    for (std::size_t u = 0; u < num_users; ++u) {
        auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
        auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
        std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.user < b.user; });
        auto dup = std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) {
            return a.user == b.user;
        });
        if (dup != last) {
            throw DomainError("duplicate edge between users " + std::to_string(u) + " and " +
                              std::to_string(dup->user));
        }
    }
}

std::span<const Neighbor> SocialNetwork::neighbors(UserId u) const {
    if (u >= num_users()) return {};
    return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

std::vector<Edge> SocialNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (UserId u = 0; u < num_users(); ++u) {
        for (const Neighbor& n : neighbors(u)) {
            if (u < n.user) out.push_back({u, n.user, n.weight});
        }
    }
    return out;
}

ProximityIterator::ProximityIterator(const SocialNetwork& network, ProximityFunction function,
                                     UserId seeker)
    : network_(&network), function_(function), seeker_(seeker) {
    if (!network.contains(seeker)) {
        throw NotFoundError("seeker " + std::to_string(seeker) + " is not in the network");
    }
    best_.assign(network.num_users(), 0.0);
    visited_.assign(network.num_users(), 0);
    best_[seeker] = ProximityFunction::identity();
    heap_.push({ProximityFunction::identity(), seeker});
}

void ProximityIterator::drop_stale() {
    while (!heap_.empty()) {
        const Entry& top = heap_.top();
        if (visited_[top.user] || top.sigma < best_[top.user]) {
            heap_.pop();
        } else {
            break;
        }
    }
}

double ProximityIterator::peek_top() {
    drop_stale();
    return heap_.empty() ? 0.0 : heap_.top().sigma;
}

std::optional<Visit> ProximityIterator::next() {
    drop_stale();
    if (heap_.empty()) return std::nullopt;
    const Entry top = heap_.top();
    heap_.pop();
    visited_[top.user] = 1;
    ++emitted_;
    for (const Neighbor& n : network_->neighbors(top.user)) {
        if (visited_[n.user]) continue;
        const double candidate = function_.extend_unchecked(top.sigma, n.weight);
        if (candidate > best_[n.user]) {
            best_[n.user] = candidate;
            heap_.push({candidate, n.user});
        }
    }
    return Visit{top.user, top.sigma};
}

std::vector<Visit> materialize_proximity(const SocialNetwork& network, ProximityFunction function,
                                         UserId seeker) {
    ProximityIterator it(network, function, seeker);
    std::vector<Visit> out;
    while (auto v = it.next()) out.push_back(*v);
    return out;
}

}  // namespace socialtopk
