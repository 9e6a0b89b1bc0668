#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "socialtopk/common.hpp"

namespace socialtopk {

enum class ProximityKind { Mul, Min, Pow };

/// Monotone path aggregation used to extend edge weights to a proximity
/// between any two connected users. All three kinds are non-increasing
/// along a path when weights lie in (0,1].
class ProximityFunction {
public:
    static ProximityFunction mul() { return ProximityFunction(ProximityKind::Mul, 1.0); }
    static ProximityFunction min() { return ProximityFunction(ProximityKind::Min, 1.0); }
    /// Throws DomainError when lambda < 1.
    static ProximityFunction pow(double lambda);

    ProximityKind kind() const noexcept { return kind_; }
    double lambda() const noexcept { return lambda_; }

    /// Value on the empty path.
    static constexpr double identity() noexcept { return 1.0; }

    /// Aggregates a whole path. Throws DomainError on a weight outside (0,1].
    double aggregate(std::span<const double> weights) const;

    /// One relaxation step: proximity of the path extended by one edge.
    /// Throws DomainError when sigma is outside [0,1] or weight outside (0,1].
    double extend(double sigma, double weight) const;

    /// extend() without argument checks, for the hot loop.
    double extend_unchecked(double sigma, double weight) const noexcept;

    friend bool operator==(const ProximityFunction&, const ProximityFunction&) = default;

private:
    ProximityFunction(ProximityKind kind, double lambda);

    ProximityKind kind_;
    double lambda_;
    double log_lambda_;
};

struct Edge {
    UserId u;
    UserId v;
    double weight;
};

struct Neighbor {
    UserId user;
    double weight;
};

/// Undirected weighted user graph. Immutable once built.
class SocialNetwork {
public:
    SocialNetwork() = default;

    /// Builds the symmetric adjacency. Throws DomainError on a weight outside
    /// (0,1], a self-loop, a duplicate pair, or an endpoint >= num_users.
    SocialNetwork(std::size_t num_users, std::span<const Edge> edges);

    std::size_t num_users() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

    std::span<const Neighbor> neighbors(UserId u) const;

    bool contains(UserId u) const noexcept { return u < num_users(); }

    /// Each undirected edge once, with u < v.
    std::vector<Edge> edges() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
};

struct Visit {
    UserId user;
    double sigma;

    friend bool operator==(const Visit&, const Visit&) = default;
};

/// Lazy best-first traversal of the network from a seeker, emitting users in
/// non-increasing order of extended proximity. Ties are emitted by ascending
/// user id. Users whose proximity is 0 (including unreachable ones) are never
/// emitted.
class ProximityIterator {
public:
    /// Throws NotFoundError when the seeker is not a network user.
    ProximityIterator(const SocialNetwork& network, ProximityFunction function, UserId seeker);

    /// Emits the next user, or nullopt once the seeker's component is spent.
    std::optional<Visit> next();

    /// Proximity of the best user not yet emitted; 0 when exhausted.
    double peek_top();

    bool exhausted() { return peek_top() <= 0.0; }
    std::size_t emitted() const noexcept { return emitted_; }
    UserId seeker() const noexcept { return seeker_; }
    const ProximityFunction& function() const noexcept { return function_; }

private:
    struct Entry {
        double sigma;
        UserId user;
        // Max-heap on sigma, then smallest user id first.
        bool operator<(const Entry& other) const noexcept {
            if (sigma != other.sigma) return sigma < other.sigma;
            return user > other.user;
        }
    };

    void drop_stale();

    const SocialNetwork* network_;
    ProximityFunction function_;
    UserId seeker_;
    std::priority_queue<Entry> heap_;
    std::vector<double> best_;
    std::vector<char> visited_;
    std::size_t emitted_ = 0;
};

/// Runs an iterator to exhaustion: the seeker's full proximity vector,
/// seeker first.
std::vector<Visit> materialize_proximity(const SocialNetwork& network, ProximityFunction function,
                                         UserId seeker);

}  // namespace socialtopk
