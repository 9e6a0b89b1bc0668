#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "socialtopk/common.hpp"
#include "socialtopk/graph.hpp"

namespace socialtopk {

class Dictionary;

/// Per-tag slack from the overall one: 1 - (1 - delta)^(1/|Q|).
/// Throws DomainError unless 0 < delta <= 1 and q_size >= 1.
double drill_delta_query(double delta, std::size_t q_size);

/// Per-unseen-user slack for histogram bounds: 1 - (1 - delta')^(1/unseen).
double drill_delta_user(double delta_prime, std::size_t unseen);

/// Mean/variance description of a seeker's proximity vector (the seeker's own
/// entry excluded).
struct SeekerSummary {
    UserId seeker = 0;
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double second_moment = 0.0;

    bool empty() const noexcept { return n == 0; }

    static SeekerSummary from_values(UserId seeker, std::span<const double> values);
};

struct HistogramBucket {
    double low;
    double high;
    std::size_t count;
};

/// Equal-width histogram over (0,1], buckets in descending order, plus a
/// trailing zero-bucket for zero proximities.
class ProximityHistogram {
public:
    ProximityHistogram() = default;
    ProximityHistogram(std::vector<HistogramBucket> buckets, std::size_t zero_count);

    /// `buckets == 0` picks ceil(sqrt(n)), at least 1.
    static ProximityHistogram build(std::span<const double> values, std::size_t buckets = 0);

    std::span<const HistogramBucket> buckets() const noexcept { return buckets_; }
    std::size_t zero_count() const noexcept { return zero_count_; }
    std::size_t total() const noexcept;

    /// Bucket holding x, or nullopt for x <= 0 (the zero-bucket).
    std::optional<std::size_t> bucket_of(double x) const;

private:
    std::vector<HistogramBucket> buckets_;
    std::size_t zero_count_ = 0;
};

struct RemainingStats {
    double mean;
    double variance;
};

/// Running sums over proximity values seen so far in a query.
class SeenMoments {
public:
    void observe(double x) noexcept {
        ++count_;
        sum_ += x;
        sum_sq_ += x * x;
    }
    std::size_t count() const noexcept { return count_; }
    double sum() const noexcept { return sum_; }
    double sum_sq() const noexcept { return sum_sq_; }

private:
    std::size_t count_ = 0;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
};

/// Mean and variance of the not-yet-seen proximities; nullopt when every
/// summarized value has been seen.
std::optional<RemainingStats> remaining_stats(const SeekerSummary& summary, const SeenMoments& seen);

/// Chebyshev upper bound on the average of `unseen` remaining values:
/// mean + sqrt(var / (unseen * delta')), clamped into [0, top_h].
double mvar_est_max(const RemainingStats& rem, std::size_t unseen, double delta_prime, double top_h);
/// mean - sqrt(var / (unseen * delta')), clamped into [0, 1].
double mvar_est_min(const RemainingStats& rem, std::size_t unseen, double delta_prime);

struct HistogramEstimate {
    double est_max;
    double est_min;
};

/// The stored histogram minus the proximities already met in this run.
class PartialHistogram {
public:
    PartialHistogram() = default;
    explicit PartialHistogram(const ProximityHistogram& full);

    /// Removes one seen value. When its bucket is already empty (the stored
    /// histogram is stale) the nearest non-empty lower bucket, else higher, is
    /// decremented and the staleness counter bumped.
    void remove(double x);

    std::size_t remaining(std::size_t bucket) const { return remaining_.at(bucket); }
    std::size_t remaining_zero() const noexcept { return remaining_zero_; }
    std::size_t remaining_total() const noexcept;
    std::size_t seen() const noexcept { return seen_; }
    std::size_t staleness() const noexcept { return staleness_; }
    const ProximityHistogram& full() const noexcept { return *full_; }

    /// EstMax = min{low_i : Pr[x > low_i] <= delta''} and
    /// EstMin = max{low_i : Pr[x > low_i] >= 1 - delta''} over non-empty
    /// buckets. Fallbacks: top non-empty bucket's high, and 0. nullopt when
    /// nothing remains.
    std::optional<HistogramEstimate> estimate(double delta_user) const;

private:
    const ProximityHistogram* full_ = nullptr;
    std::vector<std::size_t> remaining_;
    std::size_t remaining_zero_ = 0;
    std::size_t seen_ = 0;
    std::size_t staleness_ = 0;
};

/// Refreshes a stored histogram with proximities recomputed in a run: the
/// fresh values are removed as PartialHistogram::remove would (absorbing
/// staleness), then re-added to the buckets they actually fall in. Bucket
/// boundaries are kept.
ProximityHistogram merge_fresh_values(const ProximityHistogram& stored, std::span<const double> fresh);

/// Proximity values an engine may assume for yet unvisited taggers.
struct ProximityEstimate {
    double max;
    double min;
};

/// Supplies EstMax / EstMin to the engine. The exact estimator returns
/// (top(H), 0), which reproduces the exact bounds bit for bit.
class BoundEstimator {
public:
    virtual ~BoundEstimator() = default;
    /// Called once per visited non-seeker user.
    virtual void observe(double sigma) = 0;
    virtual ProximityEstimate estimate(std::size_t unseen, double top_h) const = 0;
    virtual bool exact() const noexcept { return false; }
};

class ExactEstimator final : public BoundEstimator {
public:
    void observe(double) override {}
    ProximityEstimate estimate(std::size_t, double top_h) const override { return {top_h, 0.0}; }
    bool exact() const noexcept override { return true; }
};

class MeanVarianceEstimator final : public BoundEstimator {
public:
    MeanVarianceEstimator(SeekerSummary summary, double delta_prime);
    void observe(double sigma) override { seen_.observe(sigma); }
    ProximityEstimate estimate(std::size_t unseen, double top_h) const override;

private:
    SeekerSummary summary_;
    double delta_prime_;
    SeenMoments seen_;
};

/// Keeps a pointer to `histogram`, which must outlive the estimator.
class HistogramEstimator final : public BoundEstimator {
public:
    HistogramEstimator(const ProximityHistogram& histogram, double delta_prime);
    void observe(double sigma) override { partial_.remove(sigma); }
    ProximityEstimate estimate(std::size_t unseen, double top_h) const override;

    const PartialHistogram& partial() const noexcept { return partial_; }

private:
    PartialHistogram partial_;
    double delta_prime_;
};

struct SeekerProfile {
    SeekerSummary summary;
    ProximityHistogram histogram;
};

/// Walks each seeker's proximity vector to exhaustion (seeker excluded).
/// Throws NotFoundError for a seeker outside the network.
std::vector<SeekerProfile> build_summaries(const SocialNetwork& network, ProximityFunction function,
                                           std::span<const UserId> seekers, std::size_t buckets = 0);

using SummaryTable = std::map<UserId, SeekerSummary>;
using HistogramTable = std::map<UserId, ProximityHistogram>;

SummaryTable summary_table(std::span<const SeekerProfile> profiles);
HistogramTable histogram_table(std::span<const SeekerProfile> profiles);

/// `seeker<TAB>n<TAB>mean<TAB>variance<TAB>second_moment`.
void write_summaries(std::ostream& out, const SummaryTable& summaries, const Dictionary& users);
SummaryTable read_summaries(std::istream& in, const Dictionary& users, const std::string& source = "summaries");

/// `seeker<TAB>b<TAB>low:high:count,...` with the zero-bucket last as `0:0:count`;
/// b counts the regular buckets.
void write_histograms(std::ostream& out, const HistogramTable& histograms, const Dictionary& users);
HistogramTable read_histograms(std::istream& in, const Dictionary& users, const std::string& source = "histograms");

}  // namespace socialtopk
