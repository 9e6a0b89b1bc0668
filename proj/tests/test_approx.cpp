#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "socialtopk/approx.hpp"
#include "socialtopk/engine.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace socialtopk;

namespace {

/// Mean and population variance straight from a multiset.
std::pair<double, double> stats_of(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return {mean, var / static_cast<double>(v.size())};
}

ProximityHistogram two_bucket(std::size_t high, std::size_t low) {
    return ProximityHistogram({{0.5, 1.0, high}, {0.0, 0.5, low}}, 0);
}

}  // namespace

TEST_CASE("drill_delta_query") {
    CHECK(drill_delta_query(0.9, 2) == doctest::Approx(1.0 - std::sqrt(0.1)));
    CHECK(std::abs(drill_delta_query(0.9, 2) - 0.6838) <= 1e-4);
    CHECK(drill_delta_query(0.9, 1) == doctest::Approx(0.9));
    CHECK(drill_delta_query(1.0, 3) == 1.0);
    CHECK_THROWS_AS(drill_delta_query(0.0, 2), DomainError);
    CHECK_THROWS_AS(drill_delta_query(-0.1, 2), DomainError);
}

TEST_CASE("remaining_stats examples") {
    const std::vector<double> v{0.9, 0.72, 0.6, 0.3};
    const SeekerSummary s = SeekerSummary::from_values(0, v);
    CHECK(s.n == 4);
    CHECK(s.mean == doctest::Approx(0.63));
    CHECK(s.second_moment == doctest::Approx(0.4446));
    SeenMoments seen;
    const auto all = remaining_stats(s, seen);
    REQUIRE(all);
    CHECK(all->mean == doctest::Approx(0.63));
    CHECK(all->variance == doctest::Approx(0.0477));
    seen.observe(0.9);
    seen.observe(0.72);
    const auto rest = remaining_stats(s, seen);
    REQUIRE(rest);
    CHECK(rest->mean == doctest::Approx(0.45));
    CHECK(rest->variance == doctest::Approx(0.0225));
    seen.observe(0.6);
    seen.observe(0.3);
    CHECK_FALSE(remaining_stats(s, seen));

    const std::vector<double> flat{0.5, 0.5, 0.5};
    SeenMoments one;
    one.observe(0.5);
    const auto c = remaining_stats(SeekerSummary::from_values(0, flat), one);
    REQUIRE(c);
    CHECK(c->mean == doctest::Approx(0.5));
    CHECK(c->variance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("remaining_stats matches recomputation on random vectors") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 10000;
        std::vector<double> v(n);
        for (double& x : v) x = u(rng) * u(rng);
        std::sort(v.begin(), v.end(), std::greater<>());
        const SeekerSummary s = SeekerSummary::from_values(0, v);
        SeenMoments seen;
        for (std::size_t p = 0; p < n; p += 1 + n / 50) {
            while (seen.count() < p) seen.observe(v[seen.count()]);
            const auto rem = remaining_stats(s, seen);
            REQUIRE(rem);
            const auto [mean, var] = stats_of(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(p), v.end()));
            CHECK(std::abs(rem->mean - mean) <= 1e-9);
            CHECK(std::abs(rem->variance - var) <= 1e-9);
        }
    }
}

TEST_CASE("Chebyshev estimates") {
    const RemainingStats rem{0.45, 0.0225};
    CHECK(mvar_est_max(rem, 2, 0.5, 1.0) == doctest::Approx(0.6));
    CHECK(mvar_est_min(rem, 2, 0.5) == doctest::Approx(0.3));
    CHECK(mvar_est_max(rem, 2, 0.5, 0.55) == 0.55);
    const RemainingStats flat{0.4, 0.0};
    CHECK(mvar_est_max(flat, 3, 0.2, 1.0) == doctest::Approx(0.4));
    CHECK(mvar_est_min(flat, 3, 0.2) == doctest::Approx(0.4));
    CHECK(mvar_est_max(rem, 1000000, 1.0, 1.0) == doctest::Approx(0.45).epsilon(1e-3));
}

TEST_CASE("histogram bounds") {
    const ProximityHistogram h = two_bucket(3, 1);
    PartialHistogram p(h);
    const auto e = p.estimate(0.8);
    REQUIRE(e);
    CHECK(e->est_max == 0.5);
    // Pr[x > 0.5] = 0.75 >= 0.2 already qualifies 0.5 for the pessimistic side.
    CHECK(e->est_min == 0.5);
    CHECK(e->est_min <= e->est_max);

    PartialHistogram q(h);
    q.remove(0.9);
    q.remove(0.72);
    q.remove(0.6);
    const auto f = q.estimate(0.5);
    REQUIRE(f);
    CHECK(f->est_max == 0.5);  // nothing qualifies: top non-empty bucket's high
    CHECK(f->est_min == 0.0);
    q.remove(0.3);
    CHECK_FALSE(q.estimate(0.5));
}

TEST_CASE("drill_delta_user") {
    CHECK(drill_delta_user(0.5, 1) == doctest::Approx(0.5));
    CHECK(drill_delta_user(0.5, 2) == doctest::Approx(1.0 - std::sqrt(0.5)));
    CHECK_THROWS_AS(drill_delta_user(0.5, 0), DomainError);
}

TEST_CASE("partial histogram conservation and staleness") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(1 + rng() % 200);
        for (double& x : v) x = u(rng) < 0.1 ? 0.0 : u(rng);
        const auto h = ProximityHistogram::build(v);
        CHECK(h.total() == v.size());
        PartialHistogram p(h);
        std::shuffle(v.begin(), v.end(), rng);
        for (std::size_t i = 0; i < v.size(); ++i) {
            p.remove(v[i]);
            CHECK(p.remaining_total() == v.size() - i - 1);
            CHECK(p.staleness() == 0);
            if (const auto e = p.estimate(0.3)) CHECK(e->est_min <= e->est_max);
        }
    }
    PartialHistogram stale(two_bucket(0, 2));
    stale.remove(0.9);
    CHECK(stale.staleness() == 1);
    CHECK(stale.remaining(1) == 1);
    CHECK(stale.remaining_total() == 1);
}

TEST_CASE("merging fresh values refreshes a stale histogram") {
    const ProximityHistogram stored = two_bucket(0, 2);
    const std::vector<double> fresh{0.9, 0.2};
    const auto merged = merge_fresh_values(stored, fresh);
    CHECK(merged.buckets()[0].count == 1);
    CHECK(merged.buckets()[1].count == 1);
    CHECK(merged.total() == 2);
}

TEST_CASE("build_summaries on F1") {
    const Corpus c = fixture::f1();
    const std::vector<UserId> seekers{c.users.at("A")};
    const auto p = build_summaries(c.network, ProximityFunction::mul(), seekers, 2);
    REQUIRE(p.size() == 1);
    CHECK(p[0].summary.n == 4);
    CHECK(p[0].summary.mean == doctest::Approx(0.63));
    CHECK(p[0].summary.variance == doctest::Approx(0.0477).epsilon(1e-3));
    const auto buckets = p[0].histogram.buckets();
    REQUIRE(buckets.size() == 2);
    CHECK(buckets[0].low == 0.5);
    CHECK(buckets[0].count == 3);
    CHECK(buckets[1].count == 1);
    CHECK(p[0].histogram.zero_count() == 0);

    const auto sqrt_rule = build_summaries(c.network, ProximityFunction::mul(), seekers);
    CHECK(sqrt_rule[0].histogram.buckets().size() == 2);

    const SocialNetwork lonely(1, std::vector<Edge>{});
    const std::vector<UserId> zero{0};
    CHECK(build_summaries(lonely, ProximityFunction::mul(), zero)[0].summary.empty());
    const std::vector<UserId> missing{9};
    CHECK_THROWS_AS(build_summaries(lonely, ProximityFunction::mul(), missing), NotFoundError);
}

TEST_CASE("summary and histogram files round-trip") {
    const Corpus c = fixture::f1();
    std::vector<UserId> all(c.users.size());
    std::iota(all.begin(), all.end(), UserId{0});
    const auto p = build_summaries(c.network, ProximityFunction::mul(), all);
    std::stringstream s, h;
    write_summaries(s, summary_table(p), c.users);
    write_histograms(h, histogram_table(p), c.users);
    const auto st = read_summaries(s, c.users);
    const auto ht = read_histograms(h, c.users);
    REQUIRE(st.size() == all.size());
    for (const auto& profile : p) {
        const auto& back = st.at(profile.summary.seeker);
        CHECK(back.n == profile.summary.n);
        CHECK(back.mean == profile.summary.mean);
        CHECK(back.variance == profile.summary.variance);
        const auto& hb = ht.at(profile.summary.seeker);
        CHECK(hb.total() == profile.histogram.total());
        CHECK(hb.buckets().size() == profile.histogram.buckets().size());
    }
    std::istringstream bad("A\tnot-a-number\t0\t0\t0\n");
    CHECK_THROWS_AS(read_summaries(bad, c.users), ParseError);
}

TEST_CASE("exact-mode equivalence of the approximate variants") {
    std::mt19937_64 rng(66);
    for (int n = 0; n < 150; ++n) {
        const auto inst = oracle::random_instance(rng);
        Query q = oracle::random_query(inst, rng);
        q.alpha = (n % 5) * 0.25;
        const SearchEngine e(inst.network, inst.store);
        const std::vector<UserId> seeker{q.seeker};
        const auto prof = build_summaries(inst.network, ProximityFunction::mul(), seeker);
        const auto a = e.topks(q);
        for (const auto& r : {e.topks_mvar(q, prof[0].summary, 0.0), e.topks_hist(q, prof[0].histogram, 0.0)}) {
            REQUIRE(r.items.size() == a.items.size());
            for (std::size_t i = 0; i < a.items.size(); ++i) {
                CHECK(r.items[i].item == a.items[i].item);
                CHECK(r.items[i].score == a.items[i].score);
            }
            CHECK(r.stats.users_visited == a.stats.users_visited);
            CHECK(r.stats.seqitems == a.stats.seqitems);
        }
    }
}

TEST_CASE("Chebyshev estimate brackets the remaining mean during a run") {
    std::mt19937_64 rng(12);
    for (int n = 0; n < 50; ++n) {
        const auto inst = oracle::random_instance(rng);
        const Query q = oracle::random_query(inst, rng);
        const std::vector<UserId> seeker{q.seeker};
        const auto prof = build_summaries(inst.network, ProximityFunction::mul(), seeker);
        MeanVarianceEstimator est(prof[0].summary, 0.5);
        SeenMoments seen;
        ProximityIterator it(inst.network, ProximityFunction::mul(), q.seeker);
        it.next();
        while (auto v = it.next()) {
            est.observe(v->sigma);
            seen.observe(v->sigma);
            const auto rem = remaining_stats(prof[0].summary, seen);
            if (!rem) break;
            const auto e = est.estimate(3, 1.0);
            CHECK(e.min <= rem->mean + 1e-12);
            CHECK(rem->mean <= e.max + 1e-12);
        }
    }
}
