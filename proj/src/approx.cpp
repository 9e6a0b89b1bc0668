#include "socialtopk/approx.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "socialtopk/corpus.hpp"

namespace socialtopk {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(std::string_view text, const std::string& source, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError(source, line, "bad number '" + std::string(text) + "'");
    }
    return v;
}

std::size_t parse_count(std::string_view text, const std::string& source, std::size_t line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError(source, line, "bad count '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

UserId resolve_seeker(const Dictionary& users, std::string_view name, const std::string& source,
                      std::size_t line) {
    auto id = users.find(name);
    if (!id) throw ParseError(source, line, "unknown user '" + std::string(name) + "'");
    return *id;
}

}  // namespace

double drill_delta_query(double delta, std::size_t q_size) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("delta must lie in (0,1], got " + std::to_string(delta));
    }
    if (q_size == 0) throw DomainError("query must have at least one tag");
    return 1.0 - std::pow(1.0 - delta, 1.0 / static_cast<double>(q_size));
}

double drill_delta_user(double delta_prime, std::size_t unseen) {
    if (!(delta_prime > 0.0 && delta_prime <= 1.0)) {
        throw DomainError("delta' must lie in (0,1], got " + std::to_string(delta_prime));
    }
    if (unseen == 0) throw DomainError("unseen user count must be positive");
    return 1.0 - std::pow(1.0 - delta_prime, 1.0 / static_cast<double>(unseen));
}

SeekerSummary SeekerSummary::from_values(UserId seeker, std::span<const double> values) {
    SeekerSummary s;
    s.seeker = seeker;
    s.n = values.size();
    if (values.empty()) return s;
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(values.size());
    s.mean = sum / n;
    s.second_moment = sum_sq / n;
    s.variance = std::max(0.0, s.second_moment - s.mean * s.mean);
    return s;
}

ProximityHistogram::ProximityHistogram(std::vector<HistogramBucket> buckets, std::size_t zero_count)
    : buckets_(std::move(buckets)), zero_count_(zero_count) {
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        if (!(buckets_[i].low < buckets_[i].high)) throw DomainError("histogram bucket with low >= high");
        if (i > 0 && !(buckets_[i].high <= buckets_[i - 1].low)) {
            throw DomainError("histogram buckets must be strictly decreasing");
        }
    }
}

ProximityHistogram ProximityHistogram::build(std::span<const double> values, std::size_t buckets) {
    if (buckets == 0) {
        buckets = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(values.size()))));
        buckets = std::max<std::size_t>(buckets, 1);
    }
    std::vector<HistogramBucket> bs;
    bs.reserve(buckets);
    const double b = static_cast<double>(buckets);
    for (std::size_t i = 0; i < buckets; ++i) {
        bs.push_back({static_cast<double>(buckets - i - 1) / b, static_cast<double>(buckets - i) / b, 0});
    }
    ProximityHistogram h(std::move(bs), 0);
    for (double v : values) {
        if (auto idx = h.bucket_of(v)) {
            ++h.buckets_[*idx].count;
        } else {
            ++h.zero_count_;
        }
    }
    return h;
}

std::size_t ProximityHistogram::total() const noexcept {
    std::size_t t = zero_count_;
    for (const auto& b : buckets_) t += b.count;
    return t;
}

std::optional<std::size_t> ProximityHistogram::bucket_of(double x) const {
    if (!(x > 0.0) || buckets_.empty()) return std::nullopt;
    // Equal-width guess, then correct for rounding and custom boundaries.
    const double b = static_cast<double>(buckets_.size());
    const double guess = b - std::ceil(std::min(x, 1.0) * b);
    std::size_t idx = static_cast<std::size_t>(std::clamp(guess, 0.0, b - 1.0));
    while (idx + 1 < buckets_.size() && x <= buckets_[idx].low) ++idx;
    while (idx > 0 && x > buckets_[idx].high) --idx;
    return idx;
}

std::optional<RemainingStats> remaining_stats(const SeekerSummary& summary, const SeenMoments& seen) {
    if (seen.count() >= summary.n) return std::nullopt;
    const double n = static_cast<double>(summary.n);
    const double rest = static_cast<double>(summary.n - seen.count());
    const double mean = (n * summary.mean - seen.sum()) / rest;
    const double second = (n * summary.second_moment - seen.sum_sq()) / rest;
    return RemainingStats{mean, std::max(0.0, second - mean * mean)};
}

double mvar_est_max(const RemainingStats& rem, std::size_t unseen, double delta_prime, double top_h) {
    const double radius = std::sqrt(rem.variance / (static_cast<double>(unseen) * delta_prime));
    return std::clamp(rem.mean + radius, 0.0, std::max(0.0, top_h));
}

double mvar_est_min(const RemainingStats& rem, std::size_t unseen, double delta_prime) {
    const double radius = std::sqrt(rem.variance / (static_cast<double>(unseen) * delta_prime));
    return std::clamp(rem.mean - radius, 0.0, 1.0);
}

PartialHistogram::PartialHistogram(const ProximityHistogram& full)
    : full_(&full), remaining_zero_(full.zero_count()) {
    remaining_.reserve(full.buckets().size());
    for (const auto& b : full.buckets()) remaining_.push_back(b.count);
}

std::size_t PartialHistogram::remaining_total() const noexcept {
    std::size_t t = remaining_zero_;
    for (std::size_t c : remaining_) t += c;
    return t;
}

void PartialHistogram::remove(double x) {
    ++seen_;
    const auto idx = full_->bucket_of(x);
    if (!idx) {
        if (remaining_zero_ > 0) {
            --remaining_zero_;
            return;
        }
        ++staleness_;
        for (std::size_t j = remaining_.size(); j-- > 0;) {
            if (remaining_[j] > 0) {
                --remaining_[j];
                return;
            }
        }
        return;
    }
    if (remaining_[*idx] > 0) {
        --remaining_[*idx];
        return;
    }
    ++staleness_;
    for (std::size_t j = *idx + 1; j < remaining_.size(); ++j) {
        if (remaining_[j] > 0) {
            --remaining_[j];
            return;
        }
    }
    if (remaining_zero_ > 0) {
        --remaining_zero_;
        return;
    }
    for (std::size_t j = *idx; j-- > 0;) {
        if (remaining_[j] > 0) {
            --remaining_[j];
            return;
        }
    }
}

std::optional<HistogramEstimate> PartialHistogram::estimate(double delta_user) const {
    const std::size_t total = remaining_total();
    if (total == 0) return std::nullopt;
    const auto buckets = full_->buckets();
    const double n = static_cast<double>(total);
    std::optional<double> est_max, est_min, top_high;
    std::size_t cumulative = 0;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        if (remaining_[i] == 0) continue;
        if (!top_high) top_high = buckets[i].high;
        cumulative += remaining_[i];
        const double above = static_cast<double>(cumulative) / n;
        // lows decrease with i: the last qualifying low is the minimum.
        if (above <= delta_user) est_max = buckets[i].low;
        // the first qualifying low is the maximum.
        if (!est_min && above >= 1.0 - delta_user) est_min = buckets[i].low;
    }
    HistogramEstimate e{};
    e.est_max = est_max.value_or(top_high.value_or(0.0));
    e.est_min = est_min.value_or(0.0);
    e.est_min = std::min(e.est_min, e.est_max);
    return e;
}

ProximityHistogram merge_fresh_values(const ProximityHistogram& stored, std::span<const double> fresh) {
    PartialHistogram partial(stored);
    for (double x : fresh) partial.remove(x);
    std::vector<HistogramBucket> buckets(stored.buckets().begin(), stored.buckets().end());
    std::size_t zero = partial.remaining_zero();
    for (std::size_t i = 0; i < buckets.size(); ++i) buckets[i].count = partial.remaining(i);
    ProximityHistogram merged(buckets, zero);
    for (double x : fresh) {
        if (auto idx = merged.bucket_of(x)) {
            ++buckets[*idx].count;
        } else {
            ++zero;
        }
    }
    return ProximityHistogram(std::move(buckets), zero);
}

MeanVarianceEstimator::MeanVarianceEstimator(SeekerSummary summary, double delta_prime)
    : summary_(summary), delta_prime_(delta_prime) {
    if (!(delta_prime > 0.0 && delta_prime <= 1.0)) throw DomainError("delta' must lie in (0,1]");
}

ProximityEstimate MeanVarianceEstimator::estimate(std::size_t unseen, double top_h) const {
    if (summary_.empty() || unseen == 0) return {top_h, 0.0};
    const auto rem = remaining_stats(summary_, seen_);
    if (!rem) return {0.0, 0.0};
    const double hi = mvar_est_max(*rem, unseen, delta_prime_, top_h);
    const double lo = std::min(mvar_est_min(*rem, unseen, delta_prime_), hi);
    return {hi, lo};
}

HistogramEstimator::HistogramEstimator(const ProximityHistogram& histogram, double delta_prime)
    : partial_(histogram), delta_prime_(delta_prime) {
    if (!(delta_prime > 0.0 && delta_prime <= 1.0)) throw DomainError("delta' must lie in (0,1]");
}

ProximityEstimate HistogramEstimator::estimate(std::size_t unseen, double top_h) const {
    if (partial_.full().total() == 0 || unseen == 0) return {top_h, 0.0};
    const auto e = partial_.estimate(drill_delta_user(delta_prime_, unseen));
    if (!e) return {0.0, 0.0};
    const double hi = std::clamp(e->est_max, 0.0, std::max(0.0, top_h));
    return {hi, std::min(e->est_min, hi)};
}

std::vector<SeekerProfile> build_summaries(const SocialNetwork& network, ProximityFunction function,
                                           std::span<const UserId> seekers, std::size_t buckets) {
    std::vector<SeekerProfile> out;
    out.reserve(seekers.size());
    std::vector<double> values;
    for (UserId s : seekers) {
        ProximityIterator it(network, function, s);
        values.clear();
        while (auto v = it.next()) {
            if (v->user != s) values.push_back(v->sigma);
        }
        out.push_back({SeekerSummary::from_values(s, values), ProximityHistogram::build(values, buckets)});
    }
    return out;
}

SummaryTable summary_table(std::span<const SeekerProfile> profiles) {
    SummaryTable t;
    for (const auto& p : profiles) t[p.summary.seeker] = p.summary;
    return t;
}

HistogramTable histogram_table(std::span<const SeekerProfile> profiles) {
    HistogramTable t;
    for (const auto& p : profiles) t[p.summary.seeker] = p.histogram;
    return t;
}

void write_summaries(std::ostream& out, const SummaryTable& summaries, const Dictionary& users) {
    for (const auto& [seeker, s] : summaries) {
        out << users.name(seeker) << '\t' << s.n << '\t' << fmt17(s.mean) << '\t' << fmt17(s.variance)
            << '\t' << fmt17(s.second_moment) << '\n';
    }
}

SummaryTable read_summaries(std::istream& in, const Dictionary& users, const std::string& source) {
    SummaryTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, '\t');
        if (f.size() != 5) throw ParseError(source, lineno, "expected 5 tab-separated fields");
        SeekerSummary s;
        s.seeker = resolve_seeker(users, f[0], source, lineno);
        s.n = parse_count(f[1], source, lineno);
        s.mean = parse_double(f[2], source, lineno);
        s.variance = parse_double(f[3], source, lineno);
        s.second_moment = parse_double(f[4], source, lineno);
        if (s.variance < 0.0) throw ParseError(source, lineno, "negative variance");
        table[s.seeker] = s;
    }
    return table;
}

void write_histograms(std::ostream& out, const HistogramTable& histograms, const Dictionary& users) {
    for (const auto& [seeker, h] : histograms) {
        out << users.name(seeker) << '\t' << h.buckets().size() << '\t';
        for (const auto& b : h.buckets()) {
            out << fmt17(b.low) << ':' << fmt17(b.high) << ':' << b.count << ',';
        }
        out << "0:0:" << h.zero_count() << '\n';
    }
}

HistogramTable read_histograms(std::istream& in, const Dictionary& users, const std::string& source) {
    HistogramTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, '\t');
        if (f.size() != 3) throw ParseError(source, lineno, "expected 3 tab-separated fields");
        const UserId seeker = resolve_seeker(users, f[0], source, lineno);
        const std::size_t b = parse_count(f[1], source, lineno);
        const auto entries = split(f[2], ',');
        if (entries.size() != b + 1) throw ParseError(source, lineno, "bucket count does not match b");
        std::vector<HistogramBucket> buckets;
        std::size_t zero = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto parts = split(entries[i], ':');
            if (parts.size() != 3) throw ParseError(source, lineno, "bucket must be low:high:count");
            const double low = parse_double(parts[0], source, lineno);
            const double high = parse_double(parts[1], source, lineno);
            const std::size_t count = parse_count(parts[2], source, lineno);
            if (i == b) {
                zero = count;
            } else {
                buckets.push_back({low, high, count});
            }
        }
        try {
            table[seeker] = ProximityHistogram(std::move(buckets), zero);
        } catch (const DomainError& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return table;
}

}  // namespace socialtopk
