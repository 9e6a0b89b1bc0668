#include "socialtopk/workload.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace socialtopk {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError("bad " + what + ": '" + text + "'");
    return value;
}

std::size_t parse_size(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || text.front() == '-') throw ConfigError("bad " + what + ": '" + text + "'");
    return static_cast<std::size_t>(value);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t n = 0; n < parts.size(); ++n) {
        if (n > 0) out += sep;
        out += parts[n];
    }
    return out;
}

/// Identity of a query for comparing algorithms; delta is not part of it.
std::string comparison_key(const WorkloadQuery& q) {
    std::ostringstream key;
    key << q.seeker << '\t' << join(q.tags, ',') << '\t' << q.k << '\t' << format_number(q.alpha) << '\t'
        << to_string(q.ranking) << '\t' << to_string(q.proximity) << '\t' << to_string(q.semantics);
    return key.str();
}

}  // namespace

Algorithm parse_algorithm(const std::string& text) {
    const std::string t = lower(text);
    if (t == "topks") return Algorithm::Topks;
    if (t == "contextmerge" || t == "context-merge" || t == "cm") return Algorithm::ContextMerge;
    if (t == "mvar") return Algorithm::MVar;
    if (t == "hist") return Algorithm::Hist;
    if (t == "oracle") return Algorithm::Oracle;
    throw ConfigError("unknown algorithm '" + text + "' (topks, contextmerge, mvar, hist, oracle)");
}

const char* to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
        case Algorithm::Topks: return "topks";
        case Algorithm::ContextMerge: return "contextmerge";
        case Algorithm::MVar: return "mvar";
        case Algorithm::Hist: return "hist";
        case Algorithm::Oracle: return "oracle";
    }
    return "?";
}

RankingSpec parse_ranking(const std::string& text) {
    const std::string t = lower(text);
    RankingSpec spec;
    if (t == "identity") {
        spec.kind = RankingKind::Identity;
    } else if (t == "tfidf") {
        spec.kind = RankingKind::TfIdf;
    } else if (t == "bm15") {
        spec.kind = RankingKind::Bm15;
    } else if (t.rfind("bm15:", 0) == 0) {
        spec.kind = RankingKind::Bm15;
        spec.k1 = parse_double(t.substr(5), "bm15 k1");
        if (!(spec.k1 > 0.0)) throw ConfigError("bm15 k1 must be positive");
    } else {
        throw ConfigError("unknown ranking '" + text + "' (identity, tfidf, bm15[:k1])");
    }
    return spec;
}

std::string to_string(const RankingSpec& ranking) {
    switch (ranking.kind) {
        case RankingKind::Identity: return "identity";
        case RankingKind::TfIdf: return "tfidf";
        case RankingKind::Bm15: return "bm15:" + format_number(ranking.k1);
    }
    return "?";
}

ProximityFunction parse_proximity(const std::string& text) {
    const std::string t = lower(text);
    if (t == "mul") return ProximityFunction::mul();
    if (t == "min") return ProximityFunction::min();
    if (t.rfind("pow:", 0) == 0) {
        try {
            return ProximityFunction::pow(parse_double(t.substr(4), "pow lambda"));
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown proximity function '" + text + "' (mul, min, pow:<lambda>)");
}

std::string to_string(const ProximityFunction& function) {
    switch (function.kind()) {
        case ProximityKind::Mul: return "mul";
        case ProximityKind::Min: return "min";
        case ProximityKind::Pow: return "pow:" + format_number(function.lambda());
    }
    return "?";
}

Semantics parse_semantics(const std::string& text) {
    const std::string t = lower(text);
    if (t == "disjunctive" || t == "or") return Semantics::Disjunctive;
    if (t == "conjunctive" || t == "and") return Semantics::Conjunctive;
    throw ConfigError("unknown semantics '" + text + "' (disjunctive, conjunctive)");
}

const char* to_string(Semantics semantics) noexcept {
    return semantics == Semantics::Conjunctive ? "conjunctive" : "disjunctive";
}

std::vector<WorkloadQuery> read_workload(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        header = split(line, '\t');
    }
    if (header.empty()) return {};
    std::map<std::string, std::size_t> column;
    for (std::size_t n = 0; n < header.size(); ++n) column[lower(header[n])] = n;
    for (const char* required : {"seeker", "tags"}) {
        if (!column.contains(required))
            throw ParseError(source, line_no, std::string("header lacks the '") + required + "' column");
    }

    std::vector<WorkloadQuery> queries;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != header.size())
            throw ParseError(source, line_no,
                             "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        const auto get = [&](const char* name) -> const std::string* {
            const auto it = column.find(name);
            return it == column.end() ? nullptr : &fields[it->second];
        };
        WorkloadQuery q;
        try {
            q.seeker = *get("seeker");
            q.tags = split(*get("tags"), ',');
            if (const auto* v = get("k")) q.k = parse_size(*v, "k");
            if (const auto* v = get("alpha")) q.alpha = parse_double(*v, "alpha");
            if (const auto* v = get("algorithm")) q.algorithm = parse_algorithm(*v);
            if (const auto* v = get("delta")) q.delta = parse_double(*v, "delta");
            if (const auto* v = get("ranking")) q.ranking = parse_ranking(*v);
            if (const auto* v = get("proximity")) q.proximity = parse_proximity(*v);
            if (const auto* v = get("semantics")) q.semantics = parse_semantics(*v);
        } catch (const ConfigError& e) {
            throw ParseError(source, line_no, e.what());
        }
        if (q.seeker.empty()) throw ParseError(source, line_no, "empty seeker");
        if (q.k == 0) throw ParseError(source, line_no, "k must be positive");
        if (!(q.alpha >= 0.0 && q.alpha <= 1.0)) throw ParseError(source, line_no, "alpha outside [0,1]");
        if (!(q.delta >= 0.0 && q.delta <= 1.0)) throw ParseError(source, line_no, "delta outside [0,1]");
        queries.push_back(std::move(q));
    }
    return queries;
}

void write_workload(std::ostream& out, const std::vector<WorkloadQuery>& queries) {
    out << "seeker\ttags\tk\talpha\talgorithm\tdelta\tranking\tproximity\tsemantics\n";
    for (const WorkloadQuery& q : queries) {
        out << q.seeker << '\t' << join(q.tags, ',') << '\t' << q.k << '\t' << format_number(q.alpha) << '\t'
            << to_string(q.algorithm) << '\t' << format_number(q.delta) << '\t' << to_string(q.ranking) << '\t'
            << to_string(q.proximity) << '\t' << to_string(q.semantics) << '\n';
    }
}

std::vector<WorkloadQuery> random_workload(const Corpus& corpus, const RandomWorkloadSpec& spec) {
    if (spec.min_tags == 0 || spec.max_tags < spec.min_tags)
        throw ConfigError("tag count range must satisfy 1 <= min <= max");
    std::vector<UserId> seekers;
    for (UserId u = 0; u < corpus.users.size(); ++u) {
        if (corpus.network.contains(u) && !corpus.network.neighbors(u).empty()) seekers.push_back(u);
    }
    if (seekers.empty()) {
        seekers.resize(corpus.users.size());
        std::iota(seekers.begin(), seekers.end(), UserId{0});
    }
    std::vector<TagId> pool(corpus.tags.size());
    std::iota(pool.begin(), pool.end(), TagId{0});
    std::vector<std::size_t> uses(pool.size());
    for (TagId t : pool) uses[t] = corpus.store.tag_uses(t);
    std::stable_sort(pool.begin(), pool.end(), [&](TagId a, TagId b) { return uses[a] > uses[b]; });
    pool.resize(std::min(pool.size(), spec.tag_pool));
    if (seekers.empty() || pool.empty()) return {};

    std::mt19937_64 rng(spec.seed);
    std::vector<WorkloadQuery> out;
    for (std::size_t n = 0; n < spec.queries; ++n) {
        const UserId seeker = seekers[std::uniform_int_distribution<std::size_t>(0, seekers.size() - 1)(rng)];
        const std::size_t hi = std::min(spec.max_tags, pool.size());
        const std::size_t lo = std::min(spec.min_tags, hi);
        const std::size_t count = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
        std::vector<TagId> chosen = pool;
        std::shuffle(chosen.begin(), chosen.end(), rng);
        chosen.resize(count);
        std::sort(chosen.begin(), chosen.end());

        WorkloadQuery q = spec.base;
        q.seeker = corpus.users.name(seeker);
        q.tags.clear();
        for (TagId t : chosen) q.tags.push_back(corpus.tags.name(t));
        for (double alpha : spec.alphas) {
            q.alpha = alpha;
            for (Algorithm a : spec.algorithms) {
                q.algorithm = a;
                if (a == Algorithm::MVar || a == Algorithm::Hist) {
                    for (double d : spec.deltas) {
                        q.delta = d;
                        out.push_back(q);
                    }
                } else {
                    q.delta = 0.0;
                    out.push_back(q);
                }
            }
        }
    }
    return out;
}

TopKResult run_query(const Corpus& corpus, const WorkloadQuery& wq, const BenchConfig& config) {
    Query q;
    q.seeker = corpus.users.at(wq.seeker);
    q.tags = corpus.resolve_tags(wq.tags);
    q.k = wq.k;
    q.alpha = wq.alpha;
    q.ranking = wq.ranking;
    q.semantics = wq.semantics;
    q.include_seeker = config.include_seeker;
    q.exact_scores = config.exact_scores;
    EngineOptions options;
    options.proximity = wq.proximity;
    const SearchEngine engine(corpus.network, corpus.store);
    switch (wq.algorithm) {
        case Algorithm::Topks: return engine.topks(q, options);
        case Algorithm::ContextMerge: return engine.context_merge(q, options);
        case Algorithm::Oracle: return engine.full_scan(q, options);
        case Algorithm::MVar: {
            if (config.summaries == nullptr)
                throw ConfigError("mvar needs per-seeker summaries (" + config.summaries_source + ")");
            const auto it = config.summaries->find(q.seeker);
            if (it == config.summaries->end())
                throw ConfigError("no summary for seeker '" + wq.seeker + "' in " + config.summaries_source);
            return engine.topks_mvar(q, it->second, wq.delta, options);
        }
        case Algorithm::Hist: {
            if (config.histograms == nullptr)
                throw ConfigError("hist needs per-seeker histograms (" + config.histograms_source + ")");
            const auto it = config.histograms->find(q.seeker);
            if (it == config.histograms->end())
                throw ConfigError("no histogram for seeker '" + wq.seeker + "' in " + config.histograms_source);
            return engine.topks_hist(q, it->second, wq.delta, options);
        }
    }
    throw ConfigError("unknown algorithm");
}

std::vector<BenchRow> run_workload(const Corpus& corpus, const std::vector<WorkloadQuery>& queries,
                                   const BenchConfig& config) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<BenchRow> rows(queries.size());
    for (std::size_t n = 0; n < queries.size(); ++n) rows[n] = BenchRow{queries[n], {}, 0.0, nan, nan};

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_at = queries.size();
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t n = next++; n < queries.size(); n = next++) {
            try {
                rows[n].result = run_query(corpus, queries[n], config);
                rows[n].cost = cost(rows[n].result.stats, config.cost);
            } catch (...) {
                // Report the first failing row in workload order.
                const std::lock_guard lock(failure_mutex);
                if (n < failed_at) {
                    failed_at = n;
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, std::max<std::size_t>(queries.size(), 1));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::map<std::string, std::size_t> oracle_row;
    std::map<std::string, std::size_t> topks_row;
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const std::string key = comparison_key(rows[n].query);
        if (rows[n].query.algorithm == Algorithm::Oracle) oracle_row.try_emplace(key, n);
        if (rows[n].query.algorithm == Algorithm::Topks) topks_row.try_emplace(key, n);
    }
    for (BenchRow& row : rows) {
        const std::string key = comparison_key(row.query);
        std::optional<std::size_t> exact;
        if (const auto it = oracle_row.find(key); it != oracle_row.end()) {
            exact = it->second;
        } else if (const auto jt = topks_row.find(key); jt != topks_row.end()) {
            exact = jt->second;
        }
        if (exact) {
            const auto& reference = rows[*exact].result.items;
            if (!reference.empty()) {
                std::size_t common = 0;
                for (const ResultItem& a : row.result.items) {
                    common += std::any_of(reference.begin(), reference.end(),
                                          [&](const ResultItem& b) { return a.item == b.item; });
                }
                row.precision = static_cast<double>(common) / static_cast<double>(reference.size());
            }
        }
        const auto base = topks_row.find(key);
        if (base != topks_row.end() && row.cost > 0.0) row.speedup = rows[base->second].cost / row.cost - 1.0;
    }
    return rows;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_bench_csv(std::ostream& out, const Corpus& corpus, const std::vector<BenchRow>& rows,
                     bool include_wall_ms) {
    out << "row,algorithm,seeker,tags,k,alpha,delta,ranking,proximity,semantics,users_visited,seqitems,cost,"
           "wall_ms,partial,short,results,precision,speedup\n";
    const auto optional_number = [](double x) { return std::isnan(x) ? std::string() : format_number(x); };
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const BenchRow& row = rows[n];
        const WorkloadQuery& q = row.query;
        std::vector<std::string> results;
        for (const ResultItem& item : row.result.items)
            results.push_back(corpus.items.name(item.item) + ":" + format_number(item.score));
        out << n << ',' << to_string(q.algorithm) << ',' << csv_field(q.seeker) << ',' << csv_field(join(q.tags, '|'))
            << ',' << q.k << ',' << format_number(q.alpha) << ',' << format_number(q.delta) << ','
            << csv_field(to_string(q.ranking)) << ',' << csv_field(to_string(q.proximity)) << ','
            << to_string(q.semantics) << ',' << row.result.stats.users_visited << ',' << row.result.stats.seqitems
            << ',' << format_number(row.cost) << ','
            << (include_wall_ms ? format_number(row.result.stats.wall_ms) : std::string()) << ','
            << (row.result.partial ? 1 : 0) << ',' << (row.result.short_result ? 1 : 0) << ','
            << csv_field(join(results, ';')) << ',' << optional_number(row.precision) << ','
            << optional_number(row.speedup) << '\n';
    }
}

}  // namespace socialtopk
