#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "socialtopk/approx.hpp"
#include "socialtopk/corpus.hpp"
#include "socialtopk/engine.hpp"

namespace socialtopk {

enum class Algorithm { Topks, ContextMerge, MVar, Hist, Oracle };

/// Throws ConfigError on an unknown name.
Algorithm parse_algorithm(const std::string& text);
const char* to_string(Algorithm algorithm) noexcept;

/// `identity`, `tfidf`, `bm15` or `bm15:<k1>`.
RankingSpec parse_ranking(const std::string& text);
std::string to_string(const RankingSpec& ranking);

/// `mul`, `min`, or `pow:<lambda>`.
ProximityFunction parse_proximity(const std::string& text);
std::string to_string(const ProximityFunction& function);

/// `disjunctive` / `conjunctive` (also `or` / `and`).
Semantics parse_semantics(const std::string& text);
const char* to_string(Semantics semantics) noexcept;

/// One workload record, by external names.
struct WorkloadQuery {
    std::string seeker;
    std::vector<std::string> tags;
    std::size_t k = 10;
    double alpha = 0.0;
    Algorithm algorithm = Algorithm::Topks;
    double delta = 0.0;
    RankingSpec ranking;
    ProximityFunction proximity = ProximityFunction::mul();
    Semantics semantics = Semantics::Disjunctive;
};

/// Tab-separated with a header naming the columns
/// seeker, tags (comma-separated), k, alpha, algorithm, delta, ranking,
/// proximity, semantics. Only seeker and tags are mandatory columns.
std::vector<WorkloadQuery> read_workload(std::istream& in, const std::string& source = "workload");
void write_workload(std::ostream& out, const std::vector<WorkloadQuery>& queries);

/// Random seekers and 1..max_tags popular tags, each query repeated once per
/// algorithm and delta in the template. Deterministic given the seed.
struct RandomWorkloadSpec {
    std::size_t queries = 20;
    std::size_t min_tags = 1;
    std::size_t max_tags = 3;
    /// Tags are drawn from this many most-used tags.
    std::size_t tag_pool = 50;
    std::vector<Algorithm> algorithms{Algorithm::Oracle, Algorithm::Topks, Algorithm::ContextMerge,
                                      Algorithm::MVar, Algorithm::Hist};
    std::vector<double> deltas{0.9};
    std::vector<double> alphas{0.0};
    WorkloadQuery base;
    std::uint64_t seed = 1;
};

std::vector<WorkloadQuery> random_workload(const Corpus& corpus, const RandomWorkloadSpec& spec);

struct BenchConfig {
    const SummaryTable* summaries = nullptr;
    std::string summaries_source = "--summaries";
    const HistogramTable* histograms = nullptr;
    std::string histograms_source = "--histograms";
    CostModel cost;
    bool include_seeker = false;
    bool exact_scores = false;
    std::size_t jobs = 1;
};

struct BenchRow {
    WorkloadQuery query;
    TopKResult result;
    double cost = 0.0;
    /// |T n T_exact| / |T_exact| against the oracle row of the same query (else
    /// the topks row); NaN when there is none or T_exact is empty.
    double precision;
    /// cost(topks) / cost(row) - 1; NaN when no topks row exists.
    double speedup;
};

/// Runs one record. Throws ConfigError when an approximate algorithm lacks
/// its summary, naming the file or flag it should have come from.
TopKResult run_query(const Corpus& corpus, const WorkloadQuery& query, const BenchConfig& config);

/// Executes every record (concurrently with config.jobs > 1) and fills in
/// the derived metrics. Rows keep workload order.
std::vector<BenchRow> run_workload(const Corpus& corpus, const std::vector<WorkloadQuery>& queries,
                                   const BenchConfig& config);

/// Fixed column set:
/// row,algorithm,seeker,tags,k,alpha,delta,ranking,proximity,semantics,
/// users_visited,seqitems,cost,wall_ms,partial,short,results,precision,speedup
void write_bench_csv(std::ostream& out, const Corpus& corpus, const std::vector<BenchRow>& rows,
                     bool include_wall_ms = true);

/// RFC 4180 quoting when the field needs it.
std::string csv_field(const std::string& text);

}  // namespace socialtopk
