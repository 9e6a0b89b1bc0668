#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "socialtopk/approx.hpp"
#include "socialtopk/common.hpp"
#include "socialtopk/corpus.hpp"
#include "socialtopk/engine.hpp"
#include "socialtopk/netgen.hpp"
#include "socialtopk/predict.hpp"
#include "socialtopk/synth.hpp"
#include "socialtopk/workload.hpp"

using namespace socialtopk;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kParse = 3, kConfig = 4, kDomain = 5, kNotFound = 6 };

/// Writes to the named file, or stdout for "" and "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ConfigError("cannot open output file " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + what + " " + path);
    return in;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

SimilarityBasis parse_basis(const std::string& text) {
    if (text == "items") return SimilarityBasis::Items;
    if (text == "tags") return SimilarityBasis::Tags;
    if (text == "items-tags" || text == "items+tags") return SimilarityBasis::ItemsAndTags;
    throw ConfigError("unknown similarity basis '" + text + "' (items, tags, items-tags)");
}

std::vector<UserId> resolve_seekers(const Corpus& corpus, const std::vector<std::string>& names) {
    std::vector<UserId> out;
    if (names.empty()) {
        out.resize(corpus.network.num_users());
        std::iota(out.begin(), out.end(), UserId{0});
        return out;
    }
    for (const std::string& name : names) out.push_back(corpus.users.at(name));
    return out;
}

struct DataPaths {
    std::string network;
    std::string log;

    void add(CLI::App& app, bool network_required = true) {
        auto* n = app.add_option("--network", network, "Weighted user network (u<TAB>v<TAB>weight)");
        if (network_required) n->required();
        app.add_option("--log", log, "Tagging log (user<TAB>item<TAB>tag)")->required();
    }
    Corpus load() const { return load_corpus(network, log); }
};

struct SummaryPaths {
    std::string summaries;
    std::string histograms;
    SummaryTable summary_table;
    HistogramTable histogram_table;

    void add(CLI::App& app) {
        app.add_option("--summaries", summaries, "Mean/variance summaries from build-summaries");
        app.add_option("--histograms", histograms, "Proximity histograms from build-summaries");
    }
    BenchConfig config(const Corpus& corpus) {
        BenchConfig c;
        if (!summaries.empty()) {
            auto in = open_input(summaries, "summaries file");
            summary_table = read_summaries(in, corpus.users, summaries);
            c.summaries = &summary_table;
            c.summaries_source = summaries;
        }
        if (!histograms.empty()) {
            auto in = open_input(histograms, "histograms file");
            histogram_table = read_histograms(in, corpus.users, histograms);
            c.histograms = &histogram_table;
            c.histograms_source = histograms;
        }
        return c;
    }
};

/// Query parameters shared by `query` and random `bench` workloads.
struct QueryFlags {
    std::size_t k = 10;
    double alpha = 0.0;
    double delta = 0.0;
    std::string ranking = "identity";
    std::string proximity = "mul";
    std::string semantics = "disjunctive";
    bool idf_floor = false;
    bool include_seeker = false;
    bool exact_scores = false;

    void add(CLI::App& app) {
        app.add_option("-k,--k", k, "Result size")->check(CLI::PositiveNumber);
        app.add_option("--alpha", alpha, "Textual weight in [0,1]")->check(CLI::Range(0.0, 1.0));
        app.add_option("--delta", delta, "Error probability for mvar/hist")->check(CLI::Range(0.0, 1.0));
        app.add_option("--ranking", ranking, "identity, tfidf, bm15 or bm15:<k1>");
        app.add_option("--proximity", proximity, "mul, min or pow:<lambda>");
        app.add_option("--semantics", semantics, "disjunctive or conjunctive");
        app.add_flag("--idf-floor", idf_floor, "Clamp idf at 0");
        app.add_flag("--include-seeker", include_seeker, "Count the seeker's own tagging");
        app.add_flag("--exact-scores", exact_scores, "Keep visiting until the returned scores are final");
    }
    WorkloadQuery base() const {
        WorkloadQuery q;
        q.k = k;
        q.alpha = alpha;
        q.delta = delta;
        q.ranking = parse_ranking(ranking);
        q.ranking.idf_floor = idf_floor;
        q.proximity = parse_proximity(proximity);
        q.semantics = parse_semantics(semantics);
        return q;
    }
    void apply(BenchConfig& config) const {
        config.include_seeker = include_seeker;
        config.exact_scores = exact_scores;
    }
};

int cmd_ingest(const DataPaths& paths, const std::string& out_log) {
    const Corpus corpus = load_corpus(paths.network, paths.log);
    const IngestReport& r = corpus.store.report();
    std::cout << "metric,value\n"
              << "triples_read," << r.triples_read << '\n'
              << "duplicates_dropped," << r.duplicates_dropped << '\n'
              << "triples," << corpus.store.num_triples() << '\n'
              << "users," << corpus.users.size() << '\n'
              << "items," << corpus.items.size() << '\n'
              << "tags," << corpus.tags.size() << '\n'
              << "edges," << corpus.network.edges().size() << '\n';
    if (!out_log.empty()) {
        Output out(out_log);
        write_tagging_log(out.stream(), corpus);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-aware top-k retrieval over social tagging data"};
    app.require_subcommand(1);

    // ingest
    DataPaths ingest_paths;
    std::string ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Validate and deduplicate a tagging log; print corpus statistics");
    ingest_paths.add(*ingest, false);
    ingest->add_option("--out", ingest_out, "Write the normalized, deduplicated log here");

    // synth
    SynthSpec synth_spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic power-law tagging log");
    synth->add_option("--users", synth_spec.users);
    synth->add_option("--items", synth_spec.items);
    synth->add_option("--tags", synth_spec.tags);
    synth->add_option("--communities", synth_spec.communities);
    synth->add_option("--activity-shape", synth_spec.activity_shape, "Pareto shape of bookmarks per user");
    synth->add_option("--min-bookmarks", synth_spec.min_bookmarks);
    synth->add_option("--max-bookmarks", synth_spec.max_bookmarks);
    synth->add_option("--item-skew", synth_spec.item_skew, "Zipf exponent of item popularity");
    synth->add_option("--tag-skew", synth_spec.tag_skew, "Zipf exponent of tag popularity");
    synth->add_option("--community-affinity", synth_spec.community_affinity, "Probability of a community pick");
    synth->add_option("--tags-per-item", synth_spec.tags_per_item);
    synth->add_option("--max-tags-per-bookmark", synth_spec.max_tags_per_bookmark);
    synth->add_option("--seed", synth_spec.seed);
    synth->add_option("--out", synth_out, "Output tagging log (default stdout)");

    // gen-network
    std::string gen_log, gen_out, gen_basis = "items";
    SimilaritySpec gen_spec;
    auto* gen = app.add_subcommand("gen-network", "Build a Dice-similarity user network from a tagging log");
    gen->add_option("--log", gen_log, "Tagging log")->required();
    gen->add_option("--basis", gen_basis, "items, tags or items-tags");
    gen->add_option("--min-distinct-tags", gen_spec.min_distinct_tags, "Tag basis: ignore users with fewer tags");
    gen->add_option("--weight-floor", gen_spec.weight_floor, "Drop edges whose Dice weight is at or below this");
    gen->add_option("--out", gen_out, "Output network file (default stdout)");

    // build-summaries
    DataPaths sum_paths;
    std::string sum_proximity = "mul", sum_out, hist_out, sum_seekers;
    std::size_t sum_buckets = 0;
    auto* summaries = app.add_subcommand("build-summaries", "Precompute per-seeker proximity summaries and histograms");
    sum_paths.add(*summaries);
    summaries->add_option("--proximity", sum_proximity, "mul, min or pow:<lambda>");
    summaries->add_option("--seekers", sum_seekers, "Comma-separated seekers (default: every user)");
    summaries->add_option("--buckets", sum_buckets, "Histogram buckets (0 = automatic)");
    summaries->add_option("--summaries-out", sum_out, "Mean/variance summary file");
    summaries->add_option("--histograms-out", hist_out, "Histogram file");

    // refresh-histograms
    DataPaths refresh_paths;
    std::string refresh_in, refresh_out, refresh_proximity = "mul";
    auto* refresh = app.add_subcommand("refresh-histograms",
                                       "Fold proximities recomputed on the current network into stored histograms");
    refresh_paths.add(*refresh);
    refresh->add_option("--histograms", refresh_in, "Stored histogram file")->required();
    refresh->add_option("--proximity", refresh_proximity, "mul, min or pow:<lambda>");
    refresh->add_option("--out", refresh_out, "Refreshed histogram file (default stdout)");

    // query
    DataPaths query_paths;
    SummaryPaths query_summaries;
    QueryFlags query_flags;
    std::string query_seeker, query_tags, query_algorithm = "topks", query_out;
    auto* query = app.add_subcommand("query", "Run one query and print its CSV row");
    query_paths.add(*query);
    query_summaries.add(*query);
    query_flags.add(*query);
    query->add_option("--seeker", query_seeker, "Seeker user name")->required();
    query->add_option("--tags", query_tags, "Comma-separated query tags")->required();
    query->add_option("--algorithm", query_algorithm, "topks, contextmerge, mvar, hist or oracle");
    query->add_option("--out", query_out, "Output CSV (default stdout)");

    // bench
    DataPaths bench_paths;
    SummaryPaths bench_summaries;
    QueryFlags bench_flags;
    RandomWorkloadSpec random_spec;
    std::string workload_path, bench_out, workload_out, bench_algorithms, bench_deltas, bench_alphas;
    std::size_t jobs = 1;
    bool no_wall_ms = false;
    auto* bench = app.add_subcommand("bench", "Run a workload and write one CSV row per query");
    bench_paths.add(*bench);
    bench_summaries.add(*bench);
    bench_flags.add(*bench);
    auto* workload_opt = bench->add_option("--workload", workload_path, "Workload TSV");
    auto* random_opt = bench->add_option("--random-queries", random_spec.queries, "Generate this many random queries");
    workload_opt->excludes(random_opt);
    bench->add_option("--seed", random_spec.seed, "Seed of the random workload");
    bench->add_option("--min-tags", random_spec.min_tags);
    bench->add_option("--max-tags", random_spec.max_tags);
    bench->add_option("--tag-pool", random_spec.tag_pool, "Draw tags from this many most-used tags");
    bench->add_option("--algorithms", bench_algorithms, "Comma-separated algorithms per random query");
    bench->add_option("--deltas", bench_deltas, "Comma-separated deltas for mvar/hist rows");
    bench->add_option("--alphas", bench_alphas, "Comma-separated alphas per random query");
    bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--write-workload", workload_out, "Also save the executed workload as TSV");
    bench->add_flag("--no-wall-ms", no_wall_ms, "Leave the wall_ms column empty");
    bench->add_option("--out", bench_out, "Output CSV (default stdout)");

    // predict-eval
    DataPaths predict_paths;
    PredictSpec predict_spec;
    std::string predict_ks, predict_functions, predict_out;
    auto* predict = app.add_subcommand("predict-eval", "Bookmark-prediction hit rates per proximity function and k");
    predict_paths.add(*predict);
    predict->add_option("--pairs", predict_spec.pairs, "Sampled (user, tag) pairs");
    predict->add_option("--min-items", predict_spec.min_items, "Popularity band: fewest items per pair");
    predict->add_option("--max-items", predict_spec.max_items, "Popularity band: most items per pair");
    predict->add_option("--min-tag-uses", predict_spec.min_tag_uses, "Ignore tags used fewer times");
    predict->add_option("--ks", predict_ks, "Comma-separated k values");
    predict->add_option("--functions", predict_functions, "Comma-separated proximity functions");
    predict->add_option("--seed", predict_spec.seed);
    predict->add_option("--out", predict_out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(ingest_paths, ingest_out);

        if (*synth) {
            const Corpus corpus = [&] {
                std::vector<RawTriple> raw;
                for (const Triple& t : synthesize_tagging(synth_spec))
                    raw.push_back({"u" + std::to_string(t.user), "i" + std::to_string(t.item),
                                   "t" + std::to_string(t.tag)});
                return build_corpus(raw, {});
            }();
            Output out(synth_out);
            write_tagging_log(out.stream(), corpus);
            return kOk;
        }

        if (*gen) {
            const Corpus corpus = load_corpus({}, gen_log);
            gen_spec.basis = parse_basis(gen_basis);
            NetworkBuildReport report;
            const SocialNetwork network = build_network(corpus.store, gen_spec, &report);
            Output out(gen_out);
            write_network(out.stream(), network, corpus.users);
            std::cerr << "users_considered=" << report.users_considered << " pairs_examined=" << report.pairs_examined
                      << " edges=" << report.edges << '\n';
            return kOk;
        }

        if (*summaries) {
            if (sum_out.empty() && hist_out.empty())
                throw ConfigError("build-summaries needs --summaries-out and/or --histograms-out");
            const Corpus corpus = sum_paths.load();
            const std::vector<UserId> seekers = resolve_seekers(corpus, split(sum_seekers, ','));
            const auto profiles = build_summaries(corpus.network, parse_proximity(sum_proximity), seekers, sum_buckets);
            if (!sum_out.empty()) {
                Output out(sum_out);
                write_summaries(out.stream(), summary_table(profiles), corpus.users);
            }
            if (!hist_out.empty()) {
                Output out(hist_out);
                write_histograms(out.stream(), histogram_table(profiles), corpus.users);
            }
            return kOk;
        }

        if (*refresh) {
            const Corpus corpus = refresh_paths.load();
            auto in = open_input(refresh_in, "histograms file");
            HistogramTable table = read_histograms(in, corpus.users, refresh_in);
            const ProximityFunction f = parse_proximity(refresh_proximity);
            for (auto& [seeker, histogram] : table) {
                std::vector<double> fresh;
                for (const Visit& v : materialize_proximity(corpus.network, f, seeker)) {
                    if (v.user != seeker) fresh.push_back(v.sigma);
                }
                histogram = merge_fresh_values(histogram, fresh);
            }
            Output out(refresh_out);
            write_histograms(out.stream(), table, corpus.users);
            return kOk;
        }

        if (*query) {
            const Corpus corpus = query_paths.load();
            BenchConfig config = query_summaries.config(corpus);
            query_flags.apply(config);
            WorkloadQuery q = query_flags.base();
            q.seeker = query_seeker;
            q.tags = split(query_tags, ',');
            q.algorithm = parse_algorithm(query_algorithm);
            const auto rows = run_workload(corpus, {q}, config);
            Output out(query_out);
            write_bench_csv(out.stream(), corpus, rows);
            return kOk;
        }

        if (*bench) {
            const Corpus corpus = bench_paths.load();
            BenchConfig config = bench_summaries.config(corpus);
            bench_flags.apply(config);
            config.jobs = jobs;
            std::vector<WorkloadQuery> workload;
            if (!workload_path.empty()) {
                auto in = open_input(workload_path, "workload");
                workload = read_workload(in, workload_path);
                for (WorkloadQuery& q : workload) q.ranking.idf_floor = q.ranking.idf_floor || bench_flags.idf_floor;
            } else if (*random_opt) {
                random_spec.base = bench_flags.base();
                if (!bench_algorithms.empty()) {
                    random_spec.algorithms.clear();
                    for (const std::string& a : split(bench_algorithms, ','))
                        random_spec.algorithms.push_back(parse_algorithm(a));
                }
                if (!bench_deltas.empty()) {
                    random_spec.deltas.clear();
                    for (const std::string& d : split(bench_deltas, ',')) random_spec.deltas.push_back(std::stod(d));
                }
                if (!bench_alphas.empty()) {
                    random_spec.alphas.clear();
                    for (const std::string& a : split(bench_alphas, ',')) random_spec.alphas.push_back(std::stod(a));
                }
                workload = random_workload(corpus, random_spec);
            } else {
                throw ConfigError("bench needs --workload or --random-queries");
            }
            if (!workload_out.empty()) {
                Output out(workload_out);
                write_workload(out.stream(), workload);
            }
            const auto rows = run_workload(corpus, workload, config);
            Output out(bench_out);
            write_bench_csv(out.stream(), corpus, rows, !no_wall_ms);
            return kOk;
        }

        if (*predict) {
            const Corpus corpus = predict_paths.load();
            if (!predict_ks.empty()) {
                predict_spec.ks.clear();
                for (const std::string& k : split(predict_ks, ',')) predict_spec.ks.push_back(std::stoul(k));
            }
            std::vector<NamedProximity> functions = default_prediction_functions();
            if (!predict_functions.empty()) {
                functions.clear();
                for (const std::string& f : split(predict_functions, ','))
                    functions.push_back({f, parse_proximity(f)});
            }
            const PredictReport report = predict_eval(corpus.network, corpus.store, predict_spec, functions);
            if (!report.warning.empty()) std::cerr << "warning: " << report.warning << '\n';
            Output out(predict_out);
            write_predict_csv(out.stream(), report);
            return kOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const NotFoundError& e) {
        std::cerr << "not found: " << e.what() << '\n';
        return kNotFound;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
