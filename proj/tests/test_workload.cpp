#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "socialtopk/netgen.hpp"
#include "socialtopk/predict.hpp"
#include "socialtopk/synth.hpp"
#include "socialtopk/workload.hpp"
#include "support/fixtures.hpp"

using namespace socialtopk;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') {
                quoted = !quoted;
            } else if (ch == ',' && !quoted) {
                fields.push_back(field);
                field.clear();
            } else {
                field += ch;
            }
        }
        fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

WorkloadQuery f1_row(Algorithm a, double delta = 0.0) {
    WorkloadQuery q;
    q.seeker = "A";
    q.tags = {"t1"};
    q.k = 1;
    q.algorithm = a;
    q.delta = delta;
    return q;
}

}  // namespace

TEST_CASE("parsers accept the documented spellings") {
    CHECK(parse_algorithm("contextmerge") == Algorithm::ContextMerge);
    CHECK_THROWS_AS(parse_algorithm("nra"), ConfigError);
    CHECK(parse_ranking("bm15:2").k1 == 2.0);
    CHECK(parse_ranking("tfidf").kind == RankingKind::TfIdf);
    CHECK_THROWS_AS(parse_ranking("bm25"), ConfigError);
    CHECK(parse_proximity("pow:1.1").lambda() == doctest::Approx(1.1));
    CHECK_THROWS_AS(parse_proximity("pow:0.5"), ConfigError);
    CHECK(parse_semantics("and") == Semantics::Conjunctive);
    CHECK(to_string(parse_proximity("min")) == "min");
    CHECK(to_string(parse_ranking("bm15")) == "bm15:1.2");
}

TEST_CASE("workload files round-trip") {
    std::vector<WorkloadQuery> w{f1_row(Algorithm::Oracle), f1_row(Algorithm::Hist, 0.5)};
    w[1].tags = {"t1", "t2"};
    w[1].proximity = ProximityFunction::pow(1.1);
    std::stringstream s;
    write_workload(s, w);
    const auto back = read_workload(s);
    REQUIRE(back.size() == 2);
    CHECK(back[1].tags == w[1].tags);
    CHECK(back[1].algorithm == Algorithm::Hist);
    CHECK(back[1].delta == 0.5);
    CHECK(back[1].proximity == w[1].proximity);

    std::istringstream minimal("seeker\ttags\nA\tt1,t2\n");
    const auto m = read_workload(minimal);
    REQUIRE(m.size() == 1);
    CHECK(m[0].k == 10);
    std::istringstream bad("seeker\ttags\tk\nA\tt1\tzero\n");
    CHECK_THROWS_AS(read_workload(bad), ParseError);
    std::istringstream no_tags("seeker\nA\n");
    CHECK_THROWS_AS(read_workload(no_tags), ParseError);
}

TEST_CASE("oracle and topks rows on F1") {
    const Corpus c = fixture::f1();
    const auto rows = run_workload(c, {f1_row(Algorithm::Oracle), f1_row(Algorithm::Topks)}, BenchConfig{});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].result.items.at(0).item == c.items.at("i1"));
    CHECK(rows[1].result.items.at(0).item == c.items.at("i1"));
    CHECK(rows[1].precision == 1.0);
    CHECK(rows[1].speedup == 0.0);
    for (const auto& r : rows) CHECK(r.cost == cost(r.result.stats));
}

TEST_CASE("approximate rows at delta 0 cost what topks costs") {
    const Corpus c = fixture::f1();
    std::vector<UserId> seekers{c.users.at("A")};
    const auto prof = build_summaries(c.network, ProximityFunction::mul(), seekers);
    const auto summaries = summary_table(prof);
    const auto histograms = histogram_table(prof);
    BenchConfig config;
    config.summaries = &summaries;
    config.histograms = &histograms;
    const auto rows = run_workload(
        c, {f1_row(Algorithm::Topks), f1_row(Algorithm::MVar), f1_row(Algorithm::Hist)}, config);
    CHECK(rows[1].cost == rows[0].cost);
    CHECK(rows[2].cost == rows[0].cost);
    CHECK(rows[1].precision == 1.0);
    CHECK(rows[2].speedup == 0.0);
}

TEST_CASE("missing summaries are a configuration error naming the source") {
    const Corpus c = fixture::f1();
    BenchConfig config;
    config.summaries_source = "summaries.tsv";
    try {
        run_workload(c, {f1_row(Algorithm::MVar, 0.5)}, config);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("summaries.tsv") != std::string::npos);
    }
    const SummaryTable empty;
    config.summaries = &empty;
    CHECK_THROWS_AS(run_workload(c, {f1_row(Algorithm::MVar, 0.5)}, config), ConfigError);
    CHECK_THROWS_AS(run_workload(c, {f1_row(Algorithm::Hist, 0.5)}, config), ConfigError);
}

TEST_CASE("CSV rows carry consistent cost and keep workload order across jobs") {
    SynthSpec spec;
    spec.users = 150;
    spec.items = 400;
    spec.tags = 30;
    spec.communities = 6;
    spec.seed = 3;
    const TaggingStore store(synthesize_tagging(spec), spec.users, spec.items, spec.tags);
    std::vector<RawTriple> raw;
    for (const Triple& t : store.triples())
        raw.push_back({"u" + std::to_string(t.user), "i" + std::to_string(t.item), "t" + std::to_string(t.tag)});
    std::vector<RawEdge> edges;
    for (const Edge& e : similarity_edges(store, SimilaritySpec{}))
        edges.push_back({"u" + std::to_string(e.u), "u" + std::to_string(e.v), e.weight});
    const Corpus c = build_corpus(raw, edges);

    RandomWorkloadSpec ws;
    ws.queries = 8;
    ws.algorithms = {Algorithm::Oracle, Algorithm::Topks, Algorithm::ContextMerge};
    ws.alphas = {0.0, 0.5};
    ws.seed = 4;
    const auto w = random_workload(c, ws);
    CHECK(w.size() == 8 * 2 * 3);

    BenchConfig serial;
    BenchConfig parallel;
    parallel.jobs = 3;
    std::ostringstream a, b;
    write_bench_csv(a, c, run_workload(c, w, serial), false);
    write_bench_csv(b, c, run_workload(c, w, parallel), false);
    CHECK(a.str() == b.str());

    const auto table = parse_csv(a.str());
    REQUIRE(table.size() == w.size() + 1);
    CHECK(table[0].size() == 19);
    for (std::size_t n = 1; n < table.size(); ++n) {
        const auto& row = table[n];
        REQUIRE(row.size() == 19);
        const double users = std::stod(row[10]);
        const double seq = std::stod(row[11]);
        CHECK(std::stod(row[12]) == 100 * users + seq);
        if (row[1] == "topks") CHECK(row[17] == "1");
    }
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("prediction: a neighbor's bookmark is predicted at k = 1") {
    // Seeker s and neighbor n share tag t on item x; the seeker's own tagging
    // is hidden so only n's bookmark can surface it.
    const std::vector<RawTriple> triples{{"s", "x", "t"}, {"n", "x", "t"}, {"o", "y", "t"}, {"o", "z", "t"},
                                         {"p", "y", "t"}};
    const std::vector<RawEdge> edges{{"s", "n", 0.9}, {"s", "o", 0.1}};
    const Corpus c = build_corpus(triples, edges);
    PredictSpec spec;
    spec.pairs = 10;
    spec.min_tag_uses = 1;
    spec.ks = {1};
    const auto report = predict_eval(c.network, c.store, spec);
    CHECK_FALSE(report.warning.empty());
    const SearchEngine e(c.network, c.store);
    Query q;
    q.seeker = c.users.at("s");
    q.tags = {c.tags.at("t")};
    q.k = 1;
    const auto r = e.topks(q);
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].item == c.items.at("x"));
    // Global popularity without the seeker ranks y first.
    CHECK(global_top_k(c.store, q.seeker, q.tags[0], 1).at(0) == c.items.at("y"));
}

TEST_CASE("prediction: isolated seekers are never predicted") {
    const std::vector<RawTriple> triples{{"s", "x", "t"}, {"n", "x", "t"}};
    const Corpus c = build_corpus(triples, {});
    PredictSpec spec;
    spec.min_tag_uses = 1;
    spec.ks = {1, 5};
    const auto report = predict_eval(c.network, c.store, spec);
    for (const auto& row : report.rows) {
        if (row.function != "global") CHECK(row.predicted == 0);
    }
    std::ostringstream out;
    write_predict_csv(out, report);
    CHECK(out.str().rfind("function,k,pairs,predicted,hit_rate\n", 0) == 0);
}

TEST_CASE("prediction: copied bookmarks beat global popularity") {
    // 50 users with random bookmarks; each also copies 3 bookmarks of its
    // successor, which the item-similarity network then links closely.
    std::mt19937_64 rng(2024);
    const std::size_t users = 50;
    std::vector<std::vector<Triple>> own(users);
    std::uniform_int_distribution<ItemId> item(0, 299);
    std::uniform_int_distribution<TagId> tag(0, 4);
    for (UserId u = 0; u < users; ++u) {
        for (int b = 0; b < 8; ++b) own[u].push_back({u, item(rng), tag(rng)});
    }
    std::vector<Triple> triples;
    for (UserId u = 0; u < users; ++u) {
        triples.insert(triples.end(), own[u].begin(), own[u].end());
        const UserId partner = (u + 1) % users;
        for (int b = 0; b < 3; ++b) triples.push_back({u, own[partner][b].item, own[partner][b].tag});
    }
    const TaggingStore store(triples, users, 300, 5);
    const SocialNetwork network = build_network(store, SimilaritySpec{});
    PredictSpec spec;
    spec.pairs = 200;
    spec.min_tag_uses = 1;
    spec.ks = {5};
    spec.seed = 1;
    const auto report = predict_eval(network, store, spec,
                                      std::vector<NamedProximity>{{"mul", ProximityFunction::mul()}});
    double personal = -1.0;
    double global = -1.0;
    for (const auto& row : report.rows) {
        (row.function == "global" ? global : personal) = row.hit_rate;
    }
    MESSAGE("hit rate at k=5: personal " << personal << ", global " << global);
    CHECK(personal > global);
}
