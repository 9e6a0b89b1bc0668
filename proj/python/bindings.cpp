#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "socialtopk/approx.hpp"
#include "socialtopk/common.hpp"
#include "socialtopk/corpus.hpp"
#include "socialtopk/engine.hpp"
#include "socialtopk/netgen.hpp"
#include "socialtopk/predict.hpp"
#include "socialtopk/synth.hpp"
#include "socialtopk/workload.hpp"

namespace py = pybind11;
using namespace socialtopk;

namespace {

SocialNetwork make_network(std::size_t num_users, const std::vector<std::tuple<UserId, UserId, double>>& edges) {
    std::vector<Edge> e;
    e.reserve(edges.size());
    for (const auto& [u, v, w] : edges) e.push_back({u, v, w});
    return SocialNetwork(num_users, e);
}

TaggingStore make_store(const std::vector<std::tuple<UserId, ItemId, TagId>>& triples) {
    std::vector<Triple> t;
    t.reserve(triples.size());
    for (const auto& [u, i, g] : triples) t.push_back({u, i, g});
    return TaggingStore(std::move(t));
}

Corpus corpus_from_records(const std::vector<std::tuple<std::string, std::string, std::string>>& triples,
                           const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    std::vector<RawTriple> raw;
    raw.reserve(triples.size());
    for (const auto& [u, i, t] : triples) raw.push_back({u, i, t});
    std::vector<RawEdge> raw_edges;
    raw_edges.reserve(edges.size());
    for (const auto& [u, v, w] : edges) raw_edges.push_back({u, v, w});
    return build_corpus(raw, raw_edges);
}

/// Named query over a corpus, returning (item name, score) pairs and stats.
py::dict corpus_query(const Corpus& corpus, const std::string& seeker, const std::vector<std::string>& tags,
                      std::size_t k, double alpha, const std::string& algorithm, double delta,
                      const std::string& ranking, const std::string& proximity, const std::string& semantics) {
    WorkloadQuery q;
    q.seeker = seeker;
    q.tags = tags;
    q.k = k;
    q.alpha = alpha;
    q.algorithm = parse_algorithm(algorithm);
    q.delta = delta;
    q.ranking = parse_ranking(ranking);
    q.proximity = parse_proximity(proximity);
    q.semantics = parse_semantics(semantics);

    BenchConfig config;
    SummaryTable summaries;
    HistogramTable histograms;
    if (q.algorithm == Algorithm::MVar || q.algorithm == Algorithm::Hist) {
        const std::vector<UserId> seekers{corpus.users.at(seeker)};
        const auto profiles = build_summaries(corpus.network, q.proximity, seekers);
        summaries = summary_table(profiles);
        histograms = histogram_table(profiles);
        config.summaries = &summaries;
        config.histograms = &histograms;
    }
    const TopKResult r = run_query(corpus, q, config);
    py::list items;
    for (const ResultItem& it : r.items) items.append(py::make_tuple(corpus.items.name(it.item), it.score));
    py::dict out;
    out["items"] = items;
    out["users_visited"] = r.stats.users_visited;
    out["seqitems"] = r.stats.seqitems;
    out["cost"] = cost(r.stats);
    out["partial"] = r.partial;
    return out;
}

}  // namespace

PYBIND11_MODULE(_socialtopk, m) {
    m.doc() = "Network-aware top-k retrieval over social tagging data";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);

    py::class_<ProximityFunction>(m, "ProximityFunction")
        .def_static("mul", &ProximityFunction::mul)
        .def_static("min", &ProximityFunction::min)
        .def_static("pow", &ProximityFunction::pow, py::arg("lam"))
        .def_static("parse", &parse_proximity)
        .def_property_readonly("lam", &ProximityFunction::lambda)
        .def("aggregate", [](const ProximityFunction& f, const std::vector<double>& w) { return f.aggregate(w); })
        .def("extend", &ProximityFunction::extend)
        .def("__repr__", [](const ProximityFunction& f) { return "ProximityFunction(" + to_string(f) + ")"; });

    py::class_<SocialNetwork>(m, "SocialNetwork")
        .def(py::init(&make_network), py::arg("num_users"), py::arg("edges"))
        .def_property_readonly("num_users", &SocialNetwork::num_users)
        .def_property_readonly("num_edges", &SocialNetwork::num_edges)
        .def("neighbors",
             [](const SocialNetwork& g, UserId u) {
                 std::vector<std::pair<UserId, double>> out;
                 for (const Neighbor& n : g.neighbors(u)) out.emplace_back(n.user, n.weight);
                 return out;
             })
        .def("proximity_vector",
             [](const SocialNetwork& g, UserId seeker, const ProximityFunction& f) {
                 std::vector<std::pair<UserId, double>> out;
                 for (const Visit& v : materialize_proximity(g, f, seeker)) out.emplace_back(v.user, v.sigma);
                 return out;
             },
             py::arg("seeker"), py::arg("function") = ProximityFunction::mul(),
             "Users in non-increasing proximity order, seeker first.");

    py::class_<TaggingStore>(m, "TaggingStore")
        .def(py::init(&make_store), py::arg("triples"))
        .def_property_readonly("num_users", &TaggingStore::num_users)
        .def_property_readonly("num_items", &TaggingStore::num_items)
        .def_property_readonly("num_tags", &TaggingStore::num_tags)
        .def_property_readonly("num_triples", &TaggingStore::num_triples)
        .def("inverted_list", [](const TaggingStore& s, TagId t) {
            std::vector<std::pair<ItemId, std::uint32_t>> out;
            for (const Posting& p : s.inverted_list(t)) out.emplace_back(p.item, p.tf);
            return out;
        });

    py::enum_<RankingKind>(m, "RankingKind")
        .value("IDENTITY", RankingKind::Identity)
        .value("TFIDF", RankingKind::TfIdf)
        .value("BM15", RankingKind::Bm15);
    py::enum_<Semantics>(m, "Semantics")
        .value("DISJUNCTIVE", Semantics::Disjunctive)
        .value("CONJUNCTIVE", Semantics::Conjunctive);

    py::class_<RankingSpec>(m, "RankingSpec")
        .def(py::init<>())
        .def_readwrite("kind", &RankingSpec::kind)
        .def_readwrite("k1", &RankingSpec::k1)
        .def_readwrite("idf_floor", &RankingSpec::idf_floor);

    py::class_<Query>(m, "Query")
        .def(py::init([](UserId seeker, std::vector<TagId> tags, std::size_t k, double alpha) {
                 Query q;
                 q.seeker = seeker;
                 q.tags = std::move(tags);
                 q.k = k;
                 q.alpha = alpha;
                 return q;
             }),
             py::arg("seeker"), py::arg("tags"), py::arg("k") = 10, py::arg("alpha") = 0.0)
        .def_readwrite("seeker", &Query::seeker)
        .def_readwrite("tags", &Query::tags)
        .def_readwrite("k", &Query::k)
        .def_readwrite("alpha", &Query::alpha)
        .def_readwrite("ranking", &Query::ranking)
        .def_readwrite("semantics", &Query::semantics)
        .def_readwrite("include_seeker", &Query::include_seeker)
        .def_readwrite("exact_scores", &Query::exact_scores);

    py::class_<RunStats>(m, "RunStats")
        .def_readonly("users_visited", &RunStats::users_visited)
        .def_readonly("seqitems", &RunStats::seqitems)
        .def_readonly("steps", &RunStats::steps)
        .def_readonly("social_steps", &RunStats::social_steps)
        .def_readonly("textual_steps", &RunStats::textual_steps)
        .def_readonly("wall_ms", &RunStats::wall_ms)
        .def_property_readonly("cost", [](const RunStats& s) { return cost(s); });

    py::class_<ResultItem>(m, "ResultItem")
        .def_readonly("item", &ResultItem::item)
        .def_readonly("score", &ResultItem::score)
        .def_readonly("max_score", &ResultItem::max_score)
        .def("__repr__", [](const ResultItem& r) {
            std::ostringstream s;
            s << "ResultItem(item=" << r.item << ", score=" << r.score << ")";
            return s.str();
        });

    py::class_<TopKResult>(m, "TopKResult")
        .def_readonly("items", &TopKResult::items)
        .def_readonly("partial", &TopKResult::partial)
        .def_readonly("short_result", &TopKResult::short_result)
        .def_readonly("stats", &TopKResult::stats);

    py::class_<SeekerProfile>(m, "SeekerProfile");
    m.def(
        "build_profile",
        [](const SocialNetwork& g, UserId seeker, const ProximityFunction& f) {
            const std::vector<UserId> seekers{seeker};
            return build_summaries(g, f, seekers).front();
        },
        py::arg("network"), py::arg("seeker"), py::arg("function") = ProximityFunction::mul(),
        "Mean/variance summary and histogram of one seeker's proximities.");

    auto with_function = [](const ProximityFunction& f) {
        EngineOptions o;
        o.proximity = f;
        return o;
    };
    const auto mul = ProximityFunction::mul();
    py::class_<SearchEngine>(m, "SearchEngine")
        .def(py::init<const SocialNetwork&, const TaggingStore&>(), py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
        .def("topks", [=](const SearchEngine& e, const Query& q, const ProximityFunction& f) {
            return e.topks(q, with_function(f));
        }, py::arg("query"), py::arg("function") = mul, py::call_guard<py::gil_scoped_release>())
        .def("topks_alpha0", [=](const SearchEngine& e, const Query& q, const ProximityFunction& f) {
            return e.topks_alpha0(q, with_function(f));
        }, py::arg("query"), py::arg("function") = mul, py::call_guard<py::gil_scoped_release>())
        .def("context_merge", [=](const SearchEngine& e, const Query& q, const ProximityFunction& f) {
            return e.context_merge(q, with_function(f));
        }, py::arg("query"), py::arg("function") = mul, py::call_guard<py::gil_scoped_release>())
        .def("full_scan", [=](const SearchEngine& e, const Query& q, const ProximityFunction& f) {
            return e.full_scan(q, with_function(f));
        }, py::arg("query"), py::arg("function") = mul, py::call_guard<py::gil_scoped_release>())
        .def("topks_mvar", [=](const SearchEngine& e, const Query& q, const SeekerProfile& p, double delta,
                               const ProximityFunction& f) {
            return e.topks_mvar(q, p.summary, delta, with_function(f));
        }, py::arg("query"), py::arg("profile"), py::arg("delta"), py::arg("function") = mul,
           py::call_guard<py::gil_scoped_release>())
        .def("topks_hist", [=](const SearchEngine& e, const Query& q, const SeekerProfile& p, double delta,
                               const ProximityFunction& f) {
            return e.topks_hist(q, p.histogram, delta, with_function(f));
        }, py::arg("query"), py::arg("profile"), py::arg("delta"), py::arg("function") = mul,
           py::call_guard<py::gil_scoped_release>())
        .def("exact_scores", [=](const SearchEngine& e, const Query& q, const ProximityFunction& f) {
            std::vector<std::pair<ItemId, double>> out;
            for (const ScoredItem& s : e.exact_scores(q, with_function(f))) out.emplace_back(s.item, s.score);
            return out;
        }, py::arg("query"), py::arg("function") = mul);

    py::class_<Corpus>(m, "Corpus")
        .def_static("load", [](const std::string& network, const std::string& log) { return load_corpus(network, log); },
                    py::arg("network"), py::arg("log"))
        .def_static("from_records", &corpus_from_records, py::arg("triples"), py::arg("edges"))
        .def_property_readonly("users", [](const Corpus& c) {
            return std::vector<std::string>(c.users.names().begin(), c.users.names().end());
        })
        .def_property_readonly("items", [](const Corpus& c) {
            return std::vector<std::string>(c.items.names().begin(), c.items.names().end());
        })
        .def_property_readonly("tags", [](const Corpus& c) {
            return std::vector<std::string>(c.tags.names().begin(), c.tags.names().end());
        })
        .def_property_readonly("network", [](const Corpus& c) { return c.network; })
        .def_property_readonly("store", [](const Corpus& c) { return c.store; })
        .def("query", &corpus_query, py::arg("seeker"), py::arg("tags"), py::arg("k") = 10, py::arg("alpha") = 0.0,
             py::arg("algorithm") = "topks", py::arg("delta") = 0.0, py::arg("ranking") = "identity",
             py::arg("proximity") = "mul", py::arg("semantics") = "disjunctive",
             "Runs one query by external names; mvar/hist build the seeker's summary on the fly.");

    m.def("cost", [](std::size_t users, std::size_t seqitems) {
        RunStats s;
        s.users_visited = users;
        s.seqitems = seqitems;
        return cost(s);
    }, py::arg("users_visited"), py::arg("seqitems"));
    m.def("drill_delta_query", &drill_delta_query, py::arg("delta"), py::arg("query_size"));
    m.def("dice", [](std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return dice(a, b);
    });

    m.def(
        "dice_network",
        [](const TaggingStore& store, const std::string& basis, std::size_t min_distinct_tags, double weight_floor) {
            SimilaritySpec spec;
            spec.basis = basis == "items"  ? SimilarityBasis::Items
                         : basis == "tags" ? SimilarityBasis::Tags
                         : basis == "items-tags" ? SimilarityBasis::ItemsAndTags
                                                 : throw ConfigError("unknown similarity basis '" + basis + "'");
            spec.min_distinct_tags = min_distinct_tags;
            spec.weight_floor = weight_floor;
            return build_network(store, spec);
        },
        py::arg("store"), py::arg("basis") = "items", py::arg("min_distinct_tags") = 10, py::arg("weight_floor") = 0.0);

    m.def(
        "synthesize",
        [](std::size_t users, std::size_t items, std::size_t tags, std::size_t communities, std::uint64_t seed) {
            SynthSpec spec;
            spec.users = users;
            spec.items = items;
            spec.tags = tags;
            spec.communities = communities;
            spec.seed = seed;
            return TaggingStore(synthesize_tagging(spec), users, items, tags);
        },
        py::arg("users") = 2000, py::arg("items") = 4000, py::arg("tags") = 100, py::arg("communities") = 40,
        py::arg("seed") = 1, "Synthetic power-law tagging relation.");
}
