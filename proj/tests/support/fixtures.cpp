#include "support/fixtures.hpp"

namespace fixture {

using namespace socialtopk;

Corpus f1() {
    const std::vector<RawEdge> edges{
        {"A", "B", 0.9}, {"A", "C", 0.6}, {"B", "D", 0.8}, {"C", "E", 0.5}, {"D", "E", 0.4}};
    const std::vector<RawTriple> triples{{"B", "i1", "t1"}, {"D", "i1", "t1"}, {"C", "i2", "t1"},
                                         {"E", "i2", "t1"}, {"B", "i2", "t2"}, {"E", "i1", "t2"}};
    return build_corpus(triples, edges);
}

Query f1_query(const Corpus& corpus, std::vector<std::string> tags, std::size_t k, double alpha) {
    Query q;
    q.seeker = corpus.users.at("A");
    q.tags = corpus.resolve_tags(tags);
    q.k = k;
    q.alpha = alpha;
    return q;
}

}  // namespace fixture
