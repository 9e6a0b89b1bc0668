#pragma once

#include "socialtopk/corpus.hpp"
#include "socialtopk/scoring.hpp"

namespace fixture {

/// Five users A..E with edges A-B 0.9, A-C 0.6, B-D 0.8, C-E 0.5, D-E 0.4 and
/// tagging (B,i1,t1) (D,i1,t1) (C,i2,t1) (E,i2,t1) (B,i2,t2) (E,i1,t2).
socialtopk::Corpus f1();

/// Query by names on the F1 corpus.
socialtopk::Query f1_query(const socialtopk::Corpus& corpus, std::vector<std::string> tags, std::size_t k,
                           double alpha = 0.0);

}  // namespace fixture
