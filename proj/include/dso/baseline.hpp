// No-preprocessing baselines: one SSSP per query for arbitrary batches, and a
// multi-source computation when every query shares the failed edge.
#pragma once

#include "dso/graph.hpp"
#include "dso/queries.hpp"
#include "dso/simulator.hpp"

namespace dso {

// k sequential SSSP computations, one per query, each on G - {e_i}.
std::vector<AnswerRow> answer_general_no_pre(NetworkRun& run,
                                             const QueryBatch& batch);

// All queries must share one failed edge; k-source shortest paths on G - {e}
// via random-delay scheduling (one instance per distinct source). Throws
// GraphError on mixed failed edges.
std::vector<AnswerRow> answer_seb_no_pre(NetworkRun& run,
                                         const QueryBatch& batch,
                                         std::uint64_t seed);

}  // namespace dso
