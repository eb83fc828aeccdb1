// Replacement-path query batches shared by the DSOs and the baselines.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dso/graph.hpp"

namespace dso {

struct Query {
  VertexId x = 0;  // source
  VertexId y = 0;  // sink
  VertexId u = 0, v = 0;  // failed edge (u,v)
};

using QueryBatch = std::vector<Query>;

struct AnswerRow {
  Query q;
  Dist distance = kInf;
  std::int64_t rounds_charged = 0;  // query-phase rounds of the whole batch
  std::string case_tag;             // which rule produced the answer
  std::string error;                // non-empty for invalid queries
};

// Lines "x y u v"; '#' starts a comment.
QueryBatch read_queries(std::istream& is);
QueryBatch read_queries_file(const std::string& path);

// CSV: x,y,u,v,distance,rounds_charged[,case]. INF rendered as "INF".
void write_answers_csv(const std::vector<AnswerRow>& rows, std::ostream& os,
                       bool with_case = false);

std::string dist_to_string(Dist d);

}  // namespace dso
