#include "dso/queries.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace dso {

QueryBatch read_queries(std::istream& is) {
  QueryBatch batch;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long x, y, u, v;
    if (!(ss >> x)) continue;
    if (!(ss >> y >> u >> v)) throw ParseError("expected 'x y u v'", lineno);
    batch.push_back({static_cast<VertexId>(x), static_cast<VertexId>(y),
                     static_cast<VertexId>(u), static_cast<VertexId>(v)});
  }
  return batch;
}

QueryBatch read_queries_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GraphError("cannot open query file: " + path);
  return read_queries(f);
}

std::string dist_to_string(Dist d) {
  return d >= kInf ? std::string("INF") : std::to_string(d);
}

void write_answers_csv(const std::vector<AnswerRow>& rows, std::ostream& os,
                       bool with_case) {
  os << "x,y,u,v,distance,rounds_charged";
  if (with_case) os << ",case";
  os << '\n';
  for (const AnswerRow& r : rows) {
    os << r.q.x << ',' << r.q.y << ',' << r.q.u << ',' << r.q.v << ',';
    if (!r.error.empty())
      os << "ERROR:" << r.error;
    else
      os << dist_to_string(r.distance);
    os << ',' << r.rounds_charged;
    if (with_case) os << ',' << r.case_tag;
    os << '\n';
  }
}

}  // namespace dso
