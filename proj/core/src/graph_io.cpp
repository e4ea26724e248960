#include "rangebandit/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rangebandit/errors.hpp"

namespace rangebandit {

void write_edge_list(std::ostream& out, const GraphSpec& g) {
  out << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.first << ' ' << e.second << '\n';
}

GraphSpec read_edge_list(std::istream& in) {
  std::string line;
  long long nodes = -1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream head(line);
    if (!(head >> nodes) || nodes <= 0) {
      throw InvalidInput("edge list: first line must be a positive node count");
    }
    break;
  }
  if (nodes <= 0) throw InvalidInput("edge list: missing node count");
  std::vector<Edge> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    long long a = -1;
    long long b = -1;
    std::string rest;
    if (!(row >> a >> b) || a < 0 || b < 0 || (row >> rest)) {
      throw InvalidInput("edge list: malformed line " +
                         std::to_string(line_no));
    }
    edges.emplace_back(static_cast<std::size_t>(a),
                       static_cast<std::size_t>(b));
  }
  return GraphSpec(static_cast<std::size_t>(nodes), std::move(edges));
}

void save_edge_list(const std::filesystem::path& path, const GraphSpec& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, g);
}

GraphSpec load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read graph file " + path.string());
  return read_edge_list(in);
}

}  // namespace rangebandit
