#pragma once

#include "errors.hpp"
#include "graph.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sharpf {

// "u v" per line; optional "n=<k>" header fixes the vertex range to 0..k-1.
inline Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int header_n = -1;
  Vertex max_label = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 2, "n=") == 0) {
      try {
        header_n = std::stoi(line.substr(first + 2));
      } catch (const std::exception&) {
        throw ParseError("bad header on line " + std::to_string(lineno));
      }
      continue;
    }
    std::istringstream ls(line);
    long long a = 0, b = 0;
    if (!(ls >> a >> b)) throw ParseError("expected 'u v' on line " + std::to_string(lineno));
    std::string extra;
    if (ls >> extra) throw ParseError("trailing data on line " + std::to_string(lineno));
    if (a < 0 || b < 0) throw ParseError("negative label on line " + std::to_string(lineno));
    if (a == b) throw ParseError("self-loop on line " + std::to_string(lineno));
    edges.push_back(make_edge(static_cast<Vertex>(a), static_cast<Vertex>(b)));
    max_label = std::max<Vertex>(max_label, static_cast<Vertex>(std::max(a, b)));
  }
  int n = header_n >= 0 ? header_n : max_label + 1;
  if (max_label >= n) throw ParseError("edge label exceeds declared n");
  Graph g(n);
  return Graph(g.vertices(), std::move(edges));
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  Vertex top = g.vertices().empty() ? -1 : g.vertices().back();
  out << "n=" << top + 1 << "\n";
  for (const auto& e : g.edges()) out << e.u << " " << e.v << "\n";
}

}  // namespace sharpf
