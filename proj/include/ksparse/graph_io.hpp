#pragma once

// Graph text format, one graph per file:
//
//   # comment
//   graph <name> <num_vertices>
//   v <id> <measure>
//   e <id> <id> <weight>
//   x <id> <exterior_weight>     (optional Dirichlet boundary data)

#include <iosfwd>
#include <string>

#include "ksparse/graph.hpp"

namespace ksparse {

struct NamedGraph {
  std::string name;
  WeightedGraph graph;
};

NamedGraph read_graph(std::istream& in);
NamedGraph read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const WeightedGraph& g, const std::string& name);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace ksparse
