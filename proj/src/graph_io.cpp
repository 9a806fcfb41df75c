#include "ksparse/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "ksparse/error.hpp"

namespace ksparse {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

template <class T>
T field(std::istringstream& ss, std::size_t line, const char* what) {
  T value{};
  if (!(ss >> value)) fail(line, std::string("expected ") + what);
  return value;
}

}  // namespace

NamedGraph read_graph(std::istream& in) {
  NamedGraph out;
  std::map<VertexId, double> measure;
  std::map<VertexId, double> exterior;
  std::vector<Edge> edges;
  bool header = false;
  std::size_t declared = 0;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "graph") {
      if (header) fail(line_no, "duplicate graph header");
      out.name = field<std::string>(ss, line_no, "name");
      declared = field<std::size_t>(ss, line_no, "vertex count");
      header = true;
    } else if (!header) {
      fail(line_no, "missing graph header");
    } else if (tag == "v") {
      auto id = field<std::uint64_t>(ss, line_no, "vertex id");
      auto m = field<double>(ss, line_no, "measure");
      if (!measure.emplace(vid(id), m).second) fail(line_no, "duplicate vertex");
    } else if (tag == "e") {
      auto a = field<std::uint64_t>(ss, line_no, "vertex id");
      auto b = field<std::uint64_t>(ss, line_no, "vertex id");
      auto w = field<double>(ss, line_no, "weight");
      edges.push_back({vid(a), vid(b), w});
    } else if (tag == "x") {
      auto id = field<std::uint64_t>(ss, line_no, "vertex id");
      exterior[vid(id)] = field<double>(ss, line_no, "exterior weight");
    } else {
      fail(line_no, "unknown record '" + tag + "'");
    }
    std::string extra;
    if (ss >> extra) fail(line_no, "trailing token '" + extra + "'");
  }
  if (!header) throw Error(ErrorCode::ParseError, "empty graph file");
  if (measure.size() != declared)
    throw Error(ErrorCode::ParseError, "header declares " + std::to_string(declared) +
                                           " vertices, found " + std::to_string(measure.size()));
  out.graph = build_graph(edges, measure, exterior.empty() ? nullptr : &exterior);
  return out;
}

NamedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const WeightedGraph& g, const std::string& name) {
  out << "graph " << name << ' ' << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i)
    out << "v " << raw(g.id(i)) << ' ' << format_double(g.measure(i)) << '\n';
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& nb : g.neighbors(i))
      if (nb.index > i)
        out << "e " << raw(g.id(i)) << ' ' << raw(g.id(nb.index)) << ' '
            << format_double(nb.weight) << '\n';
  if (g.has_boundary_data())
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.exterior_weight(i) > 0.0)
        out << "x " << raw(g.id(i)) << ' ' << format_double(g.exterior_weight(i)) << '\n';
}

}  // namespace ksparse
