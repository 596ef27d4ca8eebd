#include "cometh/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace cometh {
namespace {

constexpr const char* kHeader = "#cometh-graphs v1";

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw DataError("dataset parse error at line " + std::to_string(line) +
                  ": " + what);
}

}  // namespace

void write_dataset(const GraphDataset& ds, std::ostream& out) {
  out << kHeader << "\n";
  for (std::size_t k = 0; k < ds.graphs.size(); ++k) {
    const auto& g = ds.graphs[k];
    out << g.n() << " " << g.a << " " << g.b << "\n";
    for (int i = 0; i < g.n(); ++i) out << (i ? " " : "") << g.node_labels[i];
    out << "\n";
    for (int i = 0; i < g.n(); ++i)
      for (int j = i + 1; j < g.n(); ++j)
        if (g.edge_labels(i, j) != 0)
          out << i << " " << j << " " << g.edge_labels(i, j) << "\n";
    if (k + 1 < ds.graphs.size()) out << "\n";
  }
}

void serialize_dataset(const GraphDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_dataset(ds, out);
  if (!out) throw DataError("write to " + path + " failed");
}

GraphDataset read_dataset(std::istream& in) {
  GraphDataset ds;
  int lineno = 0;
  std::string line;

  auto next_content_line = [&](bool required) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty()) return true;
    }
    if (required) parse_error(lineno + 1, "unexpected end of file");
    return false;
  };

  if (!next_content_line(true)) return ds;
  if (line != kHeader) parse_error(lineno, "missing '#cometh-graphs v1' header");

  bool first = true;
  while (next_content_line(false)) {
    std::istringstream head(line);
    int n = 0, a = 0, b = 0;
    if (!(head >> n >> a >> b) || n < 1 || a < 1 || b < 1)
      parse_error(lineno, "expected graph header 'n a b'");
    if (first) {
      ds.a = a;
      ds.b = b;
      first = false;
    } else if (a != ds.a || b != ds.b) {
      parse_error(lineno, "alphabet sizes differ between graphs");
    }

    AttributedGraph g(n, a, b);
    if (!next_content_line(true)) parse_error(lineno, "missing node labels");
    {
      std::istringstream labels(line);
      for (int i = 0; i < n; ++i) {
        int l = 0;
        if (!(labels >> l)) parse_error(lineno, "expected " +
                                        std::to_string(n) + " node labels");
        if (l < 0 || l >= a) parse_error(lineno, "node label out of range");
        g.node_labels[i] = l;
      }
      int extra;
      if (labels >> extra) parse_error(lineno, "too many node labels");
    }

    // Edge lines until a blank line or EOF.
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) break;
      std::istringstream edge(line);
      int i = 0, j = 0, l = 0;
      if (!(edge >> i >> j >> l)) parse_error(lineno, "expected 'i j label'");
      if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        parse_error(lineno, "invalid edge endpoints");
      if (l <= 0 || l >= b) parse_error(lineno, "edge label out of range");
      if (g.edge_labels(i, j) != 0) parse_error(lineno, "duplicate edge");
      g.set_edge(i, j, l);
    }
    g.validate();
    ds.graphs.push_back(std::move(g));
  }
  if (ds.graphs.empty()) parse_error(lineno, "dataset contains no graphs");
  ds.validate();
  return ds;
}

GraphDataset deserialize_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_dataset(in);
}

}  // namespace cometh
