#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graph.hpp"

namespace bufpart {

class ParseError : public Error {
 public:
  using Error::Error;
};

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> names;  // dense id -> external id
  std::unordered_map<std::string, Vertex> ids;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_real(std::string_view tok, const std::string& where) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(where + ": cannot parse number '" + std::string(tok) + "'");
  return x;
}

}  // namespace detail

// Edge lines "u v [cost]"; weight lines "u weight". Blank lines and '#' comments are skipped.
inline LoadedGraph load_graph(std::istream& edges, std::istream* weights = nullptr,
                              const std::string& edge_name = "edges", const std::string& weight_name = "weights") {
  LoadedGraph out;
  auto intern = [&](std::string_view name) {
    auto [it, fresh] = out.ids.try_emplace(std::string(name), static_cast<Vertex>(out.names.size()));
    if (fresh) out.names.emplace_back(name);
    return it->second;
  };
  std::vector<Edge> list;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(edges, line)) {
    ++lineno;
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    std::string where = edge_name + ":" + std::to_string(lineno);
    if (tok.size() < 2 || tok.size() > 3) throw ParseError(where + ": expected 'u v [cost]'");
    double cost = tok.size() == 3 ? detail::parse_real(tok[2], where) : 1.0;
    if (tok[0] == tok[1]) throw ParseError(where + ": self-loop at '" + std::string(tok[0]) + "'");
    if (!(cost > 0.0) || !std::isfinite(cost)) throw ParseError(where + ": edge cost must be positive");
    Vertex u = intern(tok[0]);
    Vertex v = intern(tok[1]);
    list.push_back(Edge{u, v, cost});
  }
  if (edges.bad()) throw ParseError(edge_name + ": read error");
  if (out.names.empty()) throw ParseError(edge_name + ": no edges");

  std::vector<double> w;
  if (weights != nullptr) {
    // start from the incident-cost default, then override
    w.assign(out.names.size(), 0.0);
    for (const Edge& e : list) {
      w[e.u] += e.cost;
      w[e.v] += e.cost;
    }
    std::vector<std::uint8_t> seen(out.names.size(), 0);
    lineno = 0;
    while (std::getline(*weights, line)) {
      ++lineno;
      auto tok = detail::split_ws(line);
      if (tok.empty()) continue;
      std::string where = weight_name + ":" + std::to_string(lineno);
      if (tok.size() != 2) throw ParseError(where + ": expected 'u weight'");
      auto it = out.ids.find(std::string(tok[0]));
      if (it == out.ids.end()) throw ParseError(where + ": unknown vertex '" + std::string(tok[0]) + "'");
      double x = detail::parse_real(tok[1], where);
      if (!(x > 0.0) || !std::isfinite(x)) throw ParseError(where + ": vertex weight must be positive");
      if (seen[it->second]) throw ParseError(where + ": duplicate weight for '" + std::string(tok[0]) + "'");
      seen[it->second] = 1;
      w[it->second] = x;
    }
    if (weights->bad()) throw ParseError(weight_name + ": read error");
  }
  try {
    out.graph = Graph(out.names.size(), std::move(list), std::move(w));
  } catch (const PreconditionError& e) {
    throw ParseError(edge_name + ": " + e.what());
  }
  return out;
}

inline LoadedGraph load_graph_files(const std::string& edge_path, const std::optional<std::string>& weight_path = {}) {
  std::ifstream ef(edge_path);
  if (!ef) throw ParseError("cannot open " + edge_path);
  if (weight_path) {
    std::ifstream wf(*weight_path);
    if (!wf) throw ParseError("cannot open " + *weight_path);
    return load_graph(ef, &wf, edge_path, *weight_path);
  }
  return load_graph(ef, nullptr, edge_path);
}

}  // namespace bufpart
