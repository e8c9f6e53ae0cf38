#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "balanced.hpp"
#include "certify.hpp"
#include "driver.hpp"
#include "graph.hpp"

namespace bufpart {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// nlohmann's own dump prints the shortest round-trip form; reports use fixed 17 digits instead.
inline void write_json(std::ostream& os, const Json& j, int indent = 2, int level = 0) {
  auto pad = [&](int l) {
    if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(l * indent), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(level + 1);
        os << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, level + 1);
      }
      pad(level);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',';
        first = false;
        pad(level + 1);
        write_json(os, v, indent, level + 1);
      }
      pad(level);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  os << '\n';
  return os.str();
}

inline Json opt_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

inline std::string vertex_name(const std::vector<std::string>* names, Vertex u) {
  return names && u < names->size() ? (*names)[u] : std::to_string(u);
}

inline Json set_json(const VertexSet& s, const std::vector<std::string>* names) {
  Json a = Json::array();
  for (Vertex u : s) a.push_back(vertex_name(names, u));
  return a;
}

// vertex -> {part_id (1-based), role}
inline Json assignment_json(const Graph& g, const BufferedPartition& bp, const std::vector<std::string>* names) {
  std::vector<Json> slot(g.n());
  for (std::size_t i = 0; i < bp.k(); ++i) {
    for (Vertex u : bp.parts[i]) slot[u] = Json{{"part_id", i + 1}, {"role", "core"}};
    for (Vertex u : bp.buffers[i]) slot[u] = Json{{"part_id", i + 1}, {"role", "buffer"}};
  }
  Json out = Json::object();
  for (std::size_t u = 0; u < g.n(); ++u) out[vertex_name(names, static_cast<Vertex>(u))] = slot[u];
  return out;
}

inline Json violations_json(const std::vector<Violation>& vs) {
  Json a = Json::array();
  for (const Violation& v : vs)
    a.push_back(Json{{"condition", v.condition}, {"part", v.part < 0 ? Json(nullptr) : Json(v.part + 1)},
                     {"vertex", v.vertex < 0 ? Json(nullptr) : Json(v.vertex)}, {"message", v.message}});
  return a;
}

inline Json cut_report_json(const CutReport& r) {
  return Json{{"per_part_expansion", r.per_part_expansion},
              {"max_expansion", r.max_expansion},
              {"buffer_ratios", r.buffer_ratios},
              {"violations", violations_json(r.violations)}};
}

inline Json lower_bound_check_json(const BufferedLowerBoundCheck& c) {
  return Json{{"lambda_k", c.lambda_k},       {"phi", c.phi},
              {"epsilon", c.epsilon},         {"rhs", c.rhs},
              {"slack", c.slack},             {"pass", c.pass},
              {"lower_bound_applies", c.lower_bound_applies}, {"rayleigh_bound", c.rayleigh_bound},
              {"rayleigh_pass", c.rayleigh_pass},     {"message", c.message}};
}

inline Json certificate_json(const Certificate& c) {
  return Json{{"k", c.k},
              {"k_hat", c.k_hat},
              {"epsilon", c.epsilon},
              {"delta", c.delta},
              {"lambda_k", c.lambda_k},
              {"lambda_k_hat", c.lambda_k_hat},
              {"achieved_cost", c.achieved_cost},
              {"lower_bound_unbuffered", c.lower_bound_unbuffered},
              {"lower_bound_buffered_check", c.lower_bound_buffered_check},
              {"buffered_check", lower_bound_check_json(c.buffered_check)},
              {"approx_ratio", opt_json(c.approx_ratio)},
              {"brute_force_optimum", opt_json(c.brute_force_optimum)},
              {"log_base", c.log_base}};
}

inline Json restart_json(const RestartOutcome& o) {
  return Json{{"restart", o.restart},
              {"accepted", o.accepted},
              {"reason", o.reason},
              {"tuples", o.tuples},
              {"max_phi", o.max_phi},
              {"crude_count", o.crude_check.count},
              {"crude_count_limit", o.crude_check.count_limit},
              {"crude_weight", o.crude_check.weight},
              {"crude_weight_limit", o.crude_check.weight_limit},
              {"r_b_prime_size", o.r_b_prime_size},
              {"r_b_prime_weight", o.r_b_prime_weight},
              {"rounds", o.rounds},
              {"rejected_rounds", o.rejected_rounds}};
}

inline Json driver_json(const Graph& g, const DriverResult& r, const std::vector<std::string>* names) {
  Json restarts = Json::array();
  for (const auto& o : r.restarts) restarts.push_back(restart_json(o));
  const DriverParams& p = r.params;
  Json params{{"k", p.k},
              {"epsilon", p.epsilon},
              {"delta", p.delta},
              {"k_hat", p.k_hat},
              {"tuples_expected", p.tuples_expected},
              {"delta_hat", p.delta_hat},
              {"delta_prime", p.delta_prime},
              {"eps_hat", p.eps_hat},
              {"partial_epsilon", p.partial.epsilon},
              {"partial_delta", p.partial.delta}};
  Json partial{{"tuples", r.partial.tuples.size()},
               {"r_p_prime_size", r.partial.r_p_prime.size()},
               {"r_b_prime_size", r.partial.r_b_prime.size()},
               {"phi_bound", r.partial.phi_bound},
               {"buffer_ratio_cap", r.partial.buffer_ratio_cap},
               {"rounds_considered", r.partial.rounds_considered},
               {"infeasible_rounds", r.partial.infeasible_rounds},
               {"above_phi_bound", r.partial.above_phi_bound},
               {"discarded", r.partial.discarded},
               {"filter_mode", r.partial.filter_mode}};
  return Json{{"command", "partition"},
              {"n", g.n()},
              {"params", params},
              {"assignment", assignment_json(g, r.partition, names)},
              {"cut_report", cut_report_json(r.report)},
              {"certificate", certificate_json(r.certificate)},
              {"eigenvalues", r.eigenvalues},
              {"solver", r.solver},
              {"calibration_capped", r.calibration_capped},
              {"separator_threshold", r.separator_threshold},
              {"separator_threshold_exact", r.separator_threshold_exact},
              {"selected_restart", r.selected_restart},
              {"partial", partial},
              {"restarts", restarts},
              {"warnings", r.warnings}};
}

inline Json cut_assignment_json(const Graph& g, const VertexSet& s, const VertexSet& t, const VertexSet& b,
                                const std::vector<std::string>* names, const char* s_name, const char* t_name) {
  std::vector<std::string> side(g.n());
  for (Vertex u : s) side[u] = s_name;
  for (Vertex u : t) side[u] = t_name;
  for (Vertex u : b) side[u] = "B";
  Json out = Json::object();
  for (std::size_t u = 0; u < g.n(); ++u) out[vertex_name(names, static_cast<Vertex>(u))] = side[u];
  return out;
}

inline Json cheeger2_json(const Graph& g, const BufferedCut& c, const std::vector<std::string>* names) {
  double ws = set_weight(g, c.s), wt = set_weight(g, c.t), W = g.total_weight();
  return Json{{"command", "cheeger2"},
              {"n", g.n()},
              {"epsilon", c.epsilon},
              {"assignment", cut_assignment_json(g, c.s, c.t, c.b, names, "S", "T")},
              {"phi", c.phi},
              {"phi_s", c.phi_s},
              {"cut", c.cut},
              {"balance", Json{{"weight_s", ws}, {"weight_t", wt}, {"fraction_s", ws / W}, {"fraction_t", wt / W}}},
              {"buffer_ratio", c.buffer_ratio},
              {"threshold", c.threshold},
              {"lambda2", c.lambda2},
              {"per_level_lambda2", std::vector<double>{c.lambda2}},
              {"bound", 4.0 * (1.0 + 2.0 / c.epsilon) * c.lambda2},
              {"bound_ok", c.phi <= 4.0 * (1.0 + 2.0 / c.epsilon) * c.lambda2 + 1e-12},
              {"disconnected", c.disconnected}};
}

inline Json balanced_json(const Graph& g, const BalancedCut& c, double eps, const std::vector<std::string>* names) {
  double mn = std::min(c.weight_l, c.weight_r);
  return Json{{"command", "balanced-cut"},
              {"n", g.n()},
              {"epsilon", eps},
              {"assignment", cut_assignment_json(g, c.l, c.r, c.b, names, "L", "R")},
              {"phi", mn > 0.0 ? c.cut / mn : std::numeric_limits<double>::infinity()},
              {"cut", c.cut},
              {"balance",
               Json{{"weight_l", c.weight_l},
                    {"weight_r", c.weight_r},
                    {"fraction_l", c.weight_l / c.total_weight},
                    {"fraction_r", c.weight_r / c.total_weight},
                    {"balanced", c.balanced}}},
              {"buffer_ratio", c.buffer_ratio},
              {"buffer_ok", c.buffer_ok},
              {"per_level_lambda2", c.per_level_lambda2},
              {"per_level_phi", c.per_level_phi},
              {"per_level_bound_ok", c.per_level_bound_ok},
              {"violations", c.violations}};
}

inline Json kway_json(const Graph& g, const KwayBalanced& r, std::size_t k, double eps,
                      const std::vector<std::string>* names) {
  std::vector<Json> slot(g.n());
  for (std::size_t i = 0; i < r.parts.size(); ++i)
    for (Vertex u : r.parts[i]) slot[u] = Json{{"part_id", i + 1}, {"role", "core"}};
  for (Vertex u : r.buffer) slot[u] = Json{{"part_id", nullptr}, {"role", "buffer"}};
  Json assign = Json::object();
  for (std::size_t u = 0; u < g.n(); ++u) assign[vertex_name(names, static_cast<Vertex>(u))] = slot[u];
  std::vector<double> weights;
  for (const auto& p : r.parts) weights.push_back(set_weight(g, p));
  return Json{{"command", "kbalanced"},
              {"n", g.n()},
              {"k", k},
              {"epsilon", eps},
              {"assignment", assign},
              {"part_weights", weights},
              {"crossing_cost", r.crossing_cost},
              {"buffer_fraction", r.buffer_fraction},
              {"buffer_constant", eps > 0.0 ? r.buffer_fraction / eps : std::numeric_limits<double>::infinity()},
              {"balance", Json{{"max_part_ratio", r.max_part_ratio}, {"balanced", r.balanced}}},
              {"violations", r.violations}};
}

}  // namespace bufpart
