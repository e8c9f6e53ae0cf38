#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "bufpart/bufpart.hpp"

namespace {

using bufpart::Json;

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph;
  std::optional<std::string> weights;
  std::optional<std::string> out;
  std::optional<std::string> partition_file;
  std::optional<std::string> constants_file;
  std::optional<std::string> embedding_tsv;
  std::size_t k = 0;
  double eps = 0.1;
  double delta = 0.5;
  std::uint64_t seed = 0;
  std::optional<int> restarts;
  std::size_t cap = 10;
  int verbosity = 0;
};

void emit(const Options& o, const Json& j) {
  std::string text = bufpart::dump_json(j);
  if (o.out) {
    std::ofstream f(*o.out, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write " + *o.out);
    f << text;
    if (!f) throw std::ios_base::failure("write failed for " + *o.out);
  } else {
    std::cout << text;
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ParamError("--eps must lie in [0,1)");
}

void check_eps_quarter(double eps) {
  if (!(eps > 0.0 && eps < 0.25)) throw ParamError("--eps must lie in (0, 1/4) for this command");
}

void check_delta(double d) {
  if (!(d > 0.0 && d < 1.0)) throw ParamError("--delta must lie in (0,1)");
}

Json read_json_file(const std::string& path, const char* what) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ParamError(std::string(what) + ": " + e.what());
  }
}

bufpart::AlgoConstants load_constants(const Options& o) {
  bufpart::AlgoConstants c;
  if (o.constants_file) {
    Json j = read_json_file(*o.constants_file, "constants file");
    if (!j.is_object()) throw ParamError("constants file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const Json& v = it.value();
      try {
        if (key == "c_prime") c.c_prime = v.get<double>();
        else if (key == "c_double_prime") c.c_double_prime = v.get<double>();
        else if (key == "max_restarts") c.max_restarts = v.get<int>();
        else if (key == "separator_threshold_cap") c.separator_threshold_cap = v.get<double>();
        else if (key == "max_rounds") c.max_rounds = v.get<std::size_t>();
        else if (key == "source") c.source = v.get<std::string>();
        else if (key == "filter") {
          std::string m = v.get<std::string>();
          if (m == "theory") c.filter = bufpart::FilterMode::theory;
          else if (m == "keep-best") c.filter = bufpart::FilterMode::keep_best;
          else throw ParamError("constants file: filter must be \"theory\" or \"keep-best\"");
        } else {
          throw ParamError("constants file: unknown key " + key);
        }
      } catch (const Json::exception&) {
        throw ParamError("constants file: wrong type for " + key);
      }
    }
  }
  if (o.restarts) c.max_restarts = *o.restarts;
  try {
    c.check();
  } catch (const bufpart::PreconditionError& e) {
    throw ParamError(e.what());
  }
  return c;
}

Json constants_json(const bufpart::AlgoConstants& c, double delta) {
  return Json{{"c_prime", c.c_prime_at(delta)},
              {"c_double_prime", c.c_double_prime_at(delta)},
              {"max_restarts", c.max_restarts},
              {"separator_threshold_cap", c.separator_threshold_cap},
              {"max_rounds", c.max_rounds},
              {"filter", bufpart::to_string(c.filter)},
              {"source", c.source}};
}

// Accepts a bare assignment object or any report carrying "assignment".
bufpart::BufferedPartition read_partition(const Options& o, const bufpart::LoadedGraph& lg) {
  Json j = read_json_file(*o.partition_file, "partition file");
  const Json& a = j.is_object() && j.contains("assignment") ? j["assignment"] : j;
  if (!a.is_object()) throw ParamError("partition file: assignment must be an object");
  bufpart::BufferedPartition bp;
  for (auto it = a.begin(); it != a.end(); ++it) {
    auto found = lg.ids.find(it.key());
    if (found == lg.ids.end()) throw ParamError("partition file: unknown vertex " + it.key());
    const Json& v = it.value();
    if (!v.is_object() || !v.contains("part_id") || !v["part_id"].is_number_integer() || !v.contains("role") ||
        !v["role"].is_string())
      throw ParamError("partition file: entry for " + it.key() + " needs integer part_id and string role");
    long id = v["part_id"].get<long>();
    std::string role = v["role"].get<std::string>();
    if (id < 1) throw ParamError("partition file: part_id must be >= 1");
    if (role != "core" && role != "buffer") throw ParamError("partition file: role must be core or buffer");
    auto idx = static_cast<std::size_t>(id - 1);
    if (idx >= lg.graph.n()) throw ParamError("partition file: part_id exceeds the vertex count");
    if (idx >= bp.parts.size()) {
      bp.parts.resize(idx + 1);
      bp.buffers.resize(idx + 1);
    }
    (role == "core" ? bp.parts : bp.buffers)[idx].push_back(found->second);
  }
  for (auto& s : bp.parts) std::sort(s.begin(), s.end());
  for (auto& s : bp.buffers) std::sort(s.begin(), s.end());
  bp.epsilon = o.eps;
  return bp;
}

bufpart::EigenOptions eigen_options(const Options& o) {
  bufpart::EigenOptions eo;
  eo.seed = o.seed;
  return eo;
}

int cmd_partition(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps(o.eps);
  check_delta(o.delta);
  if (o.k < 2) throw ParamError("--k must be at least 2");
  bufpart::AlgoConstants c = load_constants(o);
  try {
    bufpart::DriverResult r = bufpart::buffered_k_partition(lg.graph, o.k, o.eps, o.delta, c, o.seed);
    bool ok = r.report.valid() && r.certificate.buffered_check.rayleigh_pass &&
              (!r.certificate.buffered_check.lower_bound_applies || r.certificate.lower_bound_buffered_check);
    Json j{{"command", "partition"}, {"status", ok ? "ok" : "guarantee_failure"}, {"seed", o.seed}};
    j.update(bufpart::driver_json(lg.graph, r, &lg.names));
    j["constants"] = constants_json(c, r.params.partial.delta);
    emit(o, j);
    return ok ? 0 : 2;
  } catch (const bufpart::GuaranteeError& e) {
    Json rs = Json::array();
    for (const auto& x : e.restarts) rs.push_back(bufpart::restart_json(x));
    emit(o, Json{{"command", "partition"},
                 {"status", "guarantee_failure"},
                 {"seed", o.seed},
                 {"error", e.what()},
                 {"restarts", rs}});
    return 2;
  }
}

int cmd_cheeger2(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps_quarter(o.eps);
  bufpart::BufferedCut c = bufpart::cheeger2_buffered(lg.graph, o.eps, eigen_options(o));
  Json j = bufpart::cheeger2_json(lg.graph, c, &lg.names);
  bool ok = j["bound_ok"].get<bool>() && c.buffer_ratio <= 2.0 * o.eps;
  j["status"] = ok ? "ok" : "guarantee_failure";
  emit(o, j);
  return ok ? 0 : 2;
}

int cmd_balanced(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps_quarter(o.eps);
  bufpart::BalancedCut c = bufpart::buffered_balanced_cut(lg.graph, o.eps, eigen_options(o));
  Json j = bufpart::balanced_json(lg.graph, c, o.eps, &lg.names);
  bool ok = c.balanced && c.buffer_ok;
  j["status"] = ok ? "ok" : "guarantee_failure";
  emit(o, j);
  return ok ? 0 : 2;
}

int cmd_kbalanced(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps_quarter(o.eps);
  if (o.k < 1 || o.k > lg.graph.n()) throw ParamError("--k must lie in [1, n]");
  bufpart::KwayBalanced r = bufpart::kway_balanced(lg.graph, o.k, o.eps, eigen_options(o));
  Json j = bufpart::kway_json(lg.graph, r, o.k, o.eps, &lg.names);
  j["status"] = r.balanced ? "ok" : "guarantee_failure";
  emit(o, j);
  return r.balanced ? 0 : 2;
}

int cmd_spectrum(const Options& o, const bufpart::LoadedGraph& lg) {
  std::size_t k = o.k == 0 ? std::min<std::size_t>(lg.graph.n(), 10) : o.k;
  if (k > lg.graph.n()) throw ParamError("--k exceeds the vertex count");
  bufpart::SpectralBasis b = bufpart::eigenbasis(lg.graph, k, eigen_options(o));
  bufpart::Embedding e = bufpart::embed(b, lg.graph);
  if (o.embedding_tsv) {
    std::ofstream f(*o.embedding_tsv, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write " + *o.embedding_tsv);
    f << "vertex\tweight\tmu";
    for (std::size_t i = 0; i < k; ++i) f << "\tu" << i + 1;
    f << '\n';
    for (std::size_t u = 0; u < e.n; ++u) {
      f << lg.names[u] << '\t' << bufpart::format_double(lg.graph.weight(static_cast<bufpart::Vertex>(u))) << '\t'
        << bufpart::format_double(e.mu[u]);
      for (std::size_t i = 0; i < k; ++i) f << '\t' << bufpart::format_double(e.ubar_row(u)[i]);
      f << '\n';
    }
  }
  emit(o, Json{{"command", "spectrum"},
               {"status", "ok"},
               {"n", lg.graph.n()},
               {"k", k},
               {"eigenvalues", b.eigenvalues},
               {"residuals", b.residuals},
               {"solver", b.solver},
               {"matvecs", b.matvecs},
               {"total_measure", e.total_measure()},
               {"energy", bufpart::embedding_energy(e, lg.graph)}});
  return 0;
}

int cmd_verify(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps(o.eps);
  bufpart::BufferedPartition bp = read_partition(o, lg);
  bufpart::ValidationReport v = bufpart::validate_partition(lg.graph, bp);
  bool structural = true;
  for (const auto& x : v.violations) structural = structural && x.condition == 4;
  Json j{{"command", "verify"},
         {"status", v.valid ? "ok" : "invalid"},
         {"n", lg.graph.n()},
         {"k", bp.k()},
         {"epsilon", o.eps},
         {"valid", v.valid},
         {"cut_report", structural ? bufpart::cut_report_json(bufpart::partition_cost(lg.graph, bp)) : Json(nullptr)},
         {"violations", bufpart::violations_json(v.violations)}};
  emit(o, j);
  return v.valid ? 0 : 2;
}

int cmd_certify(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps(o.eps);
  check_delta(o.delta);
  bufpart::BufferedPartition bp = read_partition(o, lg);
  bufpart::ValidationReport v = bufpart::validate_partition(lg.graph, bp);
  if (!v.valid) {
    emit(o, Json{{"command", "certify"},
                 {"status", "invalid"},
                 {"n", lg.graph.n()},
                 {"violations", bufpart::violations_json(v.violations)}});
    return 2;
  }
  std::size_t k = bp.k();
  std::size_t kh = std::min(bufpart::k_hat_of(k, o.delta), lg.graph.n());
  bufpart::SpectralBasis b = bufpart::eigenbasis(lg.graph, std::max(k, kh), eigen_options(o));
  bufpart::Certificate c = bufpart::certify_run(lg.graph, k, o.eps, o.delta, bp, b);
  bool ok = c.buffered_check.rayleigh_pass && (!c.buffered_check.lower_bound_applies || c.lower_bound_buffered_check);
  emit(o, Json{{"command", "certify"},
               {"status", ok ? "ok" : "guarantee_failure"},
               {"n", lg.graph.n()},
               {"certificate", bufpart::certificate_json(c)}});
  return ok ? 0 : 2;
}

int cmd_brute(const Options& o, const bufpart::LoadedGraph& lg) {
  check_eps(o.eps);
  if (o.k < 1 || o.k > lg.graph.n()) throw ParamError("--k must lie in [1, n]");
  if (lg.graph.n() > o.cap) throw ParamError("graph exceeds the brute-force cap (--cap)");
  bufpart::BruteForceResult r = bufpart::brute_force_h_k_eps(lg.graph, o.k, o.eps, o.cap);
  emit(o, Json{{"command", "brute"},
               {"status", "ok"},
               {"n", lg.graph.n()},
               {"k", o.k},
               {"epsilon", o.eps},
               {"value", r.value},
               {"leaves", r.leaves},
               {"assignment", bufpart::assignment_json(lg.graph, r.witness, &lg.names)},
               {"cut_report", bufpart::cut_report_json(bufpart::partition_cost(lg.graph, r.witness))}});
  return 0;
}

using Handler = int (*)(const Options&, const bufpart::LoadedGraph&);

struct Command {
  const char* name;
  const char* help;
  Handler fn;
};

const Command kCommands[] = {
    {"partition", "eps-buffered k-way partition with certificate", cmd_partition},
    {"cheeger2", "two-threshold buffered cut (k=2)", cmd_cheeger2},
    {"balanced-cut", "recursive buffered balanced cut", cmd_balanced},
    {"kbalanced", "(6,k)-balanced buffered partition by recursive bisection", cmd_kbalanced},
    {"spectrum", "bottom-k eigenpairs and embedding", cmd_spectrum},
    {"verify", "validate a buffered partition and report its cost", cmd_verify},
    {"certify", "eigenvalue lower bounds and guarantee ratios for a partition", cmd_certify},
    {"brute", "exact optimum by exhaustive search (tiny graphs)", cmd_brute},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Buffered spectral graph partitioning"};
  app.require_subcommand(1);
  Options o;
  for (const Command& c : kCommands) {
    const std::string name = c.name;
    CLI::App* s = app.add_subcommand(name, c.help);
    s->add_option("graph", o.graph, "edge list file")->required();
    s->add_option("--weights", o.weights, "vertex weight file");
    s->add_option("--out", o.out, "write the JSON report here instead of stdout");
    s->add_option("--seed", o.seed, "64-bit seed (default 0)");
    s->add_option("--eps", o.eps, "buffer budget epsilon (default 0.1)");
    s->add_flag("-v,--verbose", o.verbosity, "diagnostics on stderr");
    if (name == "partition" || name == "kbalanced" || name == "brute")
      s->add_option("--k", o.k, "number of parts")->required();
    if (name == "spectrum") s->add_option("--k", o.k, "number of eigenpairs (default min(n, 10))");
    if (name == "partition" || name == "certify") s->add_option("--delta", o.delta, "slack delta (default 0.5)");
    if (name == "partition") {
      s->add_option("--restarts", o.restarts, "independent restarts (overrides the constants file)");
      s->add_option("--constants-file", o.constants_file, "JSON algorithm constants");
    }
    if (name == "verify" || name == "certify")
      s->add_option("--partition", o.partition_file, "JSON assignment file")->required();
    if (name == "spectrum") s->add_option("--embedding", o.embedding_tsv, "write a TSV embedding dump here");
    if (name == "brute") s->add_option("--cap", o.cap, "maximum vertex count (default 10)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  Handler fn = nullptr;
  for (const Command& c : kCommands)
    if (name == c.name) fn = c.fn;
  try {
    bufpart::LoadedGraph lg = bufpart::load_graph_files(o.graph, o.weights);
    if (o.verbosity > 0)
      std::cerr << "loaded " << lg.graph.n() << " vertices, " << lg.graph.m() << " edges, "
                << bufpart::thread_count() << " threads\n";
    return fn(o, lg);
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 1;
  } catch (const bufpart::PreconditionError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 1;
  } catch (const bufpart::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 1;
  } catch (const bufpart::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
