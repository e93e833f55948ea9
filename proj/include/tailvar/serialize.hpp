#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tailvar/common.hpp"
#include "tailvar/constructions.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/graphon.hpp"
#include "tailvar/montecarlo.hpp"
#include "tailvar/pattern.hpp"
#include "tailvar/regularity.hpp"
#include "tailvar/solver.hpp"
#include "tailvar/theory.hpp"

namespace tailvar {

using Json = nlohmann::ordered_json;

// 17 significant decimal digits: enough to reproduce any double bit-for-bit
// on re-parse, and a fixed format so identical runs emit identical bytes.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace detail {

inline void escape_json_string(const std::string& s, std::string* out) {
  out->push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': *out += "\\\""; break;
      case '\\': *out += "\\\\"; break;
      case '\b': *out += "\\b"; break;
      case '\f': *out += "\\f"; break;
      case '\n': *out += "\\n"; break;
      case '\r': *out += "\\r"; break;
      case '\t': *out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          *out += buf;
        } else {
          out->push_back(c);
        }
    }
  }
  out->push_back('"');
}

inline bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_object() || e.is_array()) return false;
  return true;
}

inline void dump_value(const Json& j, int depth, std::string* out) {
  const std::string pad(static_cast<size_t>(2 * depth), ' ');
  const std::string pad_in(static_cast<size_t>(2 * (depth + 1)), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      *out += "{}";
      return;
    }
    *out += "{\n";
    bool first = true;
    for (const auto& item : j.items()) {
      if (!first) *out += ",\n";
      first = false;
      *out += pad_in;
      escape_json_string(item.key(), out);
      *out += ": ";
      dump_value(item.value(), depth + 1, out);
    }
    *out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      *out += "[]";
      return;
    }
    if (is_scalar_array(j)) {
      *out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) *out += ", ";
        first = false;
        dump_value(e, depth, out);
      }
      *out += "]";
      return;
    }
    *out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) *out += ",\n";
      first = false;
      *out += pad_in;
      dump_value(e, depth + 1, out);
    }
    *out += "\n" + pad + "]";
  } else if (j.is_string()) {
    escape_json_string(j.get<std::string>(), out);
  } else if (j.is_boolean()) {
    *out += j.get<bool>() ? "true" : "false";
  } else if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
      *out += "null";
    } else {
      *out += format_double(x);
    }
  } else if (j.is_number_unsigned()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%llu",
                  static_cast<unsigned long long>(j.get<std::uint64_t>()));
    *out += buf;
  } else if (j.is_number_integer()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld",
                  static_cast<long long>(j.get<std::int64_t>()));
    *out += buf;
  } else {
    *out += "null";
  }
}

}  // namespace detail

inline std::string dump_json(const Json& j) {
  std::string out;
  detail::dump_value(j, 0, &out);
  out.push_back('\n');
  return out;
}

// ---------------------------------------------------------------------------
// Core object schemas (round-trip).

inline Json json_of(const WeightedGraph& g) {
  Json j;
  j["n"] = g.n();
  std::vector<double> upper;
  upper.reserve(static_cast<size_t>(pair_count(g.n())));
  for (int i = 0; i < g.n(); ++i)
    for (int k = i + 1; k < g.n(); ++k) upper.push_back(g.weight(i, k));
  j["weights"] = upper;
  return j;
}

inline WeightedGraph graph_from_json(const Json& j) {
  require(j.is_object() && j.contains("n") && j.contains("weights"),
          "graph_from_json: expected object with n and weights");
  const int n = j.at("n").get<int>();
  const auto upper = j.at("weights").get<std::vector<double>>();
  return WeightedGraph::from_upper(n, upper);
}

inline Json json_of(const StepGraphon& w) {
  Json j;
  j["measures"] = std::vector<double>(w.measures().data(),
                                      w.measures().data() + w.parts());
  Json rows = Json::array();
  for (int i = 0; i < w.parts(); ++i) {
    std::vector<double> row(static_cast<size_t>(w.parts()));
    for (int k = 0; k < w.parts(); ++k) row[static_cast<size_t>(k)] = w.value(i, k);
    rows.push_back(row);
  }
  j["values"] = std::move(rows);
  return j;
}

inline StepGraphon graphon_from_json(const Json& j) {
  require(j.is_object() && j.contains("measures") && j.contains("values"),
          "graphon_from_json: expected object with measures and values");
  const auto mu_vec = j.at("measures").get<std::vector<double>>();
  const int m = static_cast<int>(mu_vec.size());
  Eigen::VectorXd mu(m);
  for (int i = 0; i < m; ++i) mu[i] = mu_vec[static_cast<size_t>(i)];
  Eigen::MatrixXd values(m, m);
  const Json& rows = j.at("values");
  require(rows.is_array() && static_cast<int>(rows.size()) == m,
          "graphon_from_json: values must be an m x m matrix");
  for (int i = 0; i < m; ++i) {
    const auto row = rows[static_cast<size_t>(i)].get<std::vector<double>>();
    require(static_cast<int>(row.size()) == m,
            "graphon_from_json: values must be an m x m matrix");
    for (int k = 0; k < m; ++k) values(i, k) = row[static_cast<size_t>(k)];
  }
  return StepGraphon(mu, values);
}

inline Json json_of(const SubgraphPattern& f) {
  Json j;
  j["k"] = f.k();
  Json edges = Json::array();
  for (const auto& e : f.edges()) edges.push_back(Json::array({e.first, e.second}));
  j["edges"] = std::move(edges);
  return j;
}

inline SubgraphPattern pattern_from_json(const Json& j) {
  require(j.is_object() && j.contains("k") && j.contains("edges"),
          "pattern_from_json: expected object with k and edges");
  const int k = j.at("k").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    require(e.is_array() && e.size() == 2,
            "pattern_from_json: edges must be index pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return SubgraphPattern(k, edges);
}

inline Json json_of(const VertexPartition& p) {
  Json j;
  const std::int64_t n = p.vertex_count();
  std::vector<int> membership(static_cast<size_t>(n), -1);
  for (int i = 0; i < p.part_count(); ++i)
    for (int v : p.parts[static_cast<size_t>(i)])
      membership[static_cast<size_t>(v)] = i;
  j["n"] = n;
  j["membership"] = membership;
  Json rows = Json::array();
  for (int i = 0; i < p.part_count(); ++i) {
    std::vector<double> row(static_cast<size_t>(p.part_count()));
    for (int k = 0; k < p.part_count(); ++k)
      row[static_cast<size_t>(k)] = p.densities(i, k);
    rows.push_back(row);
  }
  j["densities"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------
// Report schemas (emit only; inputs to the CLI are graphs/graphons/patterns).

inline Json json_of(const ConstructionReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["n"] = r.n;
  j["k"] = r.k;
  j["p"] = r.p;
  j["delta"] = r.delta;
  j["size_parameter"] = r.size_parameter;
  j["objective"] = r.objective;
  j["constraint_value"] = r.constraint_value;
  j["target"] = r.target;
  j["normalized_rate"] = r.normalized_rate;
  j["quotient"] = json_of(quotient_graphon(r));
  const bool discrete = r.n > 0;
  if (discrete && r.n <= 64) j["graph"] = json_of(realize_construction(r));
  return j;
}

inline Json json_of(const SolverOptions& o) {
  Json j;
  j["perturbation_starts"] = o.perturbation_starts;
  j["max_iterations"] = o.max_iterations;
  j["penalty_stages"] = o.penalty_stages;
  j["penalty_growth"] = o.penalty_growth;
  j["tolerance_factor"] = o.tolerance_factor;
  j["perturbation_amplitude"] = o.perturbation_amplitude;
  j["seed"] = o.seed;
  j["record_trace"] = o.record_trace;
  return j;
}

inline Json json_of(const StartOutcome& s) {
  Json j;
  j["name"] = s.name;
  j["objective"] = s.objective;
  j["violation"] = s.violation;
  j["feasible"] = s.feasible;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  return j;
}

inline Json json_of(const SolveReport& r) {
  Json j;
  j["objective"] = r.objective;
  j["constraint_value"] = r.constraint_value;
  j["normalized_rate"] = r.normalized_rate;
  j["cherry_ratio"] = r.cherry_ratio;
  j["winner"] = r.winner;
  j["converged"] = r.converged;
  j["starts"] = r.starts;
  Json outcomes = Json::array();
  for (const auto& s : r.start_outcomes) outcomes.push_back(json_of(s));
  j["start_outcomes"] = std::move(outcomes);
  if (r.minimizer.n() <= 64) j["minimizer"] = json_of(r.minimizer);
  return j;
}

inline Json json_of(const FeasibilityReport& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["violation"] = r.violation;
  j["value"] = r.value;
  j["threshold"] = r.threshold;
  return j;
}

inline Json json_of(const GridOracleReport& r) {
  Json j;
  j["value"] = r.value;
  j["error_bound"] = r.error_bound;
  j["grid_points"] = r.grid_points;
  j["feasible_points"] = r.feasible_points;
  j["evaluations"] = r.evaluations;
  j["best_graph"] = json_of(r.best_graph);
  return j;
}

inline Json json_of(const RegimeReport& r) {
  Json j;
  switch (r.label) {
    case RegimeLabel::dense_side: j["label"] = "dense_side"; break;
    case RegimeLabel::sparse_side: j["label"] = "sparse_side"; break;
    case RegimeLabel::boundary: j["label"] = "boundary"; break;
    case RegimeLabel::below_validity: j["label"] = "below_validity"; break;
  }
  j["dense_threshold"] = r.dense_threshold;
  j["sparse_threshold"] = r.sparse_threshold;
  j["margin"] = r.margin;
  return j;
}

inline Json json_of(const OrderEstimate& r) {
  Json j;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["n_exponent"] = r.n_exponent;
  j["p_exponent"] = r.p_exponent;
  j["log_factor"] = r.log_factor;
  return j;
}

inline Json json_of(const UnionBoundReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["log_r"] = r.log_r;
  j["ratio"] = r.ratio;
  return j;
}

inline Json json_of(const SymbolicUnionBound& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["ln_log_r"] = r.ln_log_r;
  j["ln_denominator"] = r.ln_denominator;
  j["log_ratio"] = r.log_ratio;
  return j;
}

inline Json json_of(const TailCertificate& c) {
  Json j;
  j["epsilon"] = c.epsilon;
  j["log_r"] = c.log_r;
  j["phi_lower"] = c.phi_lower;
  j["log_bound"] = c.log_bound;
  j["vacuous"] = c.vacuous;
  return j;
}

inline Json json_of(const SymbolicTailCertificate& c) {
  Json j;
  j["p"] = c.p;
  j["eta"] = c.eta;
  j["ln_log_r"] = c.ln_log_r;
  j["ln_phi"] = c.ln_phi;
  j["exponent_ratio"] = c.exponent_ratio;
  return j;
}

inline Json json_of(const PartitionEventBound& b) {
  Json j;
  j["exponent"] = b.exponent;
  j["blowup_entropy"] = b.blowup_entropy;
  j["blowup_triangle"] = b.blowup_triangle;
  j["identity_gap"] = b.identity_gap;
  return j;
}

inline Json json_of(const CutDeviation& d) {
  Json j;
  j["value"] = d.value;
  j["upper_bound"] = d.upper_bound;
  j["exact"] = d.exact;
  j["s"] = d.s;
  j["t"] = d.t;
  return j;
}

inline Json json_of(const McEstimate& e) {
  Json j;
  j["estimate"] = e.estimate;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["log_estimate"] = e.log_estimate;  // dumped as null when -inf
  j["hits"] = e.hits;
  j["trials"] = e.trials;
  j["certain"] = e.certain;
  j["impossible"] = e.impossible;
  j["note"] = e.note;
  return j;
}

// ---------------------------------------------------------------------------
// CSV helpers.  Every CSV artifact starts with a versioned header comment so
// downstream scripts can pin the column order.

inline constexpr const char* kCsvVersion = "# tailvar-csv v1";

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += cells[i];
  }
  out.push_back('\n');
  return out;
}

inline std::string csv_header(const std::vector<std::string>& columns) {
  return std::string(kCsvVersion) + "\n" + csv_row(columns);
}

inline std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::string out = csv_header({"iteration", "objective", "violation", "mu"});
  for (const auto& t : trace)
    out += csv_row({std::to_string(t.iteration), format_double(t.objective),
                    format_double(t.violation), format_double(t.mu)});
  return out;
}

}  // namespace tailvar
