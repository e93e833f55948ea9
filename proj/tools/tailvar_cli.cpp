// tailvar command-line front end.
//
// Subcommands: limit, construct, solve, sweep, regularity, sample, check.
// Output is JSON by default (CSV for sweep); --out redirects to a file.
// Exit codes: 0 success, 1 check-suite failure or internal error, 2 usage
// error, 3 domain/precondition error, 4 resource/budget error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tailvar/tailvar.hpp>

namespace {

using tailvar::Json;

struct OutputSpec {
  std::string format;  // "json" or "csv"
  std::string path;    // empty = stdout
};

void add_output_options(CLI::App* sub, OutputSpec* out, const std::string& def) {
  out->format = def;
  sub->add_option("--format", out->format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", out->path, "Write the artifact to this file");
  sub->set_config("--config", "",
                  "Read option defaults from a key=value file (flags win)");
}

void emit(const OutputSpec& spec, const std::string& payload) {
  if (spec.path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream file(spec.path, std::ios::binary);
  if (!file) throw std::domain_error("cannot open output file: " + spec.path);
  file.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

void emit_error(const std::string& type, const std::string& message) {
  Json j;
  j["error"] = Json{{"type", type}, {"message", message}};
  const std::string payload = tailvar::dump_json(j);
  std::fwrite(payload.data(), 1, payload.size(), stdout);
}

tailvar::SubgraphPattern parse_pattern(const std::string& name) {
  using namespace tailvar::patterns;
  if (name == "edge") return edge();
  if (name == "triangle") return triangle();
  if (name == "cherry") return cherry();
  const auto dash = name.find('-');
  if (dash != std::string::npos) {
    const std::string family = name.substr(0, dash);
    int k = 0;
    try {
      k = std::stoi(name.substr(dash + 1));
    } catch (const std::exception&) {
      throw std::domain_error("unrecognized pattern: " + name);
    }
    if (family == "clique") return clique(k);
    if (family == "cycle") return cycle(k);
    if (family == "path") return path(k);
    if (family == "star") return star(k);
  }
  throw std::domain_error(
      "unrecognized pattern: " + name +
      " (expected edge, triangle, cherry, clique-k, cycle-k, path-k, star-k)");
}

tailvar::RegimeLabel parse_regime(const std::string& name) {
  if (name == "dense") return tailvar::RegimeLabel::dense_side;
  if (name == "sparse") return tailvar::RegimeLabel::sparse_side;
  throw std::domain_error("unrecognized regime: " + name);
}

Json load_json_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::domain_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return Json::parse(buf.str());
}

// ---------------------------------------------------------------------------

struct LimitArgs {
  int k = 3;
  double delta = 1.0;
  std::string regime = "dense";
  OutputSpec out;
};

void run_limit(const LimitArgs& a) {
  const double rate = tailvar::limit_rate(a.k, a.delta, parse_regime(a.regime));
  const double crossover = tailvar::crossover_delta(a.k);
  if (a.out.format == "csv") {
    std::string payload =
        tailvar::csv_header({"k", "delta", "regime", "rate", "crossover_delta"});
    payload += tailvar::csv_row({std::to_string(a.k), tailvar::format_double(a.delta),
                                 a.regime, tailvar::format_double(rate),
                                 tailvar::format_double(crossover)});
    emit(a.out, payload);
    return;
  }
  Json j;
  j["k"] = a.k;
  j["delta"] = a.delta;
  j["regime"] = a.regime;
  j["rate"] = rate;
  j["crossover_delta"] = crossover;
  if (a.k == 3) {
    const auto split = tailvar::optimal_split(a.delta);
    j["split_delta1"] = split.first;
    j["split_delta2"] = split.second;
    j["phi_prime"] = tailvar::phi_prime_limit(split.first, split.second);
  }
  emit(a.out, tailvar::dump_json(j));
}

struct ConstructArgs {
  std::string kind = "clique";
  std::int64_t n = 0;
  double p = 0.1;
  double delta = 1.0;
  int k = 3;
  OutputSpec out;
};

void run_construct(const ConstructArgs& a) {
  tailvar::ConstructionReport report;
  if (a.kind == "clique-graphon" || a.kind == "hub-graphon") {
    const std::string base = a.kind.substr(0, a.kind.find('-'));
    report = tailvar::graphon_construction(base, a.p, a.delta);
  } else if (a.kind == "best") {
    if (a.n <= 0) throw std::domain_error("construct: --n is required");
    report = tailvar::best_construction(a.n, a.p, a.delta, a.k);
  } else if (a.kind == "clique") {
    if (a.n <= 0) throw std::domain_error("construct: --n is required");
    report = tailvar::clique_construction(a.n, a.p, a.delta, a.k);
  } else if (a.kind == "hub") {
    if (a.n <= 0) throw std::domain_error("construct: --n is required");
    report = tailvar::hub_construction(a.n, a.p, a.delta, a.k);
  } else {
    throw std::domain_error("unrecognized construction kind: " + a.kind);
  }
  if (a.out.format == "csv") {
    std::string payload = tailvar::csv_header(
        {"kind", "n", "k", "p", "delta", "size_parameter", "objective",
         "constraint_value", "target", "normalized_rate"});
    payload += tailvar::csv_row(
        {report.kind, std::to_string(report.n), std::to_string(report.k),
         tailvar::format_double(report.p), tailvar::format_double(report.delta),
         tailvar::format_double(report.size_parameter),
         tailvar::format_double(report.objective),
         tailvar::format_double(report.constraint_value),
         tailvar::format_double(report.target),
         tailvar::format_double(report.normalized_rate)});
    emit(a.out, payload);
    return;
  }
  emit(a.out, tailvar::dump_json(tailvar::json_of(report)));
}

struct SolveArgs {
  int n = 10;
  double p = 0.3;
  double delta = 1.0;
  std::string pattern = "triangle";
  std::uint64_t seed = 0;
  int starts = 8;
  int max_iterations = 400;
  std::string trace_path;
  OutputSpec out;
};

void run_solve(const SolveArgs& a) {
  const tailvar::VariationalInstance inst(a.n, a.p, a.delta,
                                          parse_pattern(a.pattern));
  tailvar::SolverOptions opt;
  opt.seed = a.seed;
  opt.perturbation_starts = a.starts;
  opt.max_iterations = a.max_iterations;
  const tailvar::SolveReport report = tailvar::solve_phi(inst, opt);
  if (!a.trace_path.empty()) {
    OutputSpec trace_spec{"csv", a.trace_path};
    emit(trace_spec, tailvar::trace_csv(report.trace));
  }
  if (a.out.format == "csv") {
    std::string payload = tailvar::csv_header(
        {"n", "p", "delta", "objective", "constraint_value", "normalized_rate",
         "cherry_ratio", "winner", "converged"});
    payload += tailvar::csv_row(
        {std::to_string(a.n), tailvar::format_double(a.p),
         tailvar::format_double(a.delta), tailvar::format_double(report.objective),
         tailvar::format_double(report.constraint_value),
         tailvar::format_double(report.normalized_rate),
         tailvar::format_double(report.cherry_ratio), report.winner,
         report.converged ? "true" : "false"});
    emit(a.out, payload);
    return;
  }
  Json j = tailvar::json_of(report);
  j["instance"] = Json{{"n", a.n}, {"p", a.p}, {"delta", a.delta},
                       {"pattern", a.pattern}, {"seed", a.seed}};
  emit(a.out, tailvar::dump_json(j));
}

struct SweepArgs {
  std::vector<int> ns;
  std::vector<double> ps;
  std::vector<double> deltas;
  std::uint64_t seed = 0;
  OutputSpec out;
};

void run_sweep(const SweepArgs& a) {
  if (a.ns.empty() || a.ps.empty() || a.deltas.empty())
    throw std::domain_error("sweep: --n, --p, and --delta lists are required");
  std::vector<int> ns = a.ns;
  std::vector<double> ps = a.ps, deltas = a.deltas;
  std::sort(ns.begin(), ns.end());
  std::sort(ps.begin(), ps.end());
  std::sort(deltas.begin(), deltas.end());
  struct Row {
    int n;
    double p, delta, objective, normalized_rate, cherry_ratio;
  };
  std::vector<Row> rows;
  for (int n : ns)
    for (double p : ps)
      for (double delta : deltas) {
        const tailvar::VariationalInstance inst(n, p, delta);
        tailvar::SolverOptions opt;
        opt.seed = a.seed;
        opt.record_trace = false;
        const tailvar::SolveReport rep = tailvar::solve_phi(inst, opt);
        rows.push_back({n, p, delta, rep.objective, rep.normalized_rate,
                        rep.cherry_ratio});
      }
  if (a.out.format == "json") {
    Json arr = Json::array();
    for (const Row& r : rows)
      arr.push_back(Json{{"n", r.n},
                         {"p", r.p},
                         {"delta", r.delta},
                         {"objective", r.objective},
                         {"normalized_rate", r.normalized_rate},
                         {"cherry_ratio", r.cherry_ratio}});
    Json j;
    j["rows"] = std::move(arr);
    emit(a.out, tailvar::dump_json(j));
    return;
  }
  std::string payload = tailvar::csv_header(
      {"n", "p", "delta", "objective", "normalized_rate", "cherry_ratio"});
  for (const Row& r : rows)
    payload += tailvar::csv_row(
        {std::to_string(r.n), tailvar::format_double(r.p),
         tailvar::format_double(r.delta), tailvar::format_double(r.objective),
         tailvar::format_double(r.normalized_rate),
         tailvar::format_double(r.cherry_ratio)});
  emit(a.out, payload);
}

struct RegularityArgs {
  std::string input;
  int random_n = 0;
  double random_p = 0.5;
  std::uint64_t seed = 0;
  double eps = 0.3;
  double cert_p = 0.0;
  double cert_delta = 0.0;
  double cert_eta = 0.0;
  OutputSpec out;
};

void run_regularity(const RegularityArgs& a) {
  tailvar::WeightedGraph g(1);
  if (!a.input.empty()) {
    g = tailvar::graph_from_json(load_json_file(a.input));
  } else if (a.random_n >= 1) {
    g = tailvar::sample_gnp(a.random_n, a.random_p, a.seed);
  } else {
    throw std::domain_error("regularity: provide --input or --random-n");
  }
  const tailvar::VertexPartition part = tailvar::weak_regular_partition(g, a.eps);
  const Eigen::MatrixXd diff =
      g.matrix() - tailvar::stepping_matrix(g, part.parts);
  const tailvar::CutDeviation dev = tailvar::cut_deviation(diff);
  const double reduced_error = tailvar::reduced_density_error(g, part);
  if (a.out.format == "csv") {
    std::string payload = tailvar::csv_header(
        {"n", "epsilon", "parts", "deviation", "reduced_error"});
    payload += tailvar::csv_row(
        {std::to_string(g.n()), tailvar::format_double(a.eps),
         std::to_string(part.part_count()), tailvar::format_double(dev.value),
         tailvar::format_double(reduced_error)});
    emit(a.out, payload);
    return;
  }
  Json j;
  j["epsilon"] = a.eps;
  j["n"] = g.n();
  j["part_count"] = part.part_count();
  j["deviation"] = tailvar::json_of(dev);
  j["reduced_error"] = reduced_error;
  j["partition"] = tailvar::json_of(part);
  if (a.cert_p > 0.0) {
    const double phi_low = tailvar::phi_lower_bound(
        g.n(), a.cert_p, a.cert_delta - a.cert_eta);
    j["certificate"] = tailvar::json_of(tailvar::tail_certificate(
        g.n(), a.cert_p, a.cert_delta, a.cert_eta, phi_low));
  }
  emit(a.out, tailvar::dump_json(j));
}

struct SampleArgs {
  int n = 10;
  double p = 0.3;
  double delta = 1.0;
  std::string pattern = "triangle";
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string method = "naive";
  int tilt_clique = -1;
  bool exact = false;
  OutputSpec out;
};

void run_sample(const SampleArgs& a) {
  const tailvar::SubgraphPattern pattern = parse_pattern(a.pattern);
  if (a.exact) {
    const double prob = tailvar::exact_tail_probability(a.n, a.p, a.delta, pattern);
    Json j;
    j["n"] = a.n;
    j["p"] = a.p;
    j["delta"] = a.delta;
    j["pattern"] = a.pattern;
    j["probability"] = prob;
    emit(a.out, tailvar::dump_json(j));
    return;
  }
  tailvar::McEstimate est;
  if (a.method == "naive") {
    est = tailvar::naive_tail_estimate(a.n, a.p, a.delta, pattern, a.trials,
                                       a.seed);
  } else if (a.method == "tilted") {
    const tailvar::TiltSpec tilt = a.tilt_clique >= 0
                                       ? tailvar::planted_clique_tilt(
                                             a.n, a.p, a.tilt_clique)
                                       : tailvar::no_op_tilt(a.n, a.p);
    est = tailvar::tilted_tail_estimate(a.n, a.p, a.delta, pattern, tilt,
                                        a.trials, a.seed);
  } else {
    throw std::domain_error("unrecognized sampling method: " + a.method);
  }
  if (a.out.format == "csv") {
    std::string payload = tailvar::csv_header(
        {"n", "p", "delta", "trials", "estimate", "ci_lo", "ci_hi", "seed"});
    payload += tailvar::csv_row(
        {std::to_string(a.n), tailvar::format_double(a.p),
         tailvar::format_double(a.delta), std::to_string(a.trials),
         tailvar::format_double(est.estimate), tailvar::format_double(est.ci_low),
         tailvar::format_double(est.ci_high), std::to_string(a.seed)});
    emit(a.out, payload);
    return;
  }
  Json j = tailvar::json_of(est);
  j["instance"] = Json{{"n", a.n},        {"p", a.p},
                       {"delta", a.delta}, {"pattern", a.pattern},
                       {"method", a.method}, {"seed", a.seed}};
  emit(a.out, tailvar::dump_json(j));
}

// ---------------------------------------------------------------------------
// check: fast self-contained property suites.

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;

  void expect(bool ok) {
    ++checks;
    if (!ok) ++failures;
  }
};

SuiteResult check_entropy_domination() {
  SuiteResult suite{"entropy-domination"};
  for (double p : {1e-2, 1e-3, 1e-4}) {
    const double b = tailvar::chord_domain_max(p);
    for (int i = 0; i <= 200; ++i) {
      // the grid endpoint can land one ulp above 1 - p; clamp into the domain
      const double x = std::min((1.0 - p) * i / 200.0, 1.0 - p);
      const double exact = tailvar::relative_entropy(p + x, p);
      suite.expect(tailvar::quadratic_lower_bound(x, p) <= exact + 1e-12);
      if (x <= b)
        suite.expect(tailvar::chord_lower_bound(x, b, p) <= exact + 1e-12);
    }
  }
  return suite;
}

SuiteResult check_graphon_slacks() {
  SuiteResult suite{"graphon-slacks"};
  tailvar::CounterRng rng(2026, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);
    Eigen::VectorXd mu(m);
    for (int i = 0; i < m; ++i) mu[i] = 0.1 + rng.next_double();
    mu /= mu.sum();
    Eigen::MatrixXd w(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = i; k < m; ++k) {
        w(i, k) = rng.next_double();
        w(k, i) = w(i, k);
      }
    const tailvar::StepGraphon u(mu, w);
    suite.expect(tailvar::cauchy_schwarz_slack(u) >= -1e-12);
    suite.expect(tailvar::holder_slack(tailvar::patterns::triangle(), u, 2) >=
                 -1e-12);
    suite.expect(tailvar::holder_slack(tailvar::patterns::cherry(), u, 2) >=
                 -1e-12);
  }
  return suite;
}

SuiteResult check_binomial_chernoff() {
  SuiteResult suite{"binomial-chernoff"};
  for (double p : {0.1, 0.5}) {
    for (int n = 1; n <= 15; ++n) {
      // exact upper tail P(Bin(n,p) >= r) vs the Chernoff log bound
      std::vector<double> pmf(static_cast<size_t>(n) + 1);
      for (int r = 0; r <= n; ++r) {
        double binom = 1.0;
        for (int i = 0; i < r; ++i) binom = binom * (n - i) / (i + 1);
        pmf[static_cast<size_t>(r)] =
            binom * std::pow(p, r) * std::pow(1.0 - p, n - r);
      }
      for (int r = 0; r <= n; ++r) {
        double tail = 0.0;
        for (int s = n; s >= r; --s) tail += pmf[static_cast<size_t>(s)];
        const double log_bound = tailvar::binomial_tail_bound(
            n, p, static_cast<double>(r) / n);
        suite.expect(std::log(tail) <= log_bound + 1e-9);
      }
    }
  }
  return suite;
}

SuiteResult check_embedding_identities() {
  SuiteResult suite{"embedding-identities"};
  tailvar::CounterRng rng(2026, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 10);
    tailvar::WeightedGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) g.set_weight(i, k, rng.next_double());
    const tailvar::StepGraphon w = tailvar::embed_step_graphon(g);
    suite.expect(std::abs(tailvar::triangle_density(w) -
                          tailvar::triangle_density(g)) <= 1e-12);
    const double p = 0.3;
    const double lhs = 0.5 * tailvar::mean_relative_entropy(w, p);
    const double rhs = tailvar::total_relative_entropy(g, p) / (1.0 * n * n) +
                       tailvar::relative_entropy(0.0, p) / (2.0 * n);
    suite.expect(std::abs(lhs - rhs) <= 1e-12);
  }
  return suite;
}

SuiteResult check_decomposition() {
  SuiteResult suite{"excess-decomposition"};
  tailvar::CounterRng rng(2026, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);
    const double p = 0.05 + 0.5 * rng.next_double();
    Eigen::VectorXd mu(m);
    for (int i = 0; i < m; ++i) mu[i] = 0.1 + rng.next_double();
    mu /= mu.sum();
    Eigen::MatrixXd w(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = i; k < m; ++k) {
        w(i, k) = p + (1.0 - p) * rng.next_double();
        w(k, i) = w(i, k);
      }
    const tailvar::StepGraphon graphon(mu, w);
    const auto d = tailvar::decompose_excess(graphon, p);
    const double lhs = tailvar::triangle_density(graphon);
    const double p3 = p * p * p;
    const double rhs = p3 * (1.0 + d.delta1 + 3.0 * d.delta2 + 3.0 * d.delta3);
    suite.expect(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
  return suite;
}

SuiteResult check_roundtrip() {
  SuiteResult suite{"serialization-roundtrip"};
  tailvar::CounterRng rng(2026, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 8);
    tailvar::WeightedGraph g(n);
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) g.set_weight(i, k, rng.next_double());
    const Json j = Json::parse(tailvar::dump_json(tailvar::json_of(g)));
    const tailvar::WeightedGraph back = tailvar::graph_from_json(j);
    bool same = back.n() == g.n();
    for (int i = 0; i < n && same; ++i)
      for (int k = 0; k < n && same; ++k)
        same = back.weight(i, k) == g.weight(i, k);
    suite.expect(same);
  }
  const tailvar::SubgraphPattern f = tailvar::patterns::cycle(5);
  suite.expect(tailvar::pattern_from_json(
                   Json::parse(tailvar::dump_json(tailvar::json_of(f)))) == f);
  return suite;
}

SuiteResult check_limit_consistency() {
  SuiteResult suite{"limit-consistency"};
  for (int i = 1; i <= 20; ++i) {
    const double delta = 0.25 * i;
    const auto split = tailvar::optimal_split(delta);
    const double via_split = tailvar::phi_prime_limit(split.first, split.second);
    const double direct =
        tailvar::limit_rate(3, delta, tailvar::RegimeLabel::dense_side);
    suite.expect(std::abs(via_split - direct) <= 1e-12);
  }
  for (int k = 3; k <= 8; ++k) {
    const double cd = tailvar::crossover_delta(k);
    const double gap = std::abs(
        tailvar::limit_rate(k, cd, tailvar::RegimeLabel::dense_side) * 2.0 *
            std::pow(cd, -2.0 / k) - 1.0);
    suite.expect(gap <= 1e-9);
  }
  return suite;
}

void run_check(const OutputSpec& out) {
  const std::vector<SuiteResult> suites = {
      check_entropy_domination(), check_graphon_slacks(),
      check_binomial_chernoff(),  check_embedding_identities(),
      check_decomposition(),      check_roundtrip(),
      check_limit_consistency()};
  int checks = 0, failures = 0;
  for (const auto& s : suites) {
    checks += s.checks;
    failures += s.failures;
  }
  if (out.format == "csv") {
    std::string payload = tailvar::csv_header({"suite", "checks", "failures"});
    for (const auto& s : suites)
      payload += tailvar::csv_row(
          {s.name, std::to_string(s.checks), std::to_string(s.failures)});
    emit(out, payload);
  } else {
    Json arr = Json::array();
    for (const auto& s : suites)
      arr.push_back(Json{{"name", s.name},
                         {"checks", s.checks},
                         {"failures", s.failures}});
    Json j;
    j["suites"] = std::move(arr);
    j["checks"] = checks;
    j["failures"] = failures;
    j["pass"] = failures == 0;
    emit(out, tailvar::dump_json(j));
  }
  if (failures > 0) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational upper-tail toolkit for subgraph counts"};
  app.require_subcommand(1);

  LimitArgs limit_args;
  CLI::App* limit = app.add_subcommand("limit", "Closed-form limiting rates");
  limit->add_option("--k", limit_args.k, "Clique order")->capture_default_str();
  limit->add_option("--delta", limit_args.delta, "Excess fraction")->required();
  limit->add_option("--regime", limit_args.regime, "dense or sparse")
      ->check(CLI::IsMember({"dense", "sparse"}))
      ->capture_default_str();
  add_output_options(limit, &limit_args.out, "json");
  limit->callback([&] { run_limit(limit_args); });

  ConstructArgs construct_args;
  CLI::App* construct =
      app.add_subcommand("construct", "Planted clique/hub constructions");
  construct->add_option("--kind", construct_args.kind,
                        "clique, hub, best, clique-graphon, hub-graphon")
      ->required();
  construct->add_option("--n", construct_args.n, "Vertex count (discrete kinds)");
  construct->add_option("--p", construct_args.p, "Edge probability")->required();
  construct->add_option("--delta", construct_args.delta, "Excess fraction")
      ->required();
  construct->add_option("--k", construct_args.k, "Clique order")
      ->capture_default_str();
  add_output_options(construct, &construct_args.out, "json");
  construct->callback([&] { run_construct(construct_args); });

  SolveArgs solve_args;
  CLI::App* solve =
      app.add_subcommand("solve", "Minimize the entropy objective");
  solve->add_option("--n", solve_args.n, "Vertex count")->required();
  solve->add_option("--p", solve_args.p, "Edge probability")->required();
  solve->add_option("--delta", solve_args.delta, "Excess fraction")->required();
  solve->add_option("--pattern", solve_args.pattern, "Subgraph pattern")
      ->capture_default_str();
  solve->add_option("--seed", solve_args.seed, "Random seed")
      ->capture_default_str();
  solve->add_option("--starts", solve_args.starts, "Perturbation starts")
      ->capture_default_str();
  solve->add_option("--max-iterations", solve_args.max_iterations,
                    "Iterations per penalty stage")
      ->capture_default_str();
  solve->add_option("--trace", solve_args.trace_path,
                    "Write the iteration trace to this CSV file");
  add_output_options(solve, &solve_args.out, "json");
  solve->callback([&] { run_solve(solve_args); });

  SweepArgs sweep_args;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Solve a grid of (n, p, delta) instances");
  sweep->add_option("--n", sweep_args.ns, "Vertex counts")
      ->required()
      ->delimiter(',');
  sweep->add_option("--p", sweep_args.ps, "Edge probabilities")
      ->required()
      ->delimiter(',');
  sweep->add_option("--delta", sweep_args.deltas, "Excess fractions")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seed", sweep_args.seed, "Random seed")
      ->capture_default_str();
  add_output_options(sweep, &sweep_args.out, "csv");
  sweep->callback([&] { run_sweep(sweep_args); });

  RegularityArgs reg_args;
  CLI::App* regularity = app.add_subcommand(
      "regularity", "Weak regularity partition and tail certificate");
  regularity->add_option("--input", reg_args.input, "Graph JSON file");
  regularity->add_option("--random-n", reg_args.random_n,
                         "Sample a G(n,p) input with this n");
  regularity->add_option("--random-p", reg_args.random_p,
                         "Edge probability for the sampled input")
      ->capture_default_str();
  regularity->add_option("--seed", reg_args.seed, "Random seed")
      ->capture_default_str();
  regularity->add_option("--eps", reg_args.eps, "Regularity accuracy")
      ->capture_default_str();
  regularity->add_option("--cert-p", reg_args.cert_p,
                         "Edge probability for the tail certificate");
  regularity->add_option("--cert-delta", reg_args.cert_delta,
                         "Excess fraction for the tail certificate");
  regularity->add_option("--cert-eta", reg_args.cert_eta,
                         "Density slack for the tail certificate");
  add_output_options(regularity, &reg_args.out, "json");
  regularity->callback([&] { run_regularity(reg_args); });

  SampleArgs sample_args;
  CLI::App* sample =
      app.add_subcommand("sample", "Monte Carlo tail estimation");
  sample->add_option("--n", sample_args.n, "Vertex count")->required();
  sample->add_option("--p", sample_args.p, "Edge probability")->required();
  sample->add_option("--delta", sample_args.delta, "Excess fraction")
      ->required();
  sample->add_option("--pattern", sample_args.pattern, "Subgraph pattern")
      ->capture_default_str();
  sample->add_option("--trials", sample_args.trials, "Sample count")
      ->capture_default_str();
  sample->add_option("--seed", sample_args.seed, "Random seed")
      ->capture_default_str();
  sample->add_option("--method", sample_args.method, "naive or tilted")
      ->check(CLI::IsMember({"naive", "tilted"}))
      ->capture_default_str();
  sample->add_option("--tilt-clique", sample_args.tilt_clique,
                     "Plant a clique of this size in the tilted law");
  sample->add_flag("--exact", sample_args.exact,
                   "Exact enumeration instead of sampling (n <= 5)");
  add_output_options(sample, &sample_args.out, "json");
  sample->callback([&] { run_sample(sample_args); });

  OutputSpec check_out;
  CLI::App* check =
      app.add_subcommand("check", "Run the inequality and identity suites");
  add_output_options(check, &check_out, "json");
  check->callback([&] { run_check(check_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const tailvar::resource_error& e) {
    emit_error("resource", e.what());
    return 4;
  } catch (const std::domain_error& e) {
    emit_error("domain", e.what());
    return 3;
  } catch (const nlohmann::json::exception& e) {
    emit_error("domain", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
  return 0;
}
