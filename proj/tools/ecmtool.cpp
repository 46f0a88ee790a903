// ecmtool: command-line front end for the ecm library.
//
// Node labels on the command line and in every output are 1-based.
// Exit status: 0 success, 1 usage error, 2 numerical precondition failure.

#include "ecm/bounds.hpp"
#include "ecm/error.hpp"
#include "ecm/experiments.hpp"
#include "ecm/io.hpp"
#include "ecm/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using ecm::Edge;
using ecm::Error;
using ecm::ErrorCode;
using ecm::Index;
using ecm::MetricId;
using ecm::NetworkSystem;

struct Options {
  std::string system;
  std::string T;  // empty: command default
  std::string metric = "trace";
  double w = 0.0;
  std::string edge;
  std::string inputs;
  int top_k = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool estimate = false;
  bool include_unstable = false;

  // ER ensemble
  int n = 30;
  int m = 8;
  double p = 0.35;
  double rho_lo = 0.85;
  double rho_hi = 0.90;
  int count = 100;
  int index = 0;
  bool paper_scale = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultHorizon = 10;

std::optional<int> parse_horizon(const std::string& text) {
  if (text.empty()) return kDefaultHorizon;
  if (text == "inf") return std::nullopt;
  try {
    std::size_t used = 0;
    const int T = std::stoi(text, &used);
    if (used == text.size() && T >= 1) return T;
  } catch (const std::exception&) {
  }
  throw UsageError("--T expects a positive integer or 'inf'");
}

int finite_horizon(const Options& o) {
  const auto T = parse_horizon(o.T);
  if (!T) throw UsageError("this command needs a finite --T");
  return *T;
}

std::vector<int> parse_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + " expects comma-separated integers");
    }
  }
  return out;
}

Edge parse_edge(const std::string& text, Index n) {
  const auto v = parse_list(text, "--edge");
  if (v.size() != 2) throw UsageError("--edge expects i,j");
  if (v[0] < 1 || v[1] < 1 || v[0] > n || v[1] > n) throw UsageError("--edge node outside 1..n");
  return Edge{v[0] - 1, v[1] - 1};
}

NetworkSystem load_system(const Options& o) {
  if (o.system.empty()) throw UsageError("--system <file> is required");
  return ecm::read_system(o.system);
}

bool structured(const Options& o) { return o.format == "structured"; }

void emit(const Options& o, const std::string& file, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    ecm::write_text_file(o.out + "/" + file, text);
    std::cerr << "wrote " << o.out << "/" << file << "\n";
  }
}

std::string edge_label(Edge e) {
  return std::to_string(e.from + 1) + "," + std::to_string(e.to + 1);
}

int cmd_gramian(const Options& o) {
  const auto sys = load_system(o);
  const auto T = parse_horizon(o.T);
  const auto g = T ? ecm::finite_gramian(sys, *T) : ecm::infinite_gramian(sys);
  if (structured(o)) {
    nlohmann::json j;
    j["T"] = T ? nlohmann::json(*T) : nlohmann::json("inf");
    j["min_eig"] = g.min_eig;
    j["residual"] = g.residual;
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < g.W.rows(); ++r)
      rows.push_back(std::vector<double>(g.W.row(r).begin(), g.W.row(r).end()));
    j["W"] = rows;
    emit(o, "gramian.json", j.dump(2) + "\n");
  } else {
    emit(o, "gramian.csv", ecm::format_csv_matrix(g.W));
  }
  return 0;
}

int cmd_metric(const Options& o) {
  const auto sys = load_system(o);
  const auto metric = MetricId::parse(o.metric);
  const auto T = parse_horizon(o.T);
  const auto g = T ? ecm::finite_gramian(sys, *T) : ecm::infinite_gramian(sys);
  const double value = ecm::evaluate_metric(g, metric);
  if (structured(o)) {
    nlohmann::json j{{"metric", metric.name()}, {"T", T ? nlohmann::json(*T) : nlohmann::json("inf")},
                     {"value", value}};
    emit(o, "metric.json", j.dump(2) + "\n");
  } else {
    emit(o, "metric.csv", "metric,T,value\n" + metric.name() + "," + (T ? std::to_string(*T) : "inf") + "," + ecm::format_double(value) + "\n");
  }
  return 0;
}

int cmd_ecm(const Options& o) {
  const auto sys = load_system(o);
  const int T = finite_horizon(o);
  const auto metric = MetricId::parse(o.metric);
  std::vector<Index> inputs;
  for (int k : parse_list(o.inputs, "--inputs")) inputs.push_back(k - 1);
  if (inputs.empty())
    for (Index k = 0; k < sys.m(); ++k) inputs.push_back(k);
  auto report = ecm::compute_ecm(sys, T, metric, inputs);
  if (o.top_k > 0 && static_cast<std::size_t>(o.top_k) < report.ranked_edges.size())
    report.ranked_edges.resize(static_cast<std::size_t>(o.top_k));

  if (!o.out.empty()) {
    emit(o, "ecm.json", ecm::ecm_report_to_json(report));
    emit(o, "theta.csv", ecm::format_csv_matrix(report.theta.total));
    emit(o, "sparsity.csv", ecm::sparsity_to_csv(ecm::sparsity_pattern(report.theta.total)));
  } else if (structured(o)) {
    std::cout << ecm::ecm_report_to_json(report);
  } else {
    std::cout << "from,to,value\n";
    for (const auto& r : report.ranked_edges)
      std::cout << r.edge.from + 1 << "," << r.edge.to + 1 << "," << ecm::format_double(r.value) << "\n";
  }
  return 0;
}

int cmd_gradient_check(const Options& o) {
  const auto sys = load_system(o);
  const int T = finite_horizon(o);
  const auto metric = MetricId::parse(o.metric);
  const auto G = ecm::metric_gradient(sys, T, metric).G;
  const auto F = ecm::fd_gradient_oracle(sys, T, metric).G;
  const double scale = F.cwiseAbs().maxCoeff();
  double max_abs = 0.0, max_rel = 0.0;
  for (Index j = 0; j < G.rows(); ++j)
    for (Index i = 0; i < G.cols(); ++i) {
      const double d = std::abs(G(j, i) - F(j, i));
      max_abs = std::max(max_abs, d);
      max_rel = std::max(max_rel, d / std::max(std::abs(F(j, i)), 1e-3 * scale));
    }
  if (structured(o)) {
    nlohmann::json j{{"metric", metric.name()}, {"T", T}, {"max_abs_error", max_abs}, {"max_rel_error", max_rel}};
    emit(o, "gradient_check.json", j.dump(2) + "\n");
  } else {
    emit(o, "gradient_check.csv", "metric,T,max_abs_error,max_rel_error\n" + metric.name() + "," +
                                      std::to_string(T) + "," + ecm::format_double(max_abs) + "," +
                                      ecm::format_double(max_rel) + "\n");
  }
  return 0;
}

int cmd_bounds(const Options& o) {
  const auto sys = load_system(o);
  if (o.edge.empty()) throw UsageError("bounds needs --edge i,j");
  const Edge e = parse_edge(o.edge, sys.n());
  const auto metric = MetricId::parse(o.metric);
  ecm::BoundsReport r;
  switch (metric.kind()) {
    case MetricId::Kind::Trace: r = ecm::trace_bounds(sys, e, o.w); break;
    case MetricId::Kind::NegTraceInv: r = ecm::trinv_lower_bounds(sys, e, o.w); break;
    case MetricId::Kind::LogDet: r = ecm::logdet_upper_bounds(sys, e, o.w, finite_horizon(o)); break;
    default: throw UsageError("bounds support trace, logdet and trinv");
  }
  if (structured(o) || !o.out.empty()) {
    emit(o, "bounds.json", ecm::bounds_report_to_json(r));
  } else {
    std::cout << "metric,edge_from,edge_to,w,unmodified_bound,modified_bound\n"
              << metric.name() << "," << edge_label(e) << "," << ecm::format_double(o.w) << ","
              << ecm::format_double(r.unmodified_bound) << "," << ecm::format_double(r.modified_bound) << "\n";
  }
  return 0;
}

int cmd_stability_interval(const Options& o) {
  const auto sys = load_system(o);
  std::string text;
  if (o.edge.empty()) {
    const auto b = ecm::global_weight_bound(sys);
    text = "w_max,governing_from,governing_to\n";
    text += b.w_max ? ecm::format_double(*b.w_max) + "," + edge_label(b.governing_edge) : "inf,,";
    text += "\n";
  } else {
    const Edge e = parse_edge(o.edge, sys.n());
    const auto iv = ecm::stability_weight_interval(sys, e);
    text = "edge_from,edge_to,lower,upper\n" + edge_label(e) + ",";
    text += iv.bounded ? ecm::format_double(iv.lower) + "," + ecm::format_double(iv.upper) : "-inf,inf";
    text += "\n";
  }
  emit(o, "stability_interval.csv", text);
  return 0;
}

int cmd_search(const Options& o) {
  const auto sys = load_system(o);
  const int T = finite_horizon(o);
  const auto metric = MetricId::parse(o.metric);
  ecm::SearchOptions opts;
  opts.include_unstable_in_best = o.include_unstable;
  ecm::SearchReport r;
  if (o.top_k > 0) {
    r = ecm::ecm_guided_search(sys, T, metric, o.w, o.top_k, opts);
  } else {
    r = ecm::exhaustive_search(sys, T, metric, o.w, opts);
    ecm::attach_ecm_choice(r, sys);
  }
  if (o.estimate) r.f_g = ecm::global_estimate(sys, T, metric, o.w, 30, o.top_k > 0 ? nullptr : &r).f_g;

  if (!o.out.empty()) {
    emit(o, "search.csv", ecm::search_table_to_csv(r));
    emit(o, "search_summary.json", ecm::search_summary_to_json(r));
  } else if (structured(o)) {
    std::cout << ecm::search_summary_to_json(r);
  } else {
    std::cout << ecm::search_table_to_csv(r);
  }
  return 0;
}

int cmd_stembud(const Options& o) {
  if (o.system.empty()) throw UsageError("--system <stem-bud json> is required");
  auto doc = ecm::parse_stembud_json(ecm::read_text_file(o.system));
  if (!o.inputs.empty()) doc.inputs = parse_list(o.inputs, "--inputs");
  const int T = finite_horizon(o);
  const auto sys = ecm::build_stembud(doc.spec, doc.inputs);
  const auto numeric = ecm::finite_gramian(sys, T).W;
  ecm::Vector closed = ecm::Vector::Zero(doc.spec.n);
  for (int node : doc.inputs) closed += ecm::stembud_gramian_closed_form(doc.spec, node, T);
  const auto pred = ecm::predicted_ecm_diagonals(doc.spec.n, doc.spec.bud_length());
  const auto ecm_report = ecm::compute_ecm(sys, T, MetricId::parse(o.metric));
  const auto pat = ecm::sparsity_pattern(ecm_report.theta.total);

  nlohmann::json j;
  j["n"] = doc.spec.n;
  j["y"] = doc.spec.y;
  j["bud_length"] = doc.spec.bud_length() ? nlohmann::json(*doc.spec.bud_length()) : nlohmann::json("inf");
  j["bud_contribution"] = doc.spec.bud_contribution();
  const ecm::Vector diag = numeric.diagonal();
  j["gramian_diagonal"] = std::vector<double>(diag.data(), diag.data() + diag.size());
  j["closed_form_diagonal"] = std::vector<double>(closed.data(), closed.data() + closed.size());
  j["predicted"] = {{"k_sub", pred.k_sub}, {"N_sub", pred.sub}, {"k_sup", pred.k_sup}, {"N_sup", pred.sup}};
  j["computed"] = {{"N_sub", pat.sub_diagonals}, {"N_sup", pat.super_diagonals}};
  emit(o, "stembud.json", j.dump(2) + "\n");
  if (!o.out.empty()) emit(o, "sparsity.csv", ecm::sparsity_to_csv(pat));
  return 0;
}

int cmd_exp_stembud6(const Options& o) {
  const auto r = ecm::run_stembud6_experiment(o.out);
  if (o.out.empty())
    std::cout << r.structure_predicted.to_csv() << "\n"
              << r.structure_computed.to_csv() << "\n"
              << r.performance.to_csv();
  else
    std::cerr << "wrote stem-bud tables to " << o.out << "\n";
  return 0;
}

ecm::ErConfig er_config(const Options& o) {
  ecm::ErConfig c;
  c.n = o.paper_scale ? 100 : o.n;
  c.m = o.paper_scale ? 30 : o.m;
  c.count = o.paper_scale ? 1000 : o.count;
  c.p = o.p;
  c.rho_lo = o.rho_lo;
  c.rho_hi = o.rho_hi;
  c.seed = o.seed;
  return c;
}

int cmd_exp_er(const Options& o) {
  ecm::ErCampaignConfig cfg;
  cfg.er = er_config(o);
  if (o.top_k > 0) cfg.k = o.top_k;
  if (!o.T.empty()) cfg.T = finite_horizon(o);
  const auto r = ecm::run_er_experiment(cfg, o.out);
  if (o.out.empty())
    for (const auto& t : r.aggregates) std::cout << "# " << t.name << "\n" << t.to_csv() << "\n";
  std::cerr << "networks " << cfg.er.count << ", failures " << r.failures.size() << ", literature bound looser in "
            << r.literature_tighter << "/" << r.literature_cases << " cases, " << r.seconds << " s\n";
  return 0;
}

int cmd_gen_er(const Options& o) {
  const auto cfg = er_config(o);
  const auto sys = ecm::generate_er_system(cfg, static_cast<std::uint64_t>(o.index));
  emit(o, "er_" + std::to_string(o.index) + ".json", ecm::system_to_json(sys));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge centrality analysis of linear network controllability"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system", o.system, "System file (.json document or CSV adjacency)");
    sub->add_option("--T", o.T, "Horizon: positive integer or inf (default 10; exp-er uses n)");
    sub->add_option("--metric", o.metric, "trace | logdet | trinv | lambda-min");
    sub->add_option("--w", o.w, "Weight change");
    sub->add_option("--edge", o.edge, "Edge i,j (1-based, i -> j)");
    sub->add_option("--inputs", o.inputs, "Comma-separated 1-based list");
    sub->add_option("--top-k", o.top_k, "Top-k edge count");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "csv | structured")->check(CLI::IsMember({"csv", "structured"}));
  };
  auto add_er = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "Nodes");
    sub->add_option("--m", o.m, "Inputs");
    sub->add_option("--p", o.p, "Edge probability");
    sub->add_option("--rho-lo", o.rho_lo, "Lower end of the spectral-radius interval");
    sub->add_option("--rho-hi", o.rho_hi, "Upper end of the spectral-radius interval");
    sub->add_flag("--paper-scale", o.paper_scale, "n=100, m=30, 1000 networks");
  };

  struct Verb {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Verb verbs[] = {
      {"gramian", "Controllability Gramian", cmd_gramian},
      {"metric", "Gramian performance metric", cmd_metric},
      {"ecm", "Edge centrality matrix and ranked edges", cmd_ecm},
      {"gradient-check", "Compare the analytic gradient with finite differences", cmd_gradient_check},
      {"bounds", "Metric bounds for a single-edge modification", cmd_bounds},
      {"stability-interval", "Stability-preserving weight interval", cmd_stability_interval},
      {"search", "Exhaustive or ECM-guided single-edge search", cmd_search},
      {"stembud", "Stem-bud network analysis", cmd_stembud},
      {"exp-stembud6", "Six-node stem-bud experiment", cmd_exp_stembud6},
      {"exp-er", "Erdos-Renyi campaign", cmd_exp_er},
      {"gen-er", "Generate one Erdos-Renyi network", cmd_gen_er},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    add_common(sub);
    if (std::string(v.name) == "search") {
      sub->add_flag("--estimate", o.estimate, "Also compute the curve-fit global estimate");
      sub->add_flag("--include-unstable", o.include_unstable, "Let destabilizing edges compete for f_EX");
    }
    if (std::string(v.name) == "exp-er" || std::string(v.name) == "gen-er") {
      add_er(sub);
      if (std::string(v.name) == "exp-er") sub->add_option("--count", o.count, "Networks in the ensemble");
      else sub->add_option("--index", o.index, "Member of the ensemble");
    }
    subs.emplace_back(sub, &v);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    for (const auto& [sub, verb] : subs)
      if (sub->parsed()) return verb->run(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error [" << ecm::to_string(e.code()) << "]: " << e.what() << "\n";
    return e.is_numerical() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
