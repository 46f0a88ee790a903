#include "ecm/experiments.hpp"

#include "ecm/bounds.hpp"
#include "ecm/error.hpp"
#include "ecm/io.hpp"
#include "ecm/parallel.hpp"
#include "ecm/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace ecm {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<int> to_vector(const std::set<Index>& s) {
  return std::vector<int>(s.begin(), s.end());
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string config_text(const ErCampaignConfig& cfg) {
  std::ostringstream s;
  s << "n=" << cfg.er.n << " m=" << cfg.er.m << " p=" << cell_of(cfg.er.p) << " rho=("
    << cell_of(cfg.er.rho_lo) << "," << cell_of(cfg.er.rho_hi) << ") weights=" << cfg.er.weight_law
    << " count=" << cfg.er.count << " k=" << cfg.k << " T=" << (cfg.T > 0 ? cfg.T : cfg.er.n);
  return s.str();
}

}  // namespace

std::string cell_of(double v) { return format_double(v); }

std::string cell_of(const std::vector<int>& set) {
  std::string out;
  for (std::size_t k = 0; k < set.size(); ++k) out += (k ? " " : "") + std::to_string(set[k]);
  return out;
}

void ExperimentTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    fail(ErrorCode::DimensionMismatch, "row width differs from header in table " + name);
  rows.push_back(std::move(cells));
}

const std::string& ExperimentTable::cell(std::size_t row, const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) fail(ErrorCode::InvalidArgument, "no column " + column);
  return rows.at(row).at(static_cast<std::size_t>(it - columns.begin()));
}

double ExperimentTable::number(std::size_t row, const std::string& column) const {
  const std::string& c = cell(row, column);
  try {
    std::size_t used = 0;
    const double v = std::stod(c, &used);
    if (used == c.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::ParseError, "cell '" + c + "' is not a number");
}

std::string ExperimentTable::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
    out += '\n';
  }
  return out;
}

std::string ExperimentTable::to_json() const {
  json j;
  j["name"] = name;
  j["columns"] = columns;
  j["rows"] = rows;
  j["provenance"] = provenance;
  return j.dump(2) + "\n";
}

ExperimentTable ExperimentTable::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentTable t;
    t.name = j.at("name").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.provenance = j.value("provenance", std::map<std::string, std::string>{});
    for (const auto& row : j.at("rows")) t.add_row(row.get<std::vector<std::string>>());
    return t;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

ExperimentTable ExperimentTable::from_csv(const std::string& name, const std::string& text) {
  ExperimentTable t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ParseError, "missing header");
  t.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) fail(ErrorCode::ParseError, "ragged table row");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void ExperimentTable::write(const std::string& dir) const {
  write_text_file(dir + "/" + name + ".csv", to_csv());
  write_text_file(dir + "/" + name + ".json", to_json());
}

StemBudSpec stembud6_spec(int y) {
  StemBudSpec s;
  s.n = 6;
  s.y = y;
  s.stem_weights = {0.9, 0.7, 0.8, 0.6, 0.8};
  s.back_weight = y >= 1 ? 0.7 : 0.0;
  return s;
}

Stembud6Result run_stembud6_experiment(const std::string& out_dir) {
  constexpr int T = 12;
  const int inputs[] = {1, 3};
  const std::map<std::string, std::string> prov{
      {"network", "6-node stem-bud, stem weights 0.9 0.7 0.8 0.6 0.8, a_yn 0.7"},
      {"inputs", "1 3"},
      {"T", "12"},
      {"w", "0.99 * global weight bound"},
      {"seed", "none (deterministic)"}};

  Stembud6Result res;
  res.structure_predicted.name = "stembud6_structure_predicted";
  res.structure_predicted.columns = {"y", "L_b", "k_sub", "N_sub", "k_sup", "N_sup"};
  res.structure_computed.name = "stembud6_structure_computed";
  res.structure_computed.columns = {"y", "metric", "N_sub", "N_sup", "main_diagonal", "contained"};
  res.performance.name = "stembud6_performance";
  res.performance.columns = {"y",           "w",           "trace_f_I",    "trace_f_EC",
                             "trace_f_EX",  "logdet_f_I",  "logdet_f_EC",  "logdet_f_EX",
                             "trace_ecm_edge", "trace_best_edge", "logdet_ecm_edge",
                             "logdet_best_edge"};
  for (auto* t : {&res.structure_predicted, &res.structure_computed, &res.performance})
    t->provenance = prov;

  auto edge_cell = [](const std::optional<Edge>& e) {
    return e ? std::to_string(e->from + 1) + "->" + std::to_string(e->to + 1) : std::string("-");
  };

  for (int y = 0; y <= 5; ++y) {
    const StemBudSpec spec = stembud6_spec(y);
    const NetworkSystem sys = build_stembud(spec, inputs);
    const auto lb = spec.bud_length();
    const DiagonalPattern pred = predicted_ecm_diagonals(spec.n, lb);
    res.structure_predicted.add_row({std::to_string(y), lb ? std::to_string(*lb) : "inf",
                                     std::to_string(pred.k_sub), cell_of(pred.sub),
                                     std::to_string(pred.k_sup), cell_of(pred.sup)});

    const MetricId metrics[] = {MetricId::trace(), MetricId::log_det()};
    for (MetricId metric : metrics) {
      const EcmReport ecm = compute_ecm(sys, T, metric);
      const SparsityPattern pat = sparsity_pattern(ecm.theta.total);
      const auto sub = to_vector(pat.sub_diagonals);
      const auto sup = to_vector(pat.super_diagonals);
      const bool contained = subset(sub, pred.sub) && subset(sup, pred.sup) && !pat.main_diagonal;
      res.structure_computed.add_row({std::to_string(y), metric.name(), cell_of(sub), cell_of(sup),
                                      pat.main_diagonal ? "1" : "0", contained ? "1" : "0"});
      if (metric.kind() == MetricId::Kind::Trace) {
        res.patterns.push_back(pat);
        if (!out_dir.empty())
          write_text_file(out_dir + "/sparsity_y" + std::to_string(y) + ".csv", sparsity_to_csv(pat));
      }
    }

    const auto bound = global_weight_bound(sys);
    if (!bound.w_max) fail(ErrorCode::PreconditionViolated, "no finite weight bound for y=" + std::to_string(y));
    const double w = 0.99 * *bound.w_max;
    auto reports = exhaustive_search(sys, T, metrics, w);
    for (auto& r : reports) attach_ecm_choice(r, sys);
    const SearchReport& tr = reports[0];
    const SearchReport& ld = reports[1];
    res.performance.add_row({std::to_string(y), cell_of(w), cell_of(tr.f_I), cell_of(*tr.f_EC),
                             cell_of(tr.f_EX), cell_of(ld.f_I), cell_of(*ld.f_EC), cell_of(ld.f_EX),
                             edge_cell(tr.ecm_edge), edge_cell(tr.best_edge),
                             edge_cell(ld.ecm_edge), edge_cell(ld.best_edge)});
  }

  if (!out_dir.empty()) {
    res.structure_predicted.write(out_dir);
    res.structure_computed.write(out_dir);
    res.performance.write(out_dir);
  }
  return res;
}

ErCampaignResult run_er_experiment(const ErCampaignConfig& cfg, const std::string& out_dir) {
  cfg.er.validate();
  if (cfg.k < 1) fail(ErrorCode::InvalidArgument, "top-k needs k >= 1");
  const auto start = std::chrono::steady_clock::now();
  const int T = cfg.T > 0 ? cfg.T : cfg.er.n;
  const std::size_t count = static_cast<std::size_t>(cfg.er.count);

  struct NetworkOutcome {
    std::vector<ErRun> runs;
    std::vector<std::string> skipped;  // "metric@w" keys
    std::vector<std::string> failures;
    int lit_case = 0;
    int lit_tighter = 0;
  };
  std::vector<NetworkOutcome> outcomes(count);

  parallel_for(count, cfg.threads, [&](std::size_t idx) {
    NetworkOutcome& out = outcomes[idx];
    const int net = static_cast<int>(idx);
    try {
      const NetworkSystem sys = generate_er_system(cfg.er, idx);
      if (const auto lit = literature_trace_bound(sys)) {
        out.lit_case = 1;
        const XConstants c = x_constants(sys, 0.0);
        out.lit_tighter = c.trace_hx <= *lit ? 1 : 0;
      }
      const auto bound = global_weight_bound(sys);
      for (double w : cfg.weights) {
        if (bound.w_max && !(std::abs(w) < *bound.w_max)) {
          for (MetricId m : cfg.metrics) out.skipped.push_back(m.name() + "@" + cell_of(w));
          continue;
        }
        SearchOptions opts;
        opts.threads = 1;
        auto reports = exhaustive_search(sys, T, cfg.metrics, w, opts);
        for (std::size_t mi = 0; mi < reports.size(); ++mi) {
          SearchReport& r = reports[mi];
          attach_ecm_choice(r, sys);
          ErRun run;
          run.network = net;
          run.w = w;
          run.metric = r.metric;
          run.f_I = r.f_I;
          run.f_EC = *r.f_EC;
          run.f_EX = r.f_EX;
          const auto kind = r.metric.kind();
          if (kind == MetricId::Kind::Trace || kind == MetricId::Kind::LogDet) {
            try {
              const GlobalEstimate g = global_estimate(sys, T, r.metric, w, cfg.k, &r);
              if (std::isfinite(g.f_g)) run.f_g = g.f_g;
              run.fit_fallback = g.diagnostics.fallback_used;
            } catch (const Error& e) {
              run.estimate_error = std::string(to_string(e.code()));
            }
          }
          out.runs.push_back(std::move(run));
        }
      }
    } catch (const Error& e) {
      out.failures.push_back("network " + std::to_string(net) + ": " + e.what());
    }
  });

  ErCampaignResult res;
  for (auto& o : outcomes) {
    for (auto& r : o.runs) res.runs.push_back(std::move(r));
    for (auto& s : o.skipped) ++res.skipped[s];
    for (auto& f : o.failures) res.failures.push_back(std::move(f));
    res.literature_cases += o.lit_case;
    res.literature_tighter += o.lit_tighter;
  }

  std::map<std::string, std::string> prov{{"seed", std::to_string(cfg.er.seed)},
                                          {"config", config_text(cfg)},
                                          {"threads", std::to_string(resolve_threads(cfg.threads))}};

  res.runs_table.name = "er_runs";
  res.runs_table.columns = {"network", "metric", "w", "f_I", "f_EC", "f_EX", "f_g", "fit_fallback", "estimate_error"};
  for (const auto& r : res.runs)
    res.runs_table.add_row({std::to_string(r.network), r.metric.name(), cell_of(r.w), cell_of(r.f_I),
                            cell_of(r.f_EC), cell_of(r.f_EX), r.f_g ? cell_of(*r.f_g) : "nan",
                            r.fit_fallback ? "1" : "0", r.estimate_error});

  for (MetricId metric : cfg.metrics) {
    ExperimentTable t;
    t.name = "er_summary_" + metric.name();
    t.columns = {"statistic"};
    for (double w : cfg.weights) t.columns.push_back("w=" + cell_of(w));

    std::vector<std::vector<std::string>> rows = {
        {"Avg |f_I|"},   {"%f_XC worst"}, {"%f_XC best"}, {"%f_XC avg"}, {"Avg f_XC"},
        {"%f_CI worst"}, {"%f_CI best"},  {"%f_CI avg"},  {"Avg f_CI"},  {"Avg %|f_EX-f_g|/|f_I|"},
        {"networks"},    {"skipped"},     {"f_g finite"}, {"fit fallback"}};
    for (double w : cfg.weights) {
      double sum_fi = 0, xc_worst = -INFINITY, xc_best = INFINITY, xc_pct = 0, xc_abs = 0;
      double ci_worst = INFINITY, ci_best = -INFINITY, ci_pct = 0, ci_abs = 0, g_pct = 0;
      int cnt = 0, g_cnt = 0, fallback = 0;
      for (const auto& r : res.runs) {
        if (!(r.metric == metric) || r.w != w) continue;
        const double fi = std::abs(r.f_I);
        const double xc = std::abs(r.f_EX - r.f_EC);
        const double ci = std::abs(r.f_EC - r.f_I);
        sum_fi += fi;
        xc_worst = std::max(xc_worst, 100 * xc / fi);
        xc_best = std::min(xc_best, 100 * xc / fi);
        xc_pct += 100 * xc / fi;
        xc_abs += xc;
        ci_worst = std::min(ci_worst, 100 * ci / fi);
        ci_best = std::max(ci_best, 100 * ci / fi);
        ci_pct += 100 * ci / fi;
        ci_abs += ci;
        if (r.f_g) {
          g_pct += 100 * std::abs(r.f_EX - *r.f_g) / fi;
          ++g_cnt;
        }
        fallback += r.fit_fallback ? 1 : 0;
        ++cnt;
      }
      const double nan = std::nan("");
      auto avg = [&](double s, int c) { return c ? s / c : nan; };
      const auto skip_it = res.skipped.find(metric.name() + "@" + cell_of(w));
      const std::vector<double> vals = {avg(sum_fi, cnt), cnt ? xc_worst : nan, cnt ? xc_best : nan,
                                        avg(xc_pct, cnt), avg(xc_abs, cnt), cnt ? ci_worst : nan,
                                        cnt ? ci_best : nan, avg(ci_pct, cnt), avg(ci_abs, cnt),
                                        avg(g_pct, g_cnt), double(cnt),
                                        double(skip_it == res.skipped.end() ? 0 : skip_it->second),
                                        double(g_cnt), double(fallback)};
      for (std::size_t k = 0; k < rows.size(); ++k) rows[k].push_back(cell_of(vals[k]));
    }
    for (auto& row : rows) t.add_row(std::move(row));
    t.provenance = prov;
    res.aggregates.push_back(std::move(t));
  }
  res.runs_table.provenance = prov;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!out_dir.empty()) {
    res.runs_table.write(out_dir);
    for (const auto& t : res.aggregates) t.write(out_dir);
    json summary;
    summary["seed"] = cfg.er.seed;
    summary["config"] = config_text(cfg);
    summary["literature_cases"] = res.literature_cases;
    summary["literature_tighter"] = res.literature_tighter;
    summary["failures"] = res.failures;
    summary["seconds"] = res.seconds;
    write_text_file(out_dir + "/er_campaign.json", summary.dump(2) + "\n");
  }
  return res;
}

}  // namespace ecm
