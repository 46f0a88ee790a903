#pragma once

#include "ecm/centrality.hpp"
#include "ecm/er.hpp"
#include "ecm/metric.hpp"
#include "ecm/stembud.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecm {

/// Named table of text cells with provenance. Numeric cells hold the shortest
/// round-trip decimal form, so CSV/JSON serialization is lossless.
struct ExperimentTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> provenance;

  void add_row(std::vector<std::string> cells);
  const std::string& cell(std::size_t row, const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;

  /// One-line header, then rows.
  std::string to_csv() const;
  std::string to_json() const;
  static ExperimentTable from_json(const std::string& text);
  static ExperimentTable from_csv(const std::string& name, const std::string& text);

  /// Writes <dir>/<name>.csv and <dir>/<name>.json (the latter with provenance).
  void write(const std::string& dir) const;

  friend bool operator==(const ExperimentTable&, const ExperimentTable&) = default;
};

std::string cell_of(double v);
std::string cell_of(const std::vector<int>& set);  // "1 4", "" for the empty set

/// The 6-node stem-bud weights used throughout the stem-bud experiment.
StemBudSpec stembud6_spec(int y);

struct Stembud6Result {
  ExperimentTable structure_predicted;  // y, L_b, k_sub, N_sub, k_sup, N_sup
  ExperimentTable structure_computed;   // y, metric, N_sub, N_sup, main_diagonal, contained
  ExperimentTable performance;          // y, w, trace_*, logdet_* and chosen edges
  std::vector<SparsityPattern> patterns;  // trace ECM, y = 0..5
};

/// Deterministic. Writes tables and sparsity_y<y>.csv into out_dir when non-empty.
Stembud6Result run_stembud6_experiment(const std::string& out_dir = "");

struct ErCampaignConfig {
  ErConfig er;
  std::vector<double> weights{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
  std::vector<MetricId> metrics{MetricId::trace(), MetricId::log_det()};
  int k = 30;
  /// Horizon; <= 0 means T = n.
  int T = 0;
  /// Networks processed concurrently; <= 0 uses default_thread_count().
  int threads = 0;
};

struct ErRun {
  int network = 0;
  double w = 0.0;
  MetricId metric = MetricId::trace();
  double f_I = 0.0;
  double f_EC = 0.0;
  double f_EX = 0.0;
  std::optional<double> f_g;
  bool fit_fallback = false;
  std::string estimate_error;
};

struct ErCampaignResult {
  std::vector<ErRun> runs;
  /// (metric name, w) -> networks skipped because w >= w_max.
  std::map<std::string, int> skipped;
  std::vector<std::string> failures;
  int literature_cases = 0;
  int literature_tighter = 0;
  ExperimentTable runs_table;
  /// One aggregate table per metric, in config order.
  std::vector<ExperimentTable> aggregates;
  double seconds = 0.0;
};

/// Seeded campaign over an ER ensemble. Writes tables into out_dir when non-empty.
ErCampaignResult run_er_experiment(const ErCampaignConfig& cfg, const std::string& out_dir = "");

}  // namespace ecm
