#pragma once

#include "ecm/bounds.hpp"
#include "ecm/centrality.hpp"
#include "ecm/search.hpp"
#include "ecm/stembud.hpp"

#include <string>
#include <vector>

namespace ecm {

// Matrices: plain CSV, one row per line, no header. Ragged rows are rejected.
Matrix parse_csv_matrix(const std::string& text);
Matrix read_csv_matrix(const std::string& path);
std::string format_csv_matrix(const Matrix& M);
void write_csv_matrix(const std::string& path, const Matrix& M);

// Systems: {"n", "m", "A", "B"} with row-major nested arrays.
NetworkSystem parse_system_json(const std::string& text);
std::string system_to_json(const NetworkSystem& sys);
/// .json -> system document; anything else -> CSV adjacency with B = I.
NetworkSystem read_system(const std::string& path);

// Stem-bud specs: {"n", "y", "stem_weights", "a_yn", "inputs"}; 1-based inputs.
struct StemBudDocument {
  StemBudSpec spec;
  std::vector<int> inputs;
};
StemBudDocument parse_stembud_json(const std::string& text);
std::string stembud_to_json(const StemBudSpec& spec, const std::vector<int>& inputs);

// Reports. Node labels in all documents are 1-based.
std::string ecm_report_to_json(const EcmReport& report);
std::string sparsity_to_csv(const SparsityPattern& pattern);
std::string bounds_report_to_json(const BoundsReport& report);
std::string search_table_to_csv(const SearchReport& report);
std::string search_summary_to_json(const SearchReport& report);

std::string read_text_file(const std::string& path);
/// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace ecm
