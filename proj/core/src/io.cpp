#include "ecm/io.hpp"

#include "ecm/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ecm {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorCode::ParseError, "not a number: '" + t + "'");
  return v;
}

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, std::string(name) + " must be a non-empty array");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) fail(ErrorCode::ParseError, std::string(name) + " rows must be non-empty arrays");
  Matrix M(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail(ErrorCode::ParseError, std::string(name) + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) fail(ErrorCode::ParseError, std::string(name) + " has a non-numeric entry");
      M(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
  }
  return M;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

json edge_json(Edge e) { return {{"from", e.from + 1}, {"to", e.to + 1}}; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Matrix parse_csv_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell));
    if (!line.empty() && line.back() == ',') fail(ErrorCode::ParseError, "trailing comma");
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorCode::ParseError, "ragged CSV row " + std::to_string(rows.size() + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::ParseError, "empty matrix");
  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      M(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return M;
}

Matrix read_csv_matrix(const std::string& path) { return parse_csv_matrix(read_text_file(path)); }

std::string format_csv_matrix(const Matrix& M) {
  std::string out;
  for (Index r = 0; r < M.rows(); ++r) {
    for (Index c = 0; c < M.cols(); ++c) {
      if (c) out += ',';
      out += format_double(M(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_csv_matrix(const std::string& path, const Matrix& M) {
  write_text_file(path, format_csv_matrix(M));
}

NetworkSystem parse_system_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("A") || !j.contains("B"))
    fail(ErrorCode::ParseError, "system document needs fields A and B");
  Matrix A = matrix_from_json(j["A"], "A");
  Matrix B = matrix_from_json(j["B"], "B");
  if (j.contains("n") && j["n"].get<Index>() != A.rows())
    fail(ErrorCode::DimensionMismatch, "field n disagrees with A");
  if (j.contains("m") && j["m"].get<Index>() != B.cols())
    fail(ErrorCode::DimensionMismatch, "field m disagrees with B");
  return build_system(std::move(A), std::move(B));
}

std::string system_to_json(const NetworkSystem& sys) {
  json j;
  j["n"] = sys.n();
  j["m"] = sys.m();
  j["A"] = matrix_to_json(sys.A());
  j["B"] = matrix_to_json(sys.B());
  return j.dump(2) + "\n";
}

NetworkSystem read_system(const std::string& path) {
  const std::string text = read_text_file(path);
  if (std::filesystem::path(path).extension() == ".json") return parse_system_json(text);
  Matrix A = parse_csv_matrix(text);
  const Index n = A.rows();
  return build_system(std::move(A), Matrix::Identity(n, n));
}

StemBudDocument parse_stembud_json(const std::string& text) {
  const json j = parse_json(text);
  StemBudDocument doc;
  try {
    doc.spec.n = j.at("n").get<int>();
    doc.spec.y = j.at("y").get<int>();
    doc.spec.stem_weights = j.at("stem_weights").get<std::vector<double>>();
    doc.spec.back_weight = j.value("a_yn", 0.0);
    doc.inputs = j.value("inputs", std::vector<int>{1});
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  doc.spec.validate();
  return doc;
}

std::string stembud_to_json(const StemBudSpec& spec, const std::vector<int>& inputs) {
  json j;
  j["n"] = spec.n;
  j["y"] = spec.y;
  j["stem_weights"] = spec.stem_weights;
  j["a_yn"] = spec.back_weight;
  j["inputs"] = inputs;
  return j.dump(2) + "\n";
}

std::string ecm_report_to_json(const EcmReport& report) {
  json j;
  j["metric"] = report.metric.name();
  j["T"] = report.theta.T;
  json inputs = json::array();
  for (Index k : report.inputs) inputs.push_back(k + 1);
  j["inputs"] = inputs;
  j["theta"] = matrix_to_json(report.theta.total);
  json ranked = json::array();
  for (const auto& r : report.ranked_edges)
    ranked.push_back({{"from", r.edge.from + 1}, {"to", r.edge.to + 1}, {"value", r.value}});
  j["ranked_edges"] = ranked;
  return j.dump(2) + "\n";
}

std::string sparsity_to_csv(const SparsityPattern& pattern) {
  std::string out = "row,col\n";
  for (const auto& [r, c] : pattern.positions)
    out += std::to_string(r + 1) + "," + std::to_string(c + 1) + "\n";
  return out;
}

std::string bounds_report_to_json(const BoundsReport& r) {
  json j;
  j["metric"] = r.metric.name();
  j["edge"] = edge_json(r.edge);
  j["w"] = r.w;
  j["unmodified_bound"] = number_or_null(r.unmodified_bound);
  j["modified_bound"] = number_or_null(r.modified_bound);
  const auto& c = r.constants;
  j["constants"] = {{"alpha", c.alpha},          {"beta", c.beta},
                    {"gamma", c.gamma},          {"gamma_bar", c.gamma_bar},
                    {"trace_hx", c.trace_hx},    {"max_off_diagonal", c.max_off_diagonal},
                    {"X", matrix_to_json(c.X)}};
  if (r.tau) j["tau"] = *r.tau;
  if (r.sigma) j["sigma"] = *r.sigma;
  if (r.sigma_modified) j["sigma_modified"] = *r.sigma_modified;
  j["literature_bound"] = r.literature_bound ? json(*r.literature_bound) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string search_table_to_csv(const SearchReport& report) {
  std::string out = "edge_from,edge_to,f_value,stable_flag\n";
  for (const auto& e : report.table) {
    out += std::to_string(e.edge.from + 1) + "," + std::to_string(e.edge.to + 1) + ",";
    out += std::isfinite(e.value) ? format_double(e.value) : std::string("nan");
    out += e.stable ? ",1\n" : ",0\n";
  }
  return out;
}

std::string search_summary_to_json(const SearchReport& r) {
  json j;
  j["metric"] = r.metric.name();
  j["T"] = r.T;
  j["w"] = r.w;
  j["f_I"] = number_or_null(r.f_I);
  j["f_EX"] = r.best_edge ? number_or_null(r.f_EX) : json(nullptr);
  j["best_edge"] = r.best_edge ? edge_json(*r.best_edge) : json(nullptr);
  j["ecm_edge"] = r.ecm_edge ? edge_json(*r.ecm_edge) : json(nullptr);
  j["f_EC"] = r.f_EC ? number_or_null(*r.f_EC) : json(nullptr);
  j["f_g"] = r.f_g ? number_or_null(*r.f_g) : json(nullptr);
  j["candidates"] = r.table.size();
  std::size_t unstable = 0, failed = 0;
  for (const auto& e : r.table) {
    unstable += e.stable ? 0 : 1;
    failed += e.error ? 1 : 0;
  }
  j["unstable_candidates"] = unstable;
  j["failed_candidates"] = failed;
  j["seconds"] = r.seconds;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace ecm
