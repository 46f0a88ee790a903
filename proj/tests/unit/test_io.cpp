#include "ecm/error.hpp"
#include "ecm/io.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <random>

using namespace ecm;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;  // unreachable in passing tests
}

}  // namespace

TEST(Csv, RoundTripIsLossless) {
  std::mt19937_64 rng(5);
  const Matrix M = oracle::random_matrix(rng, 4, 3, -10, 10);
  EXPECT_EQ(parse_csv_matrix(format_csv_matrix(M)), M);
}

TEST(Csv, ToleratesWhitespaceAndBlankLines) {
  const Matrix M = parse_csv_matrix(" 1, 2\r\n\n3 ,4\n");
  Matrix expected(2, 2);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(M, expected);
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_EQ(code_of([] { parse_csv_matrix("1,2\n3\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_csv_matrix("1,2,\n3,4,\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_csv_matrix("1,x\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_csv_matrix(""); }), ErrorCode::ParseError);
}

TEST(SystemJson, RoundTrip) {
  std::mt19937_64 rng(6);
  const auto sys = build_system(oracle::random_matrix(rng, 3, 3, -1, 1), oracle::random_matrix(rng, 3, 2, -1, 1));
  const auto back = parse_system_json(system_to_json(sys));
  EXPECT_EQ(back.A(), sys.A());
  EXPECT_EQ(back.B(), sys.B());
}

TEST(SystemJson, RejectsInconsistentDocuments) {
  EXPECT_EQ(code_of([] { parse_system_json(R"({"A": [[0,1],[0]], "B": [[1],[0]]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_system_json(R"({"n": 3, "A": [[0,1],[0,0]], "B": [[1],[0]]})"); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { parse_system_json(R"({"A": [[0,1],[0,0]]})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_system_json("{not json"); }), ErrorCode::ParseError);
}

TEST(ReadSystem, CsvMeansIdentityInputs) {
  const auto dir = std::filesystem::temp_directory_path() / "ecm_io_test";
  write_csv_matrix((dir / "a.csv").string(), Matrix::Constant(3, 3, 0.1));
  const auto sys = read_system((dir / "a.csv").string());
  EXPECT_EQ(sys.B(), Matrix::Identity(3, 3));
  write_text_file((dir / "s.json").string(), system_to_json(sys));
  EXPECT_EQ(read_system((dir / "s.json").string()).A(), sys.A());
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_system((dir / "missing.csv").string()), Error);
}

TEST(StemBudJson, RoundTrip) {
  StemBudSpec spec;
  spec.n = 4;
  spec.y = 2;
  spec.stem_weights = {0.5, 0.25, 0.75};
  spec.back_weight = 0.3;
  const auto doc = parse_stembud_json(stembud_to_json(spec, {1, 3}));
  EXPECT_EQ(doc.spec.n, 4);
  EXPECT_EQ(doc.spec.y, 2);
  EXPECT_EQ(doc.spec.stem_weights, spec.stem_weights);
  EXPECT_EQ(doc.spec.back_weight, 0.3);
  EXPECT_EQ(doc.inputs, (std::vector<int>{1, 3}));
  EXPECT_THROW(parse_stembud_json(R"({"n": 3, "y": 5, "stem_weights": [1, 1]})"), Error);
}

TEST(Reports, LabelsAreOneBased) {
  const int in[] = {1};
  const auto sys = build_stembud(StemBudSpec::equal_weights(3, 0, 0.5), in);
  const auto ecm = compute_ecm(sys, 3, MetricId::trace());
  const auto j = nlohmann::json::parse(ecm_report_to_json(ecm));
  EXPECT_EQ(j["inputs"], nlohmann::json::array({1}));
  EXPECT_EQ(j["ranked_edges"].size(), 6u);
  EXPECT_GE(j["ranked_edges"][0]["from"].get<int>(), 1);

  SparsityPattern pat;
  pat.positions = {{0, 1}};
  EXPECT_EQ(sparsity_to_csv(pat), "row,col\n1,2\n");

  const auto r = exhaustive_search(sys, 3, MetricId::trace(), 0.25);
  const auto csv = search_table_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "edge_from,edge_to,f_value,stable_flag");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  const auto summary = nlohmann::json::parse(search_summary_to_json(r));
  EXPECT_EQ(summary["candidates"], 6);
  EXPECT_DOUBLE_EQ(summary["f_EX"].get<double>(), r.f_EX);
}

TEST(Reports, BoundsDocument) {
  Matrix A = Matrix::Zero(2, 2);
  A(1, 0) = 0.5;
  const auto sys = build_system(A, Matrix::Identity(2, 2));
  const auto rep = trace_bounds(sys, Edge{1, 0}, 0.5);
  const auto j = nlohmann::json::parse(bounds_report_to_json(rep));
  EXPECT_EQ(j["edge"]["from"], 2);
  EXPECT_EQ(j["edge"]["to"], 1);
  EXPECT_DOUBLE_EQ(j["modified_bound"].get<double>(), rep.modified_bound);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(3.0), "3");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}
