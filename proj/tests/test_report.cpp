#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "fmquad/report.hpp"

using fmquad::Errc;
using fmquad::Error;
using fmquad::Json;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fmquad_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Json, IntegerWidth) {
  EXPECT_TRUE(fmquad::integer_json(fmquad::i128(-1365)).is_number_integer());
  const Json big = fmquad::integer_json(fmquad::parse_i128("-100643039816497665303035"));
  ASSERT_TRUE(big.is_string());
  EXPECT_EQ(big.get<std::string>(), "-100643039816497665303035");
}

TEST(Json, FormReport) {
  const fmquad::BilinearForm f(fmquad::BitMatrix::from_strings({"1100", "0101", "1111", "1100"}));
  const Json j = fmquad::form_report(f);
  EXPECT_EQ(j["n"], 4);
  EXPECT_EQ(j["rank"], 3);
  EXPECT_EQ(j["symmetric"], false);
  EXPECT_EQ(j["nu_exact"], 2);
  EXPECT_LE(j["nu_lower"].get<int>(), 2);
  EXPECT_GE(j["nu_upper"].get<int>(), 2);
  const Json big = fmquad::form_report(fmquad::BilinearForm::zero(30), 20);
  EXPECT_FALSE(big.contains("nu_exact"));
  EXPECT_EQ(big["nu_lower"], 30);
}

TEST(Json, FieldReport) {
  const auto rec = fmquad::build_field(-1365);
  const Json j = fmquad::field_report(rec, {-3, -5, -7, -13});
  EXPECT_EQ(j["disc"], -5460);
  EXPECT_EQ(j["n"], 4);
  EXPECT_EQ(j["gram"].size(), 4u);
  EXPECT_EQ(j["nu"]["exact"], 2);
  EXPECT_EQ(j["verdict"]["max_uniform_dim"], 2);
  EXPECT_EQ(j["user_basis"]["gram"], Json::parse("[[1,1,0,0],[0,1,0,1],[1,1,1,1],[1,1,0,0]]"));
  EXPECT_FALSE(fmquad::field_report(rec).contains("user_basis"));
  const Json k = fmquad::field_report(fmquad::build_field(fmquad::parse_i128("-100643039816497665303035")));
  EXPECT_TRUE(k["d"].is_string());
}

TEST(Json, ClassGroupReport) {
  const Json j = fmquad::classgroup_report(-5460);
  EXPECT_EQ(j["two_rank"], 4);
  EXPECT_EQ(j["four_rank"], 0);
}

TEST(Json, DensityBounds) {
  const Json j = fmquad::density_bounds_report();
  EXPECT_EQ(j["fm_bracket"].size(), 3u);
  EXPECT_EQ(j["fm_n_d"].size(), 9u);
  EXPECT_NEAR(j["fm_bracket"][1]["bound"].get<double>(), 0.994714, 1e-6);
}

TEST(Emit, WritesCsvAndAggregate) {
  const fs::path dir = scratch("emit");
  fmquad::SurveyOptions opt;
  opt.x = 20000;
  opt.jobs = 2;
  const auto agg = fmquad::emit_survey(opt, dir / "nested");
  const std::string csv = slurp(dir / "nested" / "fields.csv");
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, agg.total + 1);
  const Json j = Json::parse(slurp(dir / "nested" / "aggregate.json"));
  EXPECT_EQ(j["total"], agg.total);
  EXPECT_EQ(j["x_bound"], 20000);
  EXPECT_TRUE(j["comparisons"].contains("fm_bracket"));
  EXPECT_TRUE(j["comparisons"].contains("four_rank_density"));
  EXPECT_FALSE(j["comparisons"]["fm_bracket"]["1"].contains("empirical_ceil_threshold"));
  fs::remove_all(dir);
}

TEST(Emit, UnwritableDirectory) {
  const fs::path dir = scratch("blocked");
  { std::ofstream(dir) << "file, not a directory"; }
  fmquad::SurveyOptions opt;
  opt.x = 100;
  try {
    (void)fmquad::emit_survey(opt, dir / "out");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
  fs::remove_all(dir);
}
