#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fmquad/survey.hpp"

using fmquad::SurveyAggregate;
using fmquad::SurveyOptions;

namespace {

// mu^2 by trial division of squares, independent of the segmented sieve.
std::vector<std::int64_t> radicands_by_trial(std::uint64_t x, bool by_radicand) {
  std::vector<bool> sq(x + 1, false);
  for (std::uint64_t p = 2; p * p <= x; ++p)
    for (std::uint64_t k = p * p; k <= x; k += p * p) sq[k] = true;
  std::vector<std::int64_t> out;
  for (std::uint64_t m = 1; m <= x; ++m) {
    if (sq[m]) continue;
    const std::uint64_t abs_disc = (m % 4 == 3) ? m : 4 * m;
    if ((by_radicand ? m : abs_disc) <= x) out.push_back(-static_cast<std::int64_t>(m));
  }
  return out;
}

std::string survey_csv(const SurveyOptions& opt, SurveyAggregate* agg = nullptr) {
  std::string text;
  const auto a = fmquad::run_survey(opt, [&](std::string_view s) { text += s; });
  if (agg) *agg = a;
  return text;
}

}  // namespace

TEST(Radicands, SmallBound) {
  EXPECT_EQ(fmquad::squarefree_radicands(20), (std::vector<std::int64_t>{-1, -2, -3, -5, -7, -11, -15, -19}));
  EXPECT_EQ(fmquad::squarefree_radicands(20, true),
            (std::vector<std::int64_t>{-1, -2, -3, -5, -6, -7, -10, -11, -13, -14, -15, -17, -19}));
}

TEST(Radicands, MatchesTrialDivision) {
  for (bool by_rad : {false, true}) {
    for (std::uint64_t x : {1ULL, 2ULL, 3ULL, 4ULL, 100ULL, 9999ULL, 1000000ULL})
      EXPECT_EQ(fmquad::squarefree_radicands(x, by_rad), radicands_by_trial(x, by_rad)) << x << by_rad;
  }
}

TEST(Radicands, ClassicalCount) {
  // Squarefree m <= 10^6 number 607926.
  EXPECT_EQ(fmquad::squarefree_radicands(1000000, true).size(), 607926u);
}

TEST(Survey, ChunkSizeDoesNotMatter) {
  SurveyOptions opt;
  opt.x = 100000;
  opt.chunk_size = 1 << 15;
  const auto ref = fmquad::run_survey(opt);
  for (std::uint64_t chunk : {1ULL, 97ULL, 10000ULL, 1000000ULL}) {
    opt.chunk_size = chunk;
    EXPECT_TRUE(fmquad::run_survey(opt) == ref) << chunk;
  }
}

TEST(Survey, JobsDoNotChangeOutput) {
  SurveyOptions opt;
  opt.x = 100000;
  opt.chunk_size = 1000;
  SurveyAggregate a1, a4;
  const std::string one = survey_csv(opt, &a1);
  opt.jobs = 4;
  const std::string four = survey_csv(opt, &a4);
  EXPECT_EQ(one, four);
  EXPECT_TRUE(a1 == a4);
}

TEST(Survey, CsvRowsFollowRadicandOrder) {
  SurveyOptions opt;
  opt.x = 2000;
  opt.chunk_size = 37;
  opt.jobs = 3;
  const std::string text = survey_csv(opt);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, fmquad::kCsvHeader);
  std::vector<std::int64_t> ds;
  while (std::getline(in, line)) ds.push_back(std::stoll(line.substr(0, line.find(','))));
  EXPECT_EQ(ds, fmquad::squarefree_radicands(2000));
}

TEST(Survey, SmallestBound) {
  SurveyOptions opt;
  opt.x = 3;
  SurveyAggregate agg;
  const std::string text = survey_csv(opt, &agg);
  EXPECT_EQ(agg.total, 1u);
  EXPECT_EQ(text, std::string(fmquad::kCsvHeader) + "\n-3,-3,0,1,1,0,0,0,0,0,0,1,0,1,\n");
}

TEST(Survey, Field1365IsCounted) {
  SurveyOptions opt;
  opt.x = 5460;
  opt.only_n = 4;
  bool seen = false;
  std::mutex mu;
  const auto agg = fmquad::run_survey(opt, {}, [&](const fmquad::FieldRecord& rec) {
    if (rec.d != -1365) return;
    const std::lock_guard lock(mu);
    seen = true;
    EXPECT_TRUE(rec.verdict.conjecture2_decided);
  });
  EXPECT_TRUE(seen);
  EXPECT_GE(agg.fm_n.at(4), 1u);
  EXPECT_EQ(agg.by_n.size(), 1u);
  opt.x = 5459;
  seen = false;
  (void)fmquad::run_survey(opt, {}, [&](const fmquad::FieldRecord& rec) {
    if (rec.d == -1365) seen = true;
  });
  EXPECT_FALSE(seen);
}

TEST(Survey, AggregateInvariants) {
  SurveyOptions opt;
  opt.x = 300000;
  opt.jobs = 4;
  const auto agg = fmquad::run_survey(opt);
  std::uint64_t sum = 0;
  for (const auto& [n, c] : agg.by_n) {
    sum += c;
    std::uint64_t row = 0;
    for (const auto& [r, k] : agg.by_n_r.by_n_r.at(n)) {
      row += k;
      EXPECT_LE(r, n);
    }
    EXPECT_EQ(row, c);
    // Fields of 2-rank n need n + 1 ramified primes, all of them at most x.
    EXPECT_LE(static_cast<double>(n), std::log2(static_cast<double>(opt.x)) + 2);
    const auto& fnd = agg.fm_n_d.at(n);
    EXPECT_EQ(agg.fm_n.count(n) ? agg.fm_n.at(n) : 0u, fnd.count(2) ? fnd.at(2) : 0u) << n;
    std::uint64_t prev = 0;
    for (const auto& [d, k] : fnd) {
      EXPECT_GE(k, prev);
      EXPECT_LE(k, c);
      prev = k;
    }
    EXPECT_EQ(fnd.at(std::max<std::size_t>(n, 2)), c);
  }
  EXPECT_EQ(sum, agg.total);
  EXPECT_EQ(agg.total, fmquad::squarefree_radicands(opt.x).size());
  std::uint64_t prev = 0;
  for (const auto& [i, k] : agg.fm_bracket) {
    EXPECT_GE(k, prev);
    EXPECT_LE(k, agg.total);
    EXPECT_GE(agg.fm_bracket_ceil.at(i), k);
    prev = k;
  }
  std::uint64_t ca = 0;
  for (const auto& [n, row] : agg.case_a_by_n_r.by_n_r)
    for (const auto& [r, k] : row) ca += k;
  EXPECT_EQ(ca, agg.case_a);
}

TEST(Survey, FiltersAgreeWithUnfilteredCounts) {
  SurveyOptions opt;
  opt.x = 100000;
  const auto all = fmquad::run_survey(opt);
  opt.case_a_only = true;
  const auto a = fmquad::run_survey(opt);
  EXPECT_EQ(a.total, all.case_a);
  EXPECT_EQ(a.by_n_r.by_n_r, all.case_a_by_n_r.by_n_r);
  opt.case_a_only = false;
  opt.only_n = 3;
  const auto three = fmquad::run_survey(opt);
  EXPECT_EQ(three.total, all.by_n.at(3));
  EXPECT_EQ(three.fm_n_d.at(3), all.fm_n_d.at(3));
}
