#include <algorithm>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "fmquad/classgroup.hpp"
#include "fmquad/quadfield.hpp"

using fmquad::BitMatrix;
using fmquad::Errc;
using fmquad::Error;
using fmquad::FieldRecord;
using fmquad::i128;
using fmquad::u128;

namespace {

int euler_legendre(std::int64_t a, std::int64_t p) {
  std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  std::int64_t acc = 1, base = r, e = (p - 1) / 2;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

std::int64_t star(std::int64_t p) { return p % 4 == 1 ? p : -p; }

// Gram from the defining symbols, computed with Euler's criterion.
BitMatrix reference_gram(std::int64_t d, const std::vector<std::int64_t>& basis_primes) {
  const std::size_t n = basis_primes.size();
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t pi = basis_primes[i];
      const int s = i == j ? euler_legendre(d / star(pi), pi) : euler_legendre(star(pi), basis_primes[j]);
      if (s == -1) m.set(i, j);
    }
  return m;
}

bool squarefree(std::int64_t m) {
  for (std::int64_t p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  return true;
}

const std::int64_t kK1 = -(5LL * 29 * 109 * 281 * 349 * 47);

}  // namespace

TEST(BuildField, MinusThirteenSixtyFive) {
  const FieldRecord rec = fmquad::build_field(-1365);
  EXPECT_EQ(rec.disc, -5460);
  EXPECT_EQ(rec.n, 4u);
  EXPECT_EQ(rec.p0_star, -4);
  EXPECT_FALSE(rec.case_a);
  EXPECT_EQ(rec.basis, (std::vector<i128>{-3, 5, -7, 13}));
  EXPECT_EQ(rec.redei_primes, (std::vector<u128>{3, 5, 7, 13, 2}));
  EXPECT_EQ(rec.gram.gram(), reference_gram(-1365, {3, 5, 7, 13}));
  EXPECT_EQ(rec.rank_gram, 3u);
  EXPECT_EQ(rec.rank_redei, 4u);
  EXPECT_EQ(rec.four_rank, 0u);
  ASSERT_TRUE(rec.nu.exact.has_value());
  EXPECT_EQ(*rec.nu.exact, 2u);
  EXPECT_EQ(rec.verdict.max_uniform_dim, 2u);
  EXPECT_TRUE(rec.verdict.conjecture2_decided);
  EXPECT_EQ(rec.verdict.corollary_tags, (std::vector<std::string>{"ii"}));
  EXPECT_FALSE(rec.symmetric);
}

TEST(BuildField, SmallFieldsWithoutBasis) {
  for (i128 d : {-1, -2, -3, -7, -11, -19}) {
    const FieldRecord rec = fmquad::build_field(d);
    EXPECT_EQ(rec.n, 0u);
    EXPECT_TRUE(rec.basis.empty());
    EXPECT_EQ(rec.four_rank, 0u);
    EXPECT_EQ(rec.verdict.max_uniform_dim, 0u);
    EXPECT_TRUE(rec.verdict.conjecture2_decided);
  }
  EXPECT_EQ(fmquad::build_field(-1).p0_star, -4);
  EXPECT_EQ(fmquad::build_field(-2).p0_star, -8);
  EXPECT_EQ(fmquad::build_field(-6).p0_star, 8);
  EXPECT_EQ(fmquad::build_field(-10).p0_star, -8);
  EXPECT_EQ(fmquad::build_field(-7).disc, -7);
  EXPECT_EQ(fmquad::build_field(-1).disc, -4);
}

TEST(BuildField, MinusTwentyOne) {
  // disc -84 = (-3)(-7)(-4): ramified 2, 3, 7, so n = 2 and the basis is -3, -7.
  const FieldRecord rec = fmquad::build_field(-21);
  EXPECT_EQ(rec.disc, -84);
  EXPECT_EQ(rec.n, 2u);
  EXPECT_EQ(rec.p0_star, -4);
  EXPECT_EQ(rec.basis, (std::vector<i128>{-3, -7}));
  EXPECT_EQ(rec.gram.gram(), reference_gram(-21, {3, 7}));
}

TEST(BuildField, CaseADropsLargestPrimeThreeModFour) {
  // -3 * 5 * 7 * 11 = -1155 = 1 mod 4; 11 is the largest prime = 3 mod 4.
  const FieldRecord rec = fmquad::build_field(-1155);
  EXPECT_TRUE(rec.case_a);
  EXPECT_EQ(rec.p0_star, 1);
  EXPECT_EQ(rec.n, 3u);
  EXPECT_EQ(rec.redei_primes, (std::vector<u128>{3, 5, 7, 11}));
  EXPECT_EQ(rec.basis, (std::vector<i128>{-3, 5, -7}));
  EXPECT_EQ(rec.gram.gram(), reference_gram(-1155, {3, 5, 7}));
}

TEST(BuildField, IdentityGramFamily) {
  const FieldRecord rec = fmquad::build_field(kK1);
  EXPECT_EQ(rec.n, 5u);
  EXPECT_EQ(rec.gram.gram(), BitMatrix::identity(5));
  EXPECT_EQ(*rec.nu.exact, 2u);
  EXPECT_TRUE(rec.verdict.conjecture2_decided);
  EXPECT_TRUE(rec.symmetric);
  EXPECT_EQ(rec.verdict.corollary_tags, (std::vector<std::string>{"i"}));
}

TEST(BuildField, NineRamifiedPrimes) {
  const FieldRecord rec = fmquad::build_field(fmquad::parse_i128("-100643039816497665303035"));
  EXPECT_EQ(rec.n, 8u);
  EXPECT_LE(rec.verdict.max_uniform_dim, 4u);
}

TEST(BuildField, Errors) {
  try {
    (void)fmquad::build_field(5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNegative);
  }
  try {
    (void)fmquad::build_field(-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotSquarefree);
  }
}

TEST(BuildField, GramMatchesDefinitionForAllSmallRadicands) {
  for (std::int64_t m = 1; m <= 3000; ++m) {
    if (!squarefree(m)) continue;
    const FieldRecord rec = fmquad::build_field(-m);
    std::vector<std::int64_t> bp;
    for (std::size_t i = 0; i < rec.n; ++i) bp.push_back(static_cast<std::int64_t>(rec.redei_primes[i]));
    EXPECT_EQ(rec.gram.gram(), reference_gram(-m, bp)) << -m;
  }
}

TEST(BuildField, RedeiAgreesWithClassGroupOracle) {
  for (std::int64_t m = 1; m <= 3000; ++m) {
    if (!squarefree(m)) continue;
    const FieldRecord rec = fmquad::build_field(-m);
    const auto gs = fmquad::group_structure(static_cast<std::int64_t>(rec.disc));
    EXPECT_EQ(rec.n, gs.two_rank()) << -m;
    EXPECT_EQ(rec.four_rank, gs.four_rank()) << -m;
  }
}

TEST(BuildField, StructuralInvariants) {
  for (std::int64_t m = 1; m <= 20000; ++m) {
    if (!squarefree(m)) continue;
    const FieldRecord rec = fmquad::build_field(-m);
    EXPECT_LE(rec.rank_gram, rec.rank_redei);
    EXPECT_LE(rec.rank_redei, rec.rank_gram + 1);
    if (rec.case_a) {
      EXPECT_EQ(rec.rank_gram, rec.rank_redei) << -m;
    }
    EXPECT_TRUE(rec.redei.row_sum().none()) << -m;
    EXPECT_EQ(rec.symmetric, rec.gram.gram().is_symmetric()) << -m;
    EXPECT_LE(rec.nu.lower, *rec.nu.exact);
    EXPECT_LE(*rec.nu.exact, rec.nu.upper);
  }
}

TEST(CsPair, FirstOrderedPair) {
  // (-3/5) = -1 already.
  const auto pr = fmquad::build_field(-1365).cs_pair;
  ASSERT_TRUE(pr.has_value());
  EXPECT_EQ(pr->first, 3u);
  EXPECT_EQ(pr->second, 5u);
  // 5 and 29 are squares of each other; no pair.
  EXPECT_FALSE(fmquad::build_field(-145).cs_pair.has_value());
}

TEST(UserBasis, NegatedPrimes1365) {
  const FieldRecord rec = fmquad::build_field(-1365);
  const auto g = fmquad::gram_in_basis(rec, {-3, -5, -7, -13});
  EXPECT_EQ(g.gram(), BitMatrix::from_strings({"1100", "0101", "1111", "1100"}));
  EXPECT_EQ(fmquad::rank(g.gram()), 3u);
  EXPECT_EQ(fmquad::nu_exact(g), 2u);
}

TEST(UserBasis, StarBasisIsIdentityChange) {
  const FieldRecord rec = fmquad::build_field(kK1);
  EXPECT_EQ(fmquad::gram_in_basis(rec, rec.basis).gram(), rec.gram.gram());
}

TEST(UserBasis, Errors) {
  const FieldRecord rec = fmquad::build_field(-1365);
  try {
    (void)fmquad::gram_in_basis(rec, {-3, -5, -7, -11});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BasisNotInRadical);
  }
  try {
    (void)fmquad::gram_in_basis(rec, {-3, -5, -7});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SingularBasis);
  }
  try {
    // 21 = (-3)(-7) is dependent on the first and third elements.
    (void)fmquad::gram_in_basis(rec, {-3, -5, -7, 21});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SingularBasis);
  }
  try {
    (void)fmquad::gram_in_basis(rec, {-3, -5, -7, 18});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotSquarefree);
  }
}

TEST(Verdict, CorollaryTags) {
  for (std::int64_t m = 1; m <= 20000; ++m) {
    if (!squarefree(m)) continue;
    const FieldRecord rec = fmquad::build_field(-m);
    const auto& tags = rec.verdict.corollary_tags;
    auto has = [&](const char* t) { return std::find(tags.begin(), tags.end(), t) != tags.end(); };
    if (has("iii")) {
      EXPECT_TRUE(rec.n == 3 && rec.rank_gram > 0);
    }
    if (has("ii")) {
      EXPECT_TRUE(rec.n == 4 && rec.rank_gram >= 3);
    }
    // Each tagged case must indeed be decided.
    if (!tags.empty()) {
      EXPECT_TRUE(rec.verdict.conjecture2_decided) << -m;
    }
    EXPECT_EQ(rec.verdict.conjecture2_decided, rec.verdict.max_uniform_dim <= 2);
  }
}
