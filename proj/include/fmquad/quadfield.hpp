#pragma once

// Invariants of an imaginary quadratic field K = Q(sqrt(d)), d < 0 squarefree:
// ramification, the signed-prime basis of the Kummer radical V of the maximal
// unramified 2-elementary extension, the Gram matrix of B_K on V, the Redei
// matrix, the 4-rank of Cl_K, and the resulting bound on uniform quotients of
// the unramified 2-tower group.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmquad/arith.hpp"
#include "fmquad/error.hpp"
#include "fmquad/forms.hpp"
#include "fmquad/gf2.hpp"

namespace fmquad {

struct Verdict {
  std::size_t max_uniform_dim = 0;
  bool conjecture2_decided = false;
  std::vector<std::string> corollary_tags;  // subset of {"i", "ii", "iii"}
};

struct FieldRecord {
  i128 d = 0;
  i128 disc = 0;
  std::vector<u128> odd_ramified;  // increasing
  int p0_star = 1;                 // 1, -4, 8 or -8
  std::size_t n = 0;               // 2-rank of Cl_K

  // Redei ordering of the ramified primes: basis primes first, then the odd
  // prime left out of the basis (2 unramified) or 2 (2 ramified).
  std::vector<u128> redei_primes;
  std::vector<i128> basis;  // p* for the first n entries of redei_primes

  BilinearForm gram;  // n x n
  BitMatrix redei;    // (n+1) x (n+1), empty when d has no ramified primes
  std::size_t rank_gram = 0;
  std::size_t rank_redei = 0;
  std::size_t four_rank = 0;

  NuBounds nu;
  bool symmetric = false;
  bool case_a = false;
  std::optional<std::pair<u128, u128>> cs_pair;
  Verdict verdict;

  [[nodiscard]] bool nu_is_exact() const { return nu.exact.has_value(); }
};

namespace detail {

// Additive encoding of a multiplicative symbol: +1 -> 0, -1 -> 1.
inline bool additive(int symbol) { return symbol == -1; }

inline i128 product(const std::vector<i128>& xs) {
  i128 p = 1;
  for (i128 x : xs) p *= x;
  return p;
}

// Symbol (a / q) for q in the ramified set: Legendre for odd q, Kronecker (./2) for q = 2.
inline int ramified_symbol(i128 a, u128 q) { return q == 2 ? kronecker(a, 2) : jacobi(a, q); }

}  // namespace detail

/// Gram matrix of B_K in the star basis: entry (i, j) is (p_i* / p_j) for
/// i != j and (d / p_i* / p_i) on the diagonal, additively encoded.
inline BilinearForm gram_matrix(const FieldRecord& rec) {
  const std::size_t n = rec.basis.size();
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const u128 pi = rec.redei_primes[i];
    for (std::size_t j = 0; j < n; ++j) {
      const int s = (i == j) ? detail::jacobi(rec.d / rec.basis[i], pi)
                             : detail::jacobi(rec.basis[i], rec.redei_primes[j]);
      if (detail::additive(s)) m.set(i, j);
    }
  }
  return BilinearForm(std::move(m));
}

/// Redei matrix over all n+1 ramified primes. Entries at q = 2 use the
/// Kronecker symbol (./2); the diagonal at 2 uses disc / p0*.
inline BitMatrix redei_matrix(const FieldRecord& rec) {
  const std::size_t size = rec.redei_primes.size();
  BitMatrix m(size, size);
  auto star = [&](std::size_t i) -> i128 {
    const u128 q = rec.redei_primes[i];
    return q == 2 ? i128(rec.p0_star) : detail::p_star_unchecked(q);
  };
  for (std::size_t i = 0; i < size; ++i) {
    const u128 qi = rec.redei_primes[i];
    for (std::size_t j = 0; j < size; ++j) {
      int s = 0;
      if (i != j) {
        s = detail::ramified_symbol(star(i), rec.redei_primes[j]);
      } else if (qi == 2) {
        s = kronecker(rec.disc / rec.p0_star, 2);
      } else {
        s = detail::jacobi(rec.d / star(i), qi);
      }
      if (detail::additive(s)) m.set(i, j);
    }
  }
  return m;
}

/// R_{K,4} = n - rk(M'_K).
inline std::size_t four_rank(const FieldRecord& rec) { return rec.n - rank(rec.redei); }

/// B_K is symmetric iff at most one prime p = 3 mod 4 divides d.
inline bool is_symmetric_field(const FieldRecord& rec) {
  return std::count_if(rec.odd_ramified.begin(), rec.odd_ramified.end(), [](u128 p) { return (p & 3) == 3; }) <= 1;
}

/// 2 unramified, i.e. d = 1 mod 4.
inline bool is_case_a(const FieldRecord& rec) { return rec.p0_star == 1; }

/// First ordered pair of distinct odd ramified primes with (p*/q) = -1.
inline std::optional<std::pair<u128, u128>> cs_pair(const FieldRecord& rec) {
  for (u128 p : rec.odd_ramified)
    for (u128 q : rec.odd_ramified)
      if (p != q && detail::jacobi(detail::p_star_unchecked(p), q) == -1) return std::make_pair(p, q);
  return std::nullopt;
}

/// No uniform quotient has dimension above nu(K); FAb forces dimension >= 3,
/// so nu(K) <= 2 settles the question for K.
inline Verdict fm_verdict(const FieldRecord& rec) {
  Verdict v;
  std::size_t bound = std::min(rec.nu.upper, (rec.n + 1 + rec.four_rank) / 2);
  if (rec.nu.exact) bound = std::min(bound, *rec.nu.exact);
  v.max_uniform_dim = bound;
  v.conjecture2_decided = bound <= 2;
  if (rec.n == 5 && rec.rank_gram == 5) v.corollary_tags.emplace_back("i");
  if (rec.n == 4 && rec.rank_gram >= 3) v.corollary_tags.emplace_back("ii");
  if (rec.n == 3 && rec.rank_gram > 0) v.corollary_tags.emplace_back("iii");
  return v;
}

/// Builds the record from d and the prime factorization of |d|.
inline FieldRecord build_field(i128 d, const Factorization& fac, std::size_t max_exact = kDefaultMaxExactDim) {
  if (d >= 0) throw Error(Errc::NotNegative, "radicand must be negative, got " + to_string(d));
  if (!fac.squarefree()) throw Error(Errc::NotSquarefree, to_string(d) + " is not squarefree");

  FieldRecord rec;
  rec.d = d;
  const auto d_mod4 = static_cast<unsigned>(detail::mod_nonneg(d, 4));
  rec.disc = d_mod4 == 1 ? d : 4 * d;
  for (const auto& f : fac.factors)
    if (f.prime != 2) rec.odd_ramified.push_back(f.prime);
  std::vector<i128> stars;
  stars.reserve(rec.odd_ramified.size());
  for (u128 p : rec.odd_ramified) stars.push_back(detail::p_star_unchecked(p));
  rec.p0_star = d_mod4 == 1 ? 1 : static_cast<int>(rec.disc / detail::product(stars));

  rec.case_a = is_case_a(rec);
  const std::size_t ramified = rec.odd_ramified.size() + (rec.case_a ? 0 : 1);
  rec.n = ramified - 1;

  if (rec.case_a) {
    // Leave out the largest prime = 3 mod 4; one exists because -d = 3 mod 4.
    auto it = std::find_if(rec.odd_ramified.rbegin(), rec.odd_ramified.rend(), [](u128 p) { return (p & 3) == 3; });
    const u128 dropped = *it;
    for (u128 p : rec.odd_ramified)
      if (p != dropped) rec.redei_primes.push_back(p);
    rec.redei_primes.push_back(dropped);
  } else {
    rec.redei_primes = rec.odd_ramified;
    rec.redei_primes.push_back(2);
  }
  for (std::size_t i = 0; i < rec.n; ++i) rec.basis.push_back(detail::p_star_unchecked(rec.redei_primes[i]));

  rec.gram = gram_matrix(rec);
  rec.redei = redei_matrix(rec);
  rec.rank_gram = rank(rec.gram.gram());
  rec.rank_redei = rank(rec.redei);
  rec.four_rank = four_rank(rec);
  rec.nu = nu_full(rec.gram, max_exact);
  rec.symmetric = is_symmetric_field(rec);
  rec.cs_pair = cs_pair(rec);
  rec.verdict = fm_verdict(rec);
  return rec;
}

inline FieldRecord build_field(i128 d, std::size_t max_exact = kDefaultMaxExactDim) {
  if (d >= 0) throw Error(Errc::NotNegative, "radicand must be negative, got " + to_string(d));
  return build_field(d, factor(d), max_exact);
}

namespace detail {

// Exponent vector of a signed squarefree integer over the generators
// (-1, 2, odd ramified primes...). Throws when a prime outside that set occurs.
inline BitVector radical_coordinates(i128 a, const FieldRecord& rec) {
  const std::size_t dim = 2 + rec.odd_ramified.size();
  BitVector v(dim);
  if (a < 0) v.set(0);
  const Factorization f = factor(a);
  if (!f.squarefree()) throw Error(Errc::NotSquarefree, to_string(a) + " is not squarefree");
  for (const auto& pp : f.factors) {
    if (pp.prime == 2) {
      v.set(1);
      continue;
    }
    auto it = std::find(rec.odd_ramified.begin(), rec.odd_ramified.end(), pp.prime);
    if (it == rec.odd_ramified.end())
      throw Error(Errc::BasisNotInRadical, to_string(a) + " involves the unramified prime " + to_string(pp.prime));
    v.set(2 + static_cast<std::size_t>(it - rec.odd_ramified.begin()));
  }
  return v;
}

}  // namespace detail

/// Coordinates of a signed squarefree integer in the star basis of V, working
/// modulo squares of K (so d itself counts as trivial).
inline BitVector basis_coordinates(i128 a, const FieldRecord& rec) {
  const std::size_t dim = 2 + rec.odd_ramified.size();
  // Columns: the n basis stars, then d.
  BitMatrix lattice(dim, rec.n + 1);
  for (std::size_t j = 0; j < rec.n; ++j) {
    const BitVector c = detail::radical_coordinates(rec.basis[j], rec);
    for (std::size_t i = 0; i < dim; ++i)
      if (c.get(i)) lattice.set(i, j);
  }
  const BitVector dv = detail::radical_coordinates(rec.d, rec);
  for (std::size_t i = 0; i < dim; ++i)
    if (dv.get(i)) lattice.set(i, rec.n);

  const auto sol = solve(lattice, detail::radical_coordinates(a, rec));
  if (!sol.ok) throw Error(Errc::BasisNotInRadical, to_string(a) + " does not lie in the Kummer radical");
  BitVector coords(rec.n);
  for (std::size_t j = 0; j < rec.n; ++j)
    if (sol.x.get(j)) coords.set(j);
  return coords;
}

/// Gram matrix of B_K in a user basis of V.
inline BilinearForm gram_in_basis(const FieldRecord& rec, const std::vector<i128>& elements) {
  if (elements.size() != rec.n)
    throw Error(Errc::SingularBasis, "basis needs exactly " + std::to_string(rec.n) + " elements, got " +
                                         std::to_string(elements.size()));
  BitMatrix e(rec.n, rec.n);
  for (std::size_t j = 0; j < elements.size(); ++j) {
    const BitVector c = basis_coordinates(elements[j], rec);
    for (std::size_t i = 0; i < rec.n; ++i)
      if (c.get(i)) e.set(i, j);
  }
  return BilinearForm(congruence(rec.gram.gram(), e));
}

}  // namespace fmquad
