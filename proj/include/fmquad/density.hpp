#pragma once

// 4-rank densities of imaginary quadratic fields and the lower bounds they give
// for the proportion of fields whose unramified 2-tower has no uniform quotient
// above a given dimension.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "fmquad/error.hpp"
#include "fmquad/quadfield.hpp"

namespace fmquad {

/// prod_{k=1}^{64} (1 - 2^-k); the omitted tail is below 1e-18.
inline double eta_infinity() {
  double c = 1.0;
  for (int k = 1; k <= 64; ++k) c *= 1.0 - std::ldexp(1.0, -k);
  return c;
}

/// Limit density of 4-rank r: 2^(-r^2) c / (prod_{k=1}^r (1 - 2^-k))^2.
inline double gerth_limit(std::size_t r) {
  double finite = 1.0;
  for (std::size_t k = 1; k <= r; ++k) finite *= 1.0 - std::ldexp(1.0, -static_cast<int>(k));
  return std::ldexp(1.0, -static_cast<int>(r * r)) * eta_infinity() / (finite * finite);
}

/// Lower bound for FM^[i]: sum_{r=0}^{2i-2} d_{inf,r}.
inline double fm_bracket_bound(std::size_t i) {
  if (i == 0) throw Error(Errc::Parse, "fm_bracket_bound: i must be >= 1");
  double s = 0.0;
  for (std::size_t r = 0; r <= 2 * i - 2; ++r) s += gerth_limit(r);
  return s;
}

/// Lower bound for FM_n^(d): partial sum of d_{n,r} for r <= 2d - n - 1 (0 when empty).
inline double fm_nd_bound(std::size_t n, std::size_t d, const std::map<std::size_t, double>& dnr) {
  if (2 * d < n + 1) return 0.0;
  const std::size_t top = 2 * d - n - 1;
  double s = 0.0;
  for (const auto& [r, v] : dnr)
    if (r <= top) s += v;
  return s;
}

/// A published partial sum d_{n,0} + ... + d_{n,top}.
struct Fixture {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t top = 0;
  double value = 0.0;
  std::string label;
};

struct DensityTable {
  std::map<std::size_t, double> d_inf;                            // r -> d_{inf,r}
  std::map<std::pair<std::size_t, std::size_t>, Fixture> fixtures;  // (n, d) -> partial sum
};

inline DensityTable density_table(std::size_t max_r = 12) {
  DensityTable t;
  for (std::size_t r = 0; r <= max_r; ++r) t.d_inf[r] = gerth_limit(r);
  const Fixture fixtures[] = {
      {3, 3, 2, 0.992187, "FM_3"},          {4, 3, 1, 0.874268, "FM_4"},
      {4, 4, 3, 0.999695, "FM_4^(4)"},      {5, 3, 0, 0.331299, "FM_5"},
      {5, 4, 2, 0.990624, "FM_5^(4)"},      {5, 5, 4, 0.9999943, "FM_5^(5)"},
      {6, 4, 1, 0.867183, "FM_6^(4)"},      {6, 5, 3, 0.999255, "FM_6^(5)"},
      {6, 6, 5, 1.0 - 5.2e-8, "FM_6^(6)"},
  };
  for (const auto& f : fixtures) t.fixtures[{f.n, f.d}] = f;
  return t;
}

/// Fixture-based bound for FM_n^(d), when a published value exists.
inline std::optional<double> fm_nd_bound(std::size_t n, std::size_t d, const DensityTable& table) {
  if (2 * d < n + 1) return 0.0;
  auto it = table.fixtures.find({n, d});
  if (it == table.fixtures.end()) return std::nullopt;
  return it->second.value;
}

/// Order-insensitive tally of 4-ranks per 2-rank; merging is a componentwise sum.
struct FourRankCounts {
  std::map<std::size_t, std::map<std::size_t, std::uint64_t>> by_n_r;

  void add(std::size_t n, std::size_t r) { ++by_n_r[n][r]; }
  void merge(const FourRankCounts& o) {
    for (const auto& [n, row] : o.by_n_r)
      for (const auto& [r, c] : row) by_n_r[n][r] += c;
  }
};

/// Proportion of each 4-rank among the counted fields of 2-rank n.
inline std::map<std::size_t, double> empirical_dnr(const FourRankCounts& counts, std::size_t n) {
  auto it = counts.by_n_r.find(n);
  std::uint64_t total = 0;
  if (it != counts.by_n_r.end())
    for (const auto& [r, c] : it->second) total += c;
  if (total == 0) throw Error(Errc::EmptyBucket, "no fields with 2-rank " + std::to_string(n));
  std::map<std::size_t, double> out;
  for (const auto& [r, c] : it->second) out[r] = static_cast<double>(c) / static_cast<double>(total);
  return out;
}

/// Estimator over a stream of records; restricted to d = 1 mod 4 when case_a_only.
template <typename Range>
std::map<std::size_t, double> empirical_dnr(const Range& records, std::size_t n, bool case_a_only) {
  FourRankCounts counts;
  for (const FieldRecord& rec : records) {
    if (rec.n != n || (case_a_only && !rec.case_a)) continue;
    counts.add(rec.n, rec.four_rank);
  }
  return empirical_dnr(counts, n);
}

}  // namespace fmquad
