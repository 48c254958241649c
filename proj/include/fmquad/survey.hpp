#pragma once

// Discriminant-range survey: a segmented sieve enumerates squarefree radicands
// with their factorizations, workers build field records over disjoint chunks,
// and partial aggregates are merged by componentwise sums.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fmquad/arith.hpp"
#include "fmquad/density.hpp"
#include "fmquad/quadfield.hpp"

namespace fmquad {

/// Primes up to limit (inclusive), plain Eratosthenes.
inline std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

inline std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// |disc| of Q(sqrt(-m)) for squarefree m >= 1.
inline std::uint64_t abs_disc_of_radicand(std::uint64_t m) { return (m % 4 == 3) ? m : 4 * m; }

/// Largest radicand |d| that can appear for the bound x (m = 3 mod 4 has |disc| = m).
inline std::uint64_t radicand_limit(std::uint64_t x, bool /*by_radicand*/) { return x; }

inline bool within_bound(std::uint64_t m, std::uint64_t x, bool by_radicand) {
  return by_radicand ? m <= x : abs_disc_of_radicand(m) <= x;
}

/// Sieves radicands m in [lo, hi) and calls visit(d = -m, factorization of m)
/// for each squarefree m inside the bound, in increasing m.
class RadicandSieve {
 public:
  RadicandSieve(std::uint64_t x, bool by_radicand)
      : x_(x), by_radicand_(by_radicand), primes_(primes_up_to(isqrt(radicand_limit(x, by_radicand)) + 1)) {}

  template <typename Visit>
  void sieve(std::uint64_t lo, std::uint64_t hi, Visit&& visit) const {
    hi = std::min(hi, radicand_limit(x_, by_radicand_) + 1);
    lo = std::max<std::uint64_t>(lo, 1);
    if (lo >= hi) return;
    const std::size_t len = hi - lo;
    std::vector<std::uint64_t> rest(len);
    std::vector<bool> square_factor(len, false);
    std::vector<std::uint8_t> count(len, 0);
    std::vector<std::uint32_t> small(len * kSlots);
    for (std::size_t i = 0; i < len; ++i) rest[i] = lo + i;

    for (std::uint32_t p : primes_) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp >= hi) break;
      for (std::uint64_t m = (lo + pp - 1) / pp * pp; m < hi; m += pp) square_factor[m - lo] = true;
      for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
        const std::size_t i = m - lo;
        if (square_factor[i]) continue;
        small[i * kSlots + count[i]++] = p;
        rest[i] /= p;
      }
    }

    Factorization fac;
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t m = lo + i;
      if (square_factor[i] || !within_bound(m, x_, by_radicand_)) continue;
      fac.value = -i128(m);
      fac.factors.clear();
      for (std::uint8_t k = 0; k < count[i]; ++k) fac.factors.push_back({small[i * kSlots + k], 1});
      if (rest[i] > 1) fac.factors.push_back({rest[i], 1});
      visit(-static_cast<std::int64_t>(m), fac);
    }
  }

 private:
  // More than 15 distinct primes below sqrt(2^64) cannot divide a 64-bit value.
  static constexpr std::size_t kSlots = 16;
  std::uint64_t x_;
  bool by_radicand_;
  std::vector<std::uint32_t> primes_;
};

/// Every squarefree d < 0 with |disc| <= x (or |d| <= x when by_radicand), by increasing |d|.
inline std::vector<std::int64_t> squarefree_radicands(std::uint64_t x, bool by_radicand = false) {
  std::vector<std::int64_t> out;
  const RadicandSieve s(x, by_radicand);
  s.sieve(1, radicand_limit(x, by_radicand) + 1, [&](std::int64_t d, const Factorization&) { out.push_back(d); });
  return out;
}

struct SurveyOptions {
  std::uint64_t x = 0;
  std::optional<std::size_t> only_n;
  bool case_a_only = false;
  bool by_radicand = false;
  std::size_t jobs = 1;
  std::uint64_t chunk_size = 1 << 15;
  std::size_t max_exact = kDefaultMaxExactDim;
};

inline constexpr std::size_t kBracketMax = 4;

struct SurveyAggregate {
  std::uint64_t x_bound = 0;
  bool by_radicand = false;
  std::uint64_t total = 0;
  std::map<std::size_t, std::uint64_t> by_n;
  FourRankCounts by_n_r;
  std::map<std::size_t, std::uint64_t> fm_n;
  std::map<std::size_t, std::map<std::size_t, std::uint64_t>> fm_n_d;
  std::map<std::size_t, std::uint64_t> fm_bracket;       // threshold i + n/2, compared in halves
  std::map<std::size_t, std::uint64_t> fm_bracket_ceil;  // threshold i + ceil(n/2)
  std::uint64_t case_a = 0;
  FourRankCounts case_a_by_n_r;

  void add(const FieldRecord& rec) {
    const std::size_t n = rec.n;
    const std::size_t mud = rec.verdict.max_uniform_dim;
    ++total;
    ++by_n[n];
    by_n_r.add(n, rec.four_rank);
    if (rec.verdict.conjecture2_decided) ++fm_n[n];
    auto& row = fm_n_d[n];
    for (std::size_t d = 0; d <= std::max<std::size_t>(n, 2); ++d)
      if (mud <= d) ++row[d];
    for (std::size_t i = 1; i <= kBracketMax; ++i) {
      if (2 * mud <= 2 * i + n) ++fm_bracket[i];
      if (mud <= i + (n + 1) / 2) ++fm_bracket_ceil[i];
    }
    if (rec.case_a) {
      ++case_a;
      case_a_by_n_r.add(n, rec.four_rank);
    }
  }

  void merge(const SurveyAggregate& o) {
    total += o.total;
    for (const auto& [k, v] : o.by_n) by_n[k] += v;
    by_n_r.merge(o.by_n_r);
    for (const auto& [k, v] : o.fm_n) fm_n[k] += v;
    for (const auto& [n, row] : o.fm_n_d)
      for (const auto& [d, v] : row) fm_n_d[n][d] += v;
    for (const auto& [k, v] : o.fm_bracket) fm_bracket[k] += v;
    for (const auto& [k, v] : o.fm_bracket_ceil) fm_bracket_ceil[k] += v;
    case_a += o.case_a;
    case_a_by_n_r.merge(o.case_a_by_n_r);
  }

  friend bool operator==(const SurveyAggregate& a, const SurveyAggregate& b) {
    return a.x_bound == b.x_bound && a.by_radicand == b.by_radicand && a.total == b.total && a.by_n == b.by_n &&
           a.by_n_r.by_n_r == b.by_n_r.by_n_r && a.fm_n == b.fm_n && a.fm_n_d == b.fm_n_d &&
           a.fm_bracket == b.fm_bracket && a.fm_bracket_ceil == b.fm_bracket_ceil && a.case_a == b.case_a &&
           a.case_a_by_n_r.by_n_r == b.case_a_by_n_r.by_n_r;
  }
};

inline constexpr std::string_view kCsvHeader =
    "d,disc,n,case_a,symmetric,rank_gram,rank_redei,four_rank,nu_lower,nu_upper,nu_exact,nu_is_exact,"
    "max_uniform_dim,conjecture2_decided,cs_pair";

inline void append_csv_row(std::string& out, const FieldRecord& rec) {
  auto num = [&](auto v) {
    out += std::to_string(v);
    out += ',';
  };
  out += to_string(rec.d);
  out += ',';
  out += to_string(rec.disc);
  out += ',';
  num(rec.n);
  num(int(rec.case_a));
  num(int(rec.symmetric));
  num(rec.rank_gram);
  num(rec.rank_redei);
  num(rec.four_rank);
  num(rec.nu.lower);
  num(rec.nu.upper);
  if (rec.nu.exact) out += std::to_string(*rec.nu.exact);
  out += ',';
  num(int(rec.nu_is_exact()));
  num(rec.verdict.max_uniform_dim);
  num(int(rec.verdict.conjecture2_decided));
  if (rec.cs_pair) {
    out += to_string(rec.cs_pair->first);
    out += ';';
    out += to_string(rec.cs_pair->second);
  }
  out += '\n';
}

/// Called on worker threads with every record that passes the filters.
using RecordInspector = std::function<void(const FieldRecord&)>;
/// Receives CSV text chunk by chunk, in increasing |d|, on the calling thread.
using CsvSink = std::function<void(std::string_view)>;

/// Runs the survey. Output does not depend on jobs or chunk_size.
inline SurveyAggregate run_survey(const SurveyOptions& opt, const CsvSink& csv = {},
                                  const RecordInspector& inspect = {}) {
  const RadicandSieve sieve(opt.x, opt.by_radicand);
  const std::uint64_t limit = radicand_limit(opt.x, opt.by_radicand);
  const std::uint64_t chunk = std::max<std::uint64_t>(opt.chunk_size, 1);
  const std::uint64_t chunks = (limit + chunk) / chunk;  // covers m in [1, limit]

  struct Part {
    SurveyAggregate agg;
    std::string text;
  };
  std::vector<std::optional<Part>> done(chunks);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::uint64_t> next{0};

  auto work = [&] {
    for (;;) {
      const std::uint64_t id = next.fetch_add(1);
      if (id >= chunks) return;
      Part part;
      const std::uint64_t lo = 1 + id * chunk;
      sieve.sieve(lo, lo + chunk, [&](std::int64_t d, const Factorization& fac) {
        FieldRecord rec = build_field(d, fac, opt.max_exact);
        if (opt.only_n && rec.n != *opt.only_n) return;
        if (opt.case_a_only && !rec.case_a) return;
        part.agg.add(rec);
        if (csv) append_csv_row(part.text, rec);
        if (inspect) inspect(rec);
      });
      {
        const std::lock_guard lock(mu);
        done[id] = std::move(part);
      }
      ready.notify_all();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(opt.jobs, 1);
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) workers.emplace_back(work);

  SurveyAggregate total;
  total.x_bound = opt.x;
  total.by_radicand = opt.by_radicand;
  if (csv) csv(std::string(kCsvHeader) + "\n");
  for (std::uint64_t id = 0; id < chunks; ++id) {
    Part part;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return done[id].has_value(); });
      part = std::move(*done[id]);
      done[id].reset();
    }
    total.merge(part.agg);
    if (csv && !part.text.empty()) csv(part.text);
  }
  return total;
}

}  // namespace fmquad
