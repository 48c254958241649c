#pragma once

// Class group of a negative fundamental discriminant via reduced primitive
// binary quadratic forms and Gauss composition. Used as an independent check
// on genus theory (2-rank) and on the Redei 4-rank.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "fmquad/arith.hpp"
#include "fmquad/error.hpp"

namespace fmquad {

struct QuadForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  [[nodiscard]] std::int64_t discriminant() const { return b * b - 4 * a * c; }
  [[nodiscard]] bool reduced() const {
    const std::int64_t ab = b < 0 ? -b : b;
    if (!(ab <= a && a <= c)) return false;
    if ((ab == a || a == c) && b < 0) return false;
    return true;
  }

  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

struct GroupStructure {
  std::uint64_t order = 1;
  std::vector<std::uint64_t> invariant_factors;  // each divides the next

  [[nodiscard]] std::size_t two_rank() const {
    return static_cast<std::size_t>(
        std::count_if(invariant_factors.begin(), invariant_factors.end(), [](auto f) { return f % 2 == 0; }));
  }
  [[nodiscard]] std::size_t four_rank() const {
    return static_cast<std::size_t>(
        std::count_if(invariant_factors.begin(), invariant_factors.end(), [](auto f) { return f % 4 == 0; }));
  }
};

inline constexpr std::int64_t kMaxOracleDisc = 1'000'000;

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const std::int64_t q = floor_div(a, b);
    std::tie(a, b) = std::make_tuple(b, a - q * b);
    std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
  }
  if (a < 0) return {-a, -x0, -y0};
  return {a, x0, y0};
}

inline void check_fundamental(std::int64_t disc) {
  if (disc >= 0) throw Error(Errc::BadDiscriminant, "discriminant must be negative");
  const std::int64_t r = ((disc % 4) + 4) % 4;
  if (r == 1) {
    if (!is_squarefree(disc)) throw Error(Errc::BadDiscriminant, "not a fundamental discriminant");
  } else if (r == 0) {
    const std::int64_t m = disc / 4;
    const std::int64_t m4 = ((m % 4) + 4) % 4;
    if (!(m4 == 2 || m4 == 3) || !is_squarefree(m))
      throw Error(Errc::BadDiscriminant, "not a fundamental discriminant");
  } else {
    throw Error(Errc::BadDiscriminant, "discriminant must be 0 or 1 mod 4");
  }
}

}  // namespace detail

/// Reduces a positive definite form to the unique reduced form in its class.
inline QuadForm reduce(QuadForm f) {
  for (;;) {
    // Normalize: -a < b <= a.
    if (!(-f.a < f.b && f.b <= f.a)) {
      const std::int64_t two_a = 2 * f.a;
      const std::int64_t k = detail::floor_div(f.a - f.b, two_a);
      const std::int64_t nb = f.b + k * two_a;
      f.c = f.c + k * (f.b + f.a * k);
      f.b = nb;
    }
    if (f.a > f.c) {
      std::swap(f.a, f.c);
      f.b = -f.b;
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

/// Principal form of discriminant disc.
inline QuadForm principal_form(std::int64_t disc) {
  const std::int64_t b = (disc % 2 == 0) ? 0 : 1;
  return {1, b, (b * b - disc) / 4};
}

inline QuadForm inverse(const QuadForm& f) { return reduce({f.a, -f.b, f.c}); }

/// All reduced primitive forms of a negative fundamental discriminant, sorted.
inline std::vector<QuadForm> reduced_forms(std::int64_t disc) {
  detail::check_fundamental(disc);
  std::vector<QuadForm> out;
  const std::int64_t absd = -disc;
  for (std::int64_t a = 1; 3 * a * a <= absd; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - disc) & 1) != 0) continue;
      const std::int64_t num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      const QuadForm f{a, b, c};
      if (!f.reduced()) continue;
      if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Gauss (Dirichlet) composition, reduced.
inline QuadForm compose(const QuadForm& f, const QuadForm& g, std::int64_t disc) {
  if (f.discriminant() != disc || g.discriminant() != disc)
    throw Error(Errc::DiscMismatch, "compose: forms do not share the discriminant");
  // e = gcd(a1, a2, (b1+b2)/2) = u a1 + v a2 + w (b1+b2)/2.
  const std::int64_t h = (f.b + g.b) / 2;
  const auto [g1, x1, y1] = detail::ext_gcd(f.a, g.a);
  const auto [e, x2, w] = detail::ext_gcd(g1, h);
  const std::int64_t u = x1 * x2;
  const std::int64_t v = y1 * x2;
  const std::int64_t a3 = (f.a / e) * (g.a / e);
  const std::int64_t two_a3 = 2 * a3;
  const i128 num = i128(u) * f.a * g.b + i128(v) * g.a * f.b + i128(w) * ((i128(f.b) * g.b + disc) / 2);
  i128 b3 = (num / e) % two_a3;
  if (b3 < 0) b3 += two_a3;
  const auto b = static_cast<std::int64_t>(b3);
  const i128 c3 = (i128(b) * b - disc) / (4 * i128(a3));
  return reduce({a3, b, static_cast<std::int64_t>(c3)});
}

namespace detail {

// Finite abelian group given by its element list and a composition law.
class FormGroup {
 public:
  explicit FormGroup(std::int64_t disc) : disc_(disc), forms_(reduced_forms(disc)) {
    for (std::size_t i = 0; i < forms_.size(); ++i) index_[forms_[i]] = i;
    identity_ = index_.at(principal_form(disc));
  }

  [[nodiscard]] std::size_t size() const { return forms_.size(); }
  [[nodiscard]] std::size_t mul(std::size_t x, std::size_t y) const {
    return index_.at(compose(forms_[x], forms_[y], disc_));
  }
  [[nodiscard]] std::size_t pow(std::size_t x, std::uint64_t e) const {
    std::size_t r = identity_;
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }
  [[nodiscard]] std::size_t identity() const { return identity_; }

 private:
  std::int64_t disc_;
  std::vector<QuadForm> forms_;
  std::map<QuadForm, std::size_t> index_;
  std::size_t identity_ = 0;
};

inline std::vector<std::pair<std::uint64_t, unsigned>> small_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace detail

/// Invariant factors of Cl(disc) from element orders: for each prime p | h,
/// the counts |G[p^k]| fix the p-primary part.
inline GroupStructure group_structure(std::int64_t disc) {
  if (-disc > kMaxOracleDisc) throw Error(Errc::TooLarge, "oracle limited to |disc| <= 10^6");
  const detail::FormGroup group(disc);
  GroupStructure gs;
  gs.order = group.size();
  const auto hf = detail::small_factor(gs.order);

  std::vector<std::uint64_t> orders(group.size());
  for (std::size_t x = 0; x < group.size(); ++x) {
    std::uint64_t ord = gs.order;
    for (const auto& [p, e] : hf) {
      for (unsigned k = 0; k < e && ord % p == 0 && group.pow(x, ord / p) == group.identity(); ++k) ord /= p;
    }
    orders[x] = ord;
  }

  // exponents[p] = partition of the p-part, largest first.
  std::vector<std::uint64_t> factors;
  std::vector<std::vector<unsigned>> partitions;
  std::size_t width = 0;
  for (const auto& [p, e] : hf) {
    std::vector<std::size_t> at_least;  // at_least[k-1] = number of cyclic factors of order >= p^k
    std::uint64_t prev = 1;
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      const auto cnt = static_cast<std::uint64_t>(
          std::count_if(orders.begin(), orders.end(), [&](std::uint64_t o) { return pk % o == 0; }));
      std::size_t c = 0;
      for (std::uint64_t ratio = cnt / prev; ratio > 1; ratio /= p) ++c;
      at_least.push_back(c);
      prev = cnt;
    }
    std::vector<unsigned> part(at_least.empty() ? 0 : at_least.front(), 0);
    for (std::size_t k = 0; k < at_least.size(); ++k)
      for (std::size_t j = 0; j < at_least[k]; ++j) ++part[j];
    width = std::max(width, part.size());
    partitions.push_back(std::move(part));
  }
  factors.assign(width, 1);
  for (std::size_t i = 0; i < hf.size(); ++i)
    for (std::size_t j = 0; j < partitions[i].size(); ++j)
      for (unsigned k = 0; k < partitions[i][j]; ++k) factors[j] *= hf[i].first;
  std::sort(factors.begin(), factors.end());
  gs.invariant_factors = std::move(factors);
  return gs;
}

inline std::size_t two_rank(std::int64_t disc) { return group_structure(disc).two_rank(); }
inline std::size_t four_rank(std::int64_t disc) { return group_structure(disc).four_rank(); }

}  // namespace fmquad
