#pragma once

// Exact integer number theory up to 128 bits: primality, factorization,
// Legendre/Kronecker symbols and the signed prime p* = (-1)^((p-1)/2) p.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmquad/error.hpp"

namespace fmquad {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(i128 v) { return v < 0 ? "-" + to_string(uabs(v)) : to_string(u128(v)); }

/// Parses an optionally signed decimal integer that fits in 127 bits.
inline i128 parse_i128(std::string_view text) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
  if (pos == text.size()) throw Error(Errc::Parse, "empty integer");
  const u128 limit = ~u128(0) >> 1;
  u128 v = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') throw Error(Errc::Parse, "not an integer: '" + std::string(text) + "'");
    const auto digit = static_cast<unsigned>(c - '0');
    if (v > (limit - digit) / 10) throw Error(Errc::Parse, "integer out of range: '" + std::string(text) + "'");
    v = v * 10 + digit;
  }
  return neg ? -i128(v) : i128(v);
}

namespace detail {

inline u128 addmod(u128 a, u128 b, u128 m) { return a >= m - b ? a - (m - b) : a + b; }

inline u128 mulmod(u128 a, u128 b, u128 m) {
  if (m <= (u128(1) << 64)) return (a % m) * (b % m) % m;
  a %= m;
  b %= m;
  u128 r = 0;
  while (b) {
    if (b & 1) r = addmod(r, a, m);
    a = addmod(a, a, m);
    b >>= 1;
  }
  return r;
}

inline u128 powmod(u128 base, u128 exp, u128 m) {
  u128 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

inline u128 gcd(u128 a, u128 b) {
  while (b) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline constexpr std::array<std::uint32_t, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                               43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

inline bool miller_rabin(u128 n, u128 a) {
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u128 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

/// Jacobi symbol (a/m) for odd m > 0, 64-bit path.
inline int jacobi64(std::uint64_t a, std::uint64_t m) {
  a %= m;
  int t = 1;
  while (a != 0) {
    const int z = std::countr_zero(a);
    a >>= z;
    if ((z & 1) && ((m & 7) == 3 || (m & 7) == 5)) t = -t;
    if ((a & 3) == 3 && (m & 3) == 3) t = -t;
    std::swap(a, m);
    a %= m;
  }
  return m == 1 ? t : 0;
}

inline int jacobi128(u128 a, u128 m) {
  a %= m;
  int t = 1;
  while (a != 0) {
    if (m <= UINT64_MAX) return t * jacobi64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(m));
    int z = 0;
    while ((a & 1) == 0) {
      a >>= 1;
      ++z;
    }
    const auto m8 = static_cast<unsigned>(m & 7);
    if ((z & 1) && (m8 == 3 || m8 == 5)) t = -t;
    if ((a & 3) == 3 && (m & 3) == 3) t = -t;
    std::swap(a, m);
    a %= m;
  }
  return m == 1 ? t : 0;
}

/// a mod m in [0, m) for signed a.
inline u128 mod_nonneg(i128 a, u128 m) {
  const u128 r = uabs(a) % m;
  return (a < 0 && r != 0) ? m - r : r;
}

/// Jacobi symbol (a/m), m odd positive; no primality check.
inline int jacobi(i128 a, u128 m) { return jacobi128(mod_nonneg(a, m), m); }

}  // namespace detail

/// Deterministic for every n below 3.3e24 (in particular all 64-bit inputs);
/// above that the 25 fixed bases make it a strong probable-prime test.
inline bool is_prime(u128 n) {
  if (n < 2) return false;
  for (std::uint32_t p : detail::kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 97 * 97) return true;
  const std::size_t bases = n < (u128(1) << 64) ? 12 : detail::kSmallPrimes.size();
  for (std::size_t i = 0; i < bases; ++i)
    if (!detail::miller_rabin(n, detail::kSmallPrimes[i])) return false;
  return true;
}

struct PrimePower {
  u128 prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  i128 value = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes

  [[nodiscard]] bool squarefree() const {
    return std::all_of(factors.begin(), factors.end(), [](const PrimePower& f) { return f.exponent == 1; });
  }
  [[nodiscard]] std::vector<u128> primes() const {
    std::vector<u128> out;
    out.reserve(factors.size());
    for (const auto& f : factors) out.push_back(f.prime);
    return out;
  }
};

namespace detail {

// Pollard rho with Brent's cycle detection and batched gcds.
inline u128 pollard_brent(u128 n) {
  if ((n & 1) == 0) return 2;
  for (u128 c = 1;; ++c) {
    u128 y = 2, x = 2, q = 1, g = 1, ys = 2;
    const u128 batch = 128;
    u128 r = 1;
    auto f = [&](u128 v) { return addmod(mulmod(v, v, n), c % n, n); };
    do {
      x = y;
      for (u128 i = 0; i < r; ++i) y = f(y);
      u128 k = 0;
      do {
        ys = y;
        for (u128 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += batch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u128 n, std::vector<u128>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u128 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Complete factorization of |m| (m != 0): trial division, then Pollard-Brent.
inline Factorization factor(i128 m) {
  if (m == 0) throw Error(Errc::Parse, "factor: zero has no factorization");
  Factorization f;
  f.value = m;
  u128 n = uabs(m);
  std::vector<u128> primes;
  for (std::uint32_t p = 2; p < 1000 && u128(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  detail::factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  for (u128 p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

inline bool is_squarefree(i128 m) { return m != 0 && factor(m).squarefree(); }

inline void require_odd_prime(u128 p, const char* who) {
  if (p < 3 || (p & 1) == 0 || !is_prime(p))
    throw Error(Errc::NotOddPrime, std::string(who) + ": " + to_string(p) + " is not an odd prime");
}

/// Legendre symbol (a/p) in {+1, 0, -1}.
inline int legendre(i128 a, u128 p) {
  require_odd_prime(p, "legendre");
  return detail::jacobi(a, p);
}

/// Kronecker symbol (a/m), the standard extension to every integer m.
inline int kronecker(i128 a, i128 m) {
  if (m == 0) return uabs(a) == 1 ? 1 : 0;
  int t = 1;
  u128 n = uabs(m);
  if (m < 0 && a < 0) t = -t;
  const int z = [&] {
    int k = 0;
    while ((n & 1) == 0) {
      n >>= 1;
      ++k;
    }
    return k;
  }();
  if (z > 0) {
    if ((uabs(a) & 1) == 0) return 0;
    const auto a8 = static_cast<unsigned>(detail::mod_nonneg(a, 8));
    if ((z & 1) && (a8 == 3 || a8 == 5)) t = -t;
  }
  if (n == 1) return t;
  return t * detail::jacobi(a, n);
}

/// p* = p when p = 1 mod 4, -p when p = 3 mod 4.
inline i128 p_star(u128 p) {
  require_odd_prime(p, "p_star");
  return (p & 3) == 1 ? i128(p) : -i128(p);
}

namespace detail {
inline i128 p_star_unchecked(u128 p) { return (p & 3) == 1 ? i128(p) : -i128(p); }
}  // namespace detail

}  // namespace fmquad
