#pragma once

// Bilinear forms over F_2: symmetrization, the symmetric classification, and
// the isotropy index nu(B) = max{dim W : B(W, W) = 0}.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fmquad/error.hpp"
#include "fmquad/gf2.hpp"

namespace fmquad {

/// (V, B) with dim V = n; gram(i, j) = B(e_i, e_j).
class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(BitMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.square()) throw Error(Errc::NonSquare, "Gram matrix must be square");
  }

  static BilinearForm zero(std::size_t n) { return BilinearForm(BitMatrix(n, n)); }

  [[nodiscard]] std::size_t dim() const noexcept { return gram_.rows(); }
  [[nodiscard]] const BitMatrix& gram() const noexcept { return gram_; }
  [[nodiscard]] bool operator()(std::size_t i, std::size_t j) const { return gram_.get(i, j); }

  /// B(x, y) for coordinate vectors x, y.
  [[nodiscard]] bool eval(const BitVector& x, const BitVector& y) const { return x.dot(gram_.apply(y)); }

  friend bool operator==(const BilinearForm&, const BilinearForm&) = default;

 private:
  BitMatrix gram_;
};

struct SymmetricClassification {
  std::size_t r = 0;      // rank
  std::size_t r0 = 0;     // number of metabolic plans
  std::size_t delta = 0;  // number of <1> summands, 0 or 1
  std::size_t zeros = 0;  // n - r
  bool alternating = false;
  std::size_t nu = 0;
};

struct NuBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::optional<std::size_t> exact;
};

inline constexpr std::size_t kDefaultMaxExactDim = 20;
inline constexpr std::size_t kMaxBruteDim = 8;
inline constexpr std::size_t kMaxSearchDim = 32;

/// B^sym(x, y) = B(x, y) + B(y, x).
inline BilinearForm symmetrize(const BilinearForm& f) {
  return BilinearForm(f.gram() + f.gram().transpose());
}

inline bool is_symmetric(const BilinearForm& f) { return f.gram().is_symmetric(); }

/// Symmetric with B(x, x) = 0 for all x, i.e. zero diagonal.
inline bool is_alternating(const BilinearForm& f) { return is_symmetric(f) && f.gram().zero_diagonal(); }

inline std::size_t right_radical_dim(const BilinearForm& f) { return f.dim() - rank(f.gram()); }

inline SymmetricClassification classify_symmetric(const BilinearForm& f) {
  if (!is_symmetric(f)) throw Error(Errc::NotSymmetric, "classify_symmetric needs a symmetric form");
  SymmetricClassification c;
  c.r = rank(f.gram());
  c.alternating = f.gram().zero_diagonal();
  // Alternating forms have even rank, so r mod 2 is the <1> count in both cases.
  c.delta = c.r % 2;
  c.r0 = (c.r - c.delta) / 2;
  c.zeros = f.dim() - c.r;
  c.nu = f.dim() - c.r0 - c.delta;
  return c;
}

/// Upper bound n - ceil(rk/2); lower bound n - floor(rk(B^sym)/2) - floor(rk/2),
/// capped at the upper bound, and exact for symmetric forms.
inline NuBounds nu_bounds(const BilinearForm& f) {
  const std::size_t n = f.dim();
  const std::size_t rk = rank(f.gram());
  NuBounds b;
  b.upper = n - (rk + 1) / 2;
  if (is_symmetric(f)) {
    b.lower = classify_symmetric(f).nu;
    return b;
  }
  const std::size_t rk_sym = rank(symmetrize(f).gram());
  const std::size_t drop = rk_sym / 2 + rk / 2;
  const std::size_t raw = drop >= n ? 0 : n - drop;
  b.lower = std::min(raw, b.upper);
  return b;
}

namespace detail {

// Word-packed Gram: bit j of rows[i] is B(e_i, e_j). Requires n <= 64.
struct PackedForm {
  std::size_t n = 0;
  std::vector<Word> rows;

  explicit PackedForm(const BitMatrix& g) : n(g.rows()), rows(n) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = g.row_word(i);
  }

  // x^T M as a bit mask.
  [[nodiscard]] Word left(Word x) const {
    Word acc = 0;
    while (x) {
      acc ^= rows[static_cast<std::size_t>(std::countr_zero(x))];
      x &= x - 1;
    }
    return acc;
  }
  // M y as a bit mask.
  [[nodiscard]] Word right(Word y) const {
    Word acc = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::popcount(rows[i] & y) & 1) acc |= Word{1} << i;
    return acc;
  }
  [[nodiscard]] bool eval(Word x, Word y) const { return std::popcount(left(x) & y) & 1; }
};

inline bool parity(Word w) { return std::popcount(w) & 1; }
inline Word lowbit(Word w) { return w & (~w + 1); }

// Subspaces are kept as bases in reduced echelon form keyed on the lowest set
// bit: sorted by increasing pivot, and each vector is zero at the other pivots.
inline void echelonize(std::vector<Word>& basis) {
  std::vector<Word> out;
  for (Word v : basis) {
    for (Word b : out)
      if (v & lowbit(b)) v ^= b;
    if (!v) continue;
    const Word p = lowbit(v);
    for (Word& b : out)
      if (b & p) b ^= v;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](Word a, Word b) { return lowbit(a) < lowbit(b); });
  basis = std::move(out);
}

// Restricts span(basis) to the hyperplane {x : parity(c & x) = 0}.
inline void cut(std::vector<Word>& basis, Word c) {
  auto odd = std::find_if(basis.begin(), basis.end(), [&](Word b) { return parity(c & b); });
  if (odd == basis.end()) return;
  const Word t = *odd;
  basis.erase(odd);
  for (Word& b : basis)
    if (parity(c & b)) b ^= t;
}

// Rank of the Gram matrix of B on the span of basis.
inline std::size_t restricted_rank(const PackedForm& form, const Word* basis, std::size_t m) {
  std::vector<Word> rows(m);
  for (std::size_t a = 0; a < m; ++a) {
    const Word la = form.left(basis[a]);
    Word row = 0;
    for (std::size_t b = 0; b < m; ++b)
      if (parity(la & basis[b])) row |= Word{1} << b;
    rows[a] = row;
  }
  std::size_t r = 0;
  for (std::size_t col = 0; col < m && r < m; ++col) {
    const Word bit = Word{1} << col;
    std::size_t p = r;
    while (p < m && !(rows[p] & bit)) ++p;
    if (p == m) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = r + 1; i < m; ++i)
      if (rows[i] & bit) rows[i] ^= rows[r];
    ++r;
  }
  return r;
}

// Witt index of Q(x) = B(x, x) on span(basis). Q has polar form B + B^T, and a
// totally isotropic subspace of B is totally singular for Q.
inline std::size_t singular_index(const PackedForm& form, const Word* basis, std::size_t m) {
  auto q = [&](Word x) { return parity(form.left(x) & x); };
  auto s = [&](Word x, Word y) { return parity(form.left(x) & y) != parity(form.left(y) & x); };
  std::vector<Word> rest(basis, basis + m);
  std::size_t pairs = 0;
  bool arf = false;
  for (;;) {
    std::size_t a = 0, b = 0;
    bool found = false;
    for (a = 0; a < rest.size() && !found; ++a)
      for (b = a + 1; b < rest.size(); ++b)
        if (s(rest[a], rest[b])) {
          found = true;
          break;
        }
    if (!found) break;
    --a;
    const Word x = rest[a];
    const Word y = rest[b];
    arf ^= q(x) && q(y);
    ++pairs;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(b));
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(a));
    // Project the rest onto the S-orthogonal complement of <x, y>.
    for (Word& z : rest) {
      const bool zy = s(z, y);
      const bool zx = s(z, x);
      if (zy) z ^= x;
      if (zx) z ^= y;
    }
  }
  // rest now spans the radical of S, where Q is additive.
  const bool q_on_radical = std::any_of(rest.begin(), rest.end(), [&](Word r) { return q(r); });
  if (q_on_radical) return rest.size() - 1 + pairs;
  return rest.size() + pairs - (arf ? 1 : 0);
}

// Upper bound on the dimension of a totally isotropic subspace inside
// span(basis): dim - ceil(rk/2), and the Witt index of the diagonal form.
inline std::size_t headroom(const PackedForm& form, const Word* basis, std::size_t m) {
  const std::size_t by_rank = m - (restricted_rank(form, basis, m) + 1) / 2;
  return std::min(by_rank, singular_index(form, basis, m));
}

// Depth-first search over reduced echelon bases of totally isotropic
// subspaces, so each subspace is met once. A node holds the chosen vectors and
// the subspace U where extensions live: vectors orthogonal on both sides to
// everything chosen, with pivot above the last one. Pivots must avoid the
// support of earlier vectors. Branches whose headroom cannot beat the best
// dimension found are cut.
class IsotropicSearch {
 public:
  IsotropicSearch(const PackedForm& form, std::size_t known, std::size_t ceiling)
      : form_(form), best_(known), ceiling_(ceiling) {}

  std::size_t run() {
    if (best_ >= ceiling_) return best_;
    std::vector<Word> full(form_.n);
    for (std::size_t i = 0; i < form_.n; ++i) full[i] = Word{1} << i;
    descend(0, full, 0);
    return best_;
  }

 private:
  struct Child {
    std::size_t bound;
    Word v;
    std::size_t j;
  };

  std::vector<Word> extension_space(const std::vector<Word>& u, std::size_t j, Word v) const {
    std::vector<Word> child(u.begin() + static_cast<std::ptrdiff_t>(j) + 1, u.end());
    cut(child, form_.left(v));
    cut(child, form_.right(v));
    echelonize(child);
    return child;
  }

  void descend(std::size_t depth, const std::vector<Word>& u, Word used) {
    if (depth > best_) {
      best_ = depth;
      witness_ = path_;
    }
    if (best_ >= ceiling_) return;
    const std::size_t m = u.size();
    std::vector<Child> children;
    for (std::size_t j = 0; j < m; ++j) {
      // Extensions from here on lie in span(u[j..]).
      if (depth + headroom(form_, u.data() + j, m - j) <= best_) break;
      if (used & lowbit(u[j])) continue;
      // Every vector of span(u[j..]) with pivot u[j]: u[j] plus any subset of
      // the tail, walked in Gray-code order.
      const std::size_t tail = m - j - 1;
      Word v = u[j];
      for (std::uint64_t step = 0;; ++step) {
        if (!parity(form_.left(v) & v)) {
          const std::vector<Word> child = extension_space(u, j, v);
          const std::size_t bound = depth + 1 + headroom(form_, child.data(), child.size());
          if (bound > best_) children.push_back({bound, v, j});
        }
        if (step + 1 == (std::uint64_t{1} << tail)) break;
        v ^= u[j + 1 + static_cast<std::size_t>(std::countr_zero(step + 1))];
      }
    }
    // Most promising branches first, so good subspaces turn up early.
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.bound > b.bound; });
    for (const Child& c : children) {
      if (c.bound <= best_) break;
      path_.push_back(c.v);
      descend(depth + 1, extension_space(u, c.j, c.v), used | c.v);
      path_.pop_back();
      if (best_ >= ceiling_) return;
    }
  }

  const PackedForm& form_;
  std::size_t best_;
  std::size_t ceiling_;
  std::vector<Word> path_;
  std::vector<Word> witness_;

 public:
  // Basis of a subspace of dimension best_ when the search improved on the seed.
  [[nodiscard]] const std::vector<Word>& witness() const { return witness_; }
};

// Two-sided radical R = ker(M) ∩ ker(M^T). Returns the induced Gram on a
// complement of R, where nu(B) = dim R + nu(induced).
inline std::pair<std::size_t, BitMatrix> strip_radical(const BitMatrix& g) {
  const std::size_t n = g.rows();
  BitMatrix stacked(2 * n, n);
  const BitMatrix gt = g.transpose();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (g.get(i, j)) stacked.set(i, j);
      if (gt.get(i, j)) stacked.set(n + i, j);
    }
  const auto rad = kernel_basis(stacked);
  if (rad.empty()) return {0, g};

  // Basis matrix: radical vectors first, then unit vectors completing a basis.
  std::vector<BitVector> cols = rad;
  for (std::size_t j = 0; j < n && cols.size() < n; ++j) {
    BitVector e(n);
    e.set(j);
    BitMatrix trial(cols.size() + 1, n);
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t k = 0; k < n; ++k)
        if (cols[c].get(k)) trial.set(c, k);
    trial.set(cols.size(), j);
    if (rank(trial) == cols.size() + 1) cols.push_back(std::move(e));
  }
  BitMatrix basis(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < n; ++k)
      if (cols[c].get(k)) basis.set(k, c);
  const BitMatrix moved = congruence(g, basis);
  const std::size_t r = rad.size();
  return {r, moved.block(r, r, n - r, n - r)};
}

}  // namespace detail

/// Exact nu by exhaustive echelon search; throws TooLarge when n > max_n.
inline std::size_t nu_exact(const BilinearForm& f, std::size_t max_n = kDefaultMaxExactDim) {
  const std::size_t n = f.dim();
  if (n > max_n || n > kMaxSearchDim)
    throw Error(Errc::TooLarge, "nu_exact: dimension " + std::to_string(n) + " exceeds limit");
  if (is_symmetric(f)) return classify_symmetric(f).nu;

  auto [rad, core] = detail::strip_radical(f.gram());
  const BilinearForm reduced(core);
  const std::size_t m = reduced.dim();
  const std::size_t rk = rank(core);
  const std::size_t ceiling = m - (rk + 1) / 2;
  // Provable start value: a maximal isotropic subspace of the alternating B^sym
  // has dimension m - rk_sym/2, and B restricted there is symmetric.
  const std::size_t rk_sym = rank(symmetrize(reduced).gram());
  const std::size_t drop = rk_sym / 2 + (rk + 1) / 2;
  const std::size_t known = drop >= m ? 0 : m - drop;

  const detail::PackedForm packed(core);
  detail::IsotropicSearch search(packed, known, ceiling);
  return rad + search.run();
}

/// Independent oracle: enumerates every subspace of F_2^n through its reduced
/// row echelon basis. n <= 8.
inline std::size_t nu_brute(const BilinearForm& f) {
  const std::size_t n = f.dim();
  if (n > kMaxBruteDim) throw Error(Errc::TooLarge, "nu_brute: dimension above 8");
  const detail::PackedForm packed(f.gram());
  std::size_t best = 0;

  for (std::uint32_t pivots = 1; pivots < (1U << n); ++pivots) {
    const auto k = static_cast<std::size_t>(std::popcount(pivots));
    if (k <= best) continue;
    // Row i has its pivot at p_i and free entries at non-pivot columns after p_i.
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < n; ++c)
      if (pivots >> c & 1U) piv.push_back(c);
    std::vector<std::vector<std::size_t>> free(k);
    std::size_t total_free = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t c = piv[i] + 1; c < n; ++c)
        if (!(pivots >> c & 1U)) free[i].push_back(c);
      total_free += free[i].size();
    }
    std::vector<Word> basis(k);
    for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << total_free); ++assign) {
      std::size_t bit = 0;
      for (std::size_t i = 0; i < k; ++i) {
        Word v = Word{1} << piv[i];
        for (std::size_t c : free[i]) {
          if (assign >> bit & 1U) v |= Word{1} << c;
          ++bit;
        }
        basis[i] = v;
      }
      bool isotropic = true;
      for (std::size_t i = 0; i < k && isotropic; ++i)
        for (std::size_t j = 0; j < k && isotropic; ++j)
          if (packed.eval(basis[i], basis[j])) isotropic = false;
      if (isotropic) {
        best = k;
        break;
      }
    }
  }
  return best;
}

/// Bounds plus the exact value when n <= max_n.
inline NuBounds nu_full(const BilinearForm& f, std::size_t max_n = kDefaultMaxExactDim) {
  NuBounds b = nu_bounds(f);
  if (f.dim() <= max_n) b.exact = nu_exact(f, max_n);
  return b;
}

}  // namespace fmquad
