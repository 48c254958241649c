#pragma once

// Dense linear algebra over F_2 on bit-packed rows.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fmquad/error.hpp"

namespace fmquad {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

/// A vector over F_2. Bits past size() are kept zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  [[nodiscard]] bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool v = true) {
    const Word mask = Word{1} << (i % kWordBits);
    if (v) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

  BitVector& operator^=(const BitVector& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }

  [[nodiscard]] bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Inner product over F_2.
  [[nodiscard]] bool dot(const BitVector& o) const {
    Word acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
    return std::popcount(acc) & 1;
  }

  [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }
  [[nodiscard]] std::span<Word> words() noexcept { return words_; }

  [[nodiscard]] std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

/// Dense rows x cols matrix over F_2, row-major, each row padded to whole words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  /// Builds from strings of '0'/'1' characters, one per row. Spaces are ignored.
  static BitMatrix from_strings(const std::vector<std::string>& rows) {
    std::vector<std::string> clean;
    clean.reserve(rows.size());
    for (const auto& r : rows) {
      std::string c;
      for (char ch : r) {
        if (ch == '0' || ch == '1') {
          c.push_back(ch);
        } else if (ch != ' ' && ch != '\t') {
          throw Error(Errc::Parse, "unexpected character in matrix row: '" + r + "'");
        }
      }
      clean.push_back(std::move(c));
    }
    const std::size_t cols = clean.empty() ? 0 : clean.front().size();
    BitMatrix m(clean.size(), cols);
    for (std::size_t i = 0; i < clean.size(); ++i) {
      if (clean[i].size() != cols) throw Error(Errc::Parse, "ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j)
        if (clean[i][j] == '1') m.set(i, j);
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

  [[nodiscard]] bool get(std::size_t i, std::size_t j) const {
    return (data_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool v = true) {
    Word& w = data_[i * stride_ + j / kWordBits];
    const Word mask = Word{1} << (j % kWordBits);
    w = v ? (w | mask) : (w & ~mask);
  }
  void flip(std::size_t i, std::size_t j) { data_[i * stride_ + j / kWordBits] ^= Word{1} << (j % kWordBits); }

  [[nodiscard]] std::span<const Word> row(std::size_t i) const { return {data_.data() + i * stride_, stride_}; }
  [[nodiscard]] std::span<Word> row(std::size_t i) { return {data_.data() + i * stride_, stride_}; }

  /// Row i as a single word; only valid when cols() <= 64.
  [[nodiscard]] Word row_word(std::size_t i) const { return stride_ == 0 ? 0 : data_[i * stride_]; }

  void xor_row_into(std::size_t src, std::size_t dst) {
    for (std::size_t w = 0; w < stride_; ++w) data_[dst * stride_ + w] ^= data_[src * stride_ + w];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < stride_; ++w) std::swap(data_[a * stride_ + w], data_[b * stride_ + w]);
  }

  [[nodiscard]] BitVector row_vector(std::size_t i) const {
    BitVector v(cols_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * stride_), stride_, v.words().begin());
    return v;
  }

  [[nodiscard]] BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i);
    return t;
  }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Word w) { return w == 0; });
  }

  [[nodiscard]] bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (get(i, j) != get(j, i)) return false;
    return true;
  }

  [[nodiscard]] bool zero_diagonal() const {
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
      if (get(i, i)) return false;
    return true;
  }

  BitMatrix& operator+=(const BitMatrix& o) {
    for (std::size_t w = 0; w < data_.size(); ++w) data_[w] ^= o.data_[w];
    return *this;
  }
  friend BitMatrix operator+(BitMatrix a, const BitMatrix& b) { return a += b; }

  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a.get(i, k))
          for (std::size_t w = 0; w < c.stride_; ++w) c.data_[i * c.stride_ + w] ^= b.data_[k * b.stride_ + w];
    return c;
  }

  /// m * v for a column vector v of length cols().
  [[nodiscard]] BitVector apply(const BitVector& v) const {
    BitVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Word acc = 0;
      for (std::size_t w = 0; w < stride_; ++w) acc ^= data_[i * stride_ + w] & v.words()[w];
      if (std::popcount(acc) & 1) out.set(i);
    }
    return out;
  }

  /// Sum of all rows, as a vector of length cols().
  [[nodiscard]] BitVector row_sum() const {
    BitVector s(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t w = 0; w < stride_; ++w) s.words()[w] ^= data_[i * stride_ + w];
    return s;
  }

  /// Sub-block [r0, r0+nr) x [c0, c0+nc).
  [[nodiscard]] BitMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    BitMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        if (get(r0 + i, c0 + j)) b.set(i, j);
    return b;
  }

  [[nodiscard]] std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i).to_string());
    return out;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

namespace detail {

/// Reduces m in place to reduced row echelon form; returns pivot column of each
/// nonzero row, in order.
inline std::vector<std::size_t> rref_in_place(BitMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m.get(i, c)) m.xor_row_into(r, i);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

/// Row rank over F_2. The argument is copied, never mutated.
inline std::size_t rank(BitMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i)
      if (m.get(i, c)) m.xor_row_into(r, i);
    ++r;
  }
  return r;
}

/// Basis of the right kernel {x : m x = 0}; cols() - rank(m) vectors.
inline std::vector<BitVector> kernel_basis(const BitMatrix& m) {
  BitMatrix e = m;
  const auto pivots = detail::rref_in_place(e);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    BitVector v(m.cols());
    v.set(free);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (e.get(r, free)) v.set(pivots[r]);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Inverse over F_2, or empty optional-like result signalled by `ok == false`.
struct InverseResult {
  bool ok = false;
  BitMatrix inverse;
};

inline InverseResult inverse(const BitMatrix& m) {
  if (!m.square()) throw Error(Errc::NonSquare, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  BitMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (m.get(i, j)) aug.set(i, j);
    aug.set(i, n + i);
  }
  const auto pivots = detail::rref_in_place(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] >= n)) return {};
  return {true, aug.block(0, n, n, n)};
}

/// Solves m x = b; returns one solution, or ok == false when inconsistent.
struct SolveResult {
  bool ok = false;
  BitVector x;
};

inline SolveResult solve(const BitMatrix& m, const BitVector& b) {
  BitMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.get(i, j)) aug.set(i, j);
    if (b.get(i)) aug.set(i, m.cols());
  }
  const auto pivots = detail::rref_in_place(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return {};
  BitVector x(m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    if (aug.get(r, m.cols())) x.set(pivots[r]);
  return {true, std::move(x)};
}

/// Gram matrix in a new basis: E^T M E, where column j of E holds the old-basis
/// coordinates of the j-th new basis vector.
inline BitMatrix congruence(const BitMatrix& m, const BitMatrix& e) {
  if (!m.square()) throw Error(Errc::NonSquare, "congruence: Gram matrix is not square");
  if (!e.square() || e.rows() != m.rows())
    throw Error(Errc::NonSquare, "congruence: basis matrix must be n x n");
  if (rank(e) != e.rows()) throw Error(Errc::SingularBasis, "congruence: basis matrix is not invertible");
  return e.transpose() * m * e;
}

// Text format: first line n, then n lines of n entries from {0,1} separated by
// spaces. Entry (i, j) is B(e_i, e_j).

inline BitMatrix read_matrix(std::istream& in) {
  long long n = -1;
  if (!(in >> n) || n < 0) throw Error(Errc::Parse, "matrix text: expected dimension on first line");
  const auto dim = static_cast<std::size_t>(n);
  BitMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::string tok;
      if (!(in >> tok) || (tok != "0" && tok != "1"))
        throw Error(Errc::Parse, "matrix text: bad entry at row " + std::to_string(i + 1));
      if (tok == "1") m.set(i, j);
    }
  }
  return m;
}

inline void write_matrix(std::ostream& out, const BitMatrix& m) {
  out << m.rows() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << (m.get(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

}  // namespace fmquad
