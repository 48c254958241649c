// Walks through Q(sqrt(-1365)): Gram and Redei matrices, the isotropy index and
// the verdict, then the same form written in another basis of the radical.

#include <iostream>

#include "fmquad/fmquad.hpp"

namespace {

void print(const char* title, const fmquad::BitMatrix& m) {
  std::cout << title << '\n';
  for (const auto& row : m.to_strings()) std::cout << "  " << row << '\n';
}

}  // namespace

int main() {
  const auto rec = fmquad::build_field(-1365);
  std::cout << "disc " << fmquad::to_string(rec.disc) << ", 2-rank " << rec.n << ", 4-rank " << rec.four_rank
            << "\nbasis:";
  for (auto b : rec.basis) std::cout << ' ' << fmquad::to_string(b);
  std::cout << '\n';
  print("Gram", rec.gram.gram());
  print("Redei", rec.redei);
  std::cout << "nu in [" << rec.nu.lower << ", " << rec.nu.upper << "], exact " << *rec.nu.exact
            << "\nno uniform quotient above dimension " << rec.verdict.max_uniform_dim << '\n';

  const auto other = fmquad::gram_in_basis(rec, {-3, -5, -7, -13});
  print("Gram in -3, -5, -7, -13", other.gram());
  std::cout << "rank " << fmquad::rank(other.gram()) << ", nu " << fmquad::nu_exact(other) << '\n';
}
