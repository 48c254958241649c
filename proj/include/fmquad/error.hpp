#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fmquad {

enum class Errc {
  NonSquare,
  SingularBasis,
  NotSymmetric,
  TooLarge,
  NotOddPrime,
  NotNegative,
  NotSquarefree,
  BadDiscriminant,
  DiscMismatch,
  EmptyBucket,
  IoError,
  BasisNotInRadical,
  Parse,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::SingularBasis: return "SingularBasis";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotOddPrime: return "NotOddPrime";
    case Errc::NotNegative: return "NotNegative";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::BadDiscriminant: return "BadDiscriminant";
    case Errc::DiscMismatch: return "DiscMismatch";
    case Errc::EmptyBucket: return "EmptyBucket";
    case Errc::IoError: return "IoError";
    case Errc::BasisNotInRadical: return "BasisNotInRadical";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every library failure carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fmquad
