#pragma once

#include <stdexcept>
#include <string>

namespace cuspcount {

enum class ErrorKind {
    NotSymmetric,
    OddDiagonal,
    Degenerate,
    UnknownName,
    BadParams,
    NonIntegralRescale,
    ZeroVector,
    NotPrimitive,
    DegenerateSublattice,
    DimensionMismatch,
    BudgetExceeded,
    NotIsometry,
    NotIsotropic,
    SubgroupNotContained,
    DivisorNotOne,
    VectorNotInComplement,
    DoesNotFixL,
    FImagesDiffer,
    NoneFoundInWindow,
    NotIsotropicPlane,
    BoundTooSmall,
    NotRank2,
    HypothesisFails,
    ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Parse failure with the byte offset into the input text.
class ParseError : public Error {
  public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(ErrorKind::ParseError,
                what + " at offset " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

} // namespace cuspcount
