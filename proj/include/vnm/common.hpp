#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vnm {

using Index = Eigen::Index;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uncompressed operand, 32-bit storage, row-major.
using DenseMatrix = RowMatrix<float>;

/// Keep/drop matrix shared between pruning and compression.
using SparsityMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ErrorCode {
    NonDivisibleRows,
    NonDivisibleCols,
    UnsupportedPattern,
    InvalidMask,
    ShapeMismatch,
    CorruptMetadata,
    NonFinite,
    LengthMismatch,
    NoSamples,
    SingularSubmatrix,
    FisherShapeMismatch,
    InfeasibleNesting,
    InvalidSchedule,
    InvalidArgument,
    DimensionMismatch,
    IllegalMetadata,
    ZeroDenominator,
    UnrealizableSparsity,
    BadFormat,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Throws NonFinite if any entry is NaN or Inf.
void require_finite(const DenseMatrix& d, std::string_view what = "matrix");

/// Rounds a value through IEEE binary16 and back.
float round_to_half(float x);

}  // namespace vnm
