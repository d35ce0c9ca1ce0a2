#pragma once

#include "vnm/format.hpp"
#include "vnm/parallel.hpp"

#include <cstdint>
#include <string>

namespace vnm {

/// Triple-loop product with 64-bit accumulation, k ascending per element.
template <typename LhsScalar, typename RhsScalar>
RowMatrix<double> gemm_dense(const RowMatrix<LhsScalar>& a, const RowMatrix<RhsScalar>& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "inner dimensions " + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()));
    }
    RowMatrix<double> out = RowMatrix<double>::Zero(a.rows(), b.cols());
    parallel_for(0, a.rows(), [&](Index i) {
        for (Index kk = 0; kk < a.cols(); ++kk) {
            const double lhs = static_cast<double>(a(i, kk));
            for (Index c = 0; c < b.cols(); ++c) out(i, c) += lhs * static_cast<double>(b(kk, c));
        }
    });
    return out;
}

/// SpMM straight from the compressed operand: only the rows of b named by
/// column_loc are read. `b` is any matrix-like type with rows(), cols() and
/// operator()(row, col). Per output element the sum runs over ascending
/// columns of a, in 64-bit. Values of b are rounded through fp16 on load
/// when a is half-emulated.
template <typename BMatrix>
RowMatrix<double> spmm_reference(const VnmMatrix& a, const BMatrix& b) {
    validate_structure(a);
    if (a.k != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "a has " + std::to_string(a.k) + " columns, b has " +
                        std::to_string(b.rows()) + " rows");
    }
    const bool half = a.dtype == Dtype::HalfEmulated;
    const Index groups = a.groups();
    const int n = a.cfg.n;
    RowMatrix<double> out = RowMatrix<double>::Zero(a.r, b.cols());

    parallel_for(0, a.r, [&](Index i) {
        for (Index g = 0; g < groups; ++g) {
            const std::size_t off = a.value_offset(i, g);
            const std::size_t loc = a.column_loc_offset(i, g);
            for (int j = 0; j < n; ++j) {
                const double value = a.values[off + j];
                const Index row_of_b = g * a.cfg.m + a.column_loc[loc + a.m_indices[off + j]];
                for (Index c = 0; c < b.cols(); ++c) {
                    float rhs = static_cast<float>(b(row_of_b, c));
                    if (half) rhs = round_to_half(rhs);
                    out(i, c) += value * static_cast<double>(rhs);
                }
            }
        }
    });
    return out;
}

/// Legal fp16 sparse MMA tile shapes: m16 n8 k16 / k32.
struct TileShape {
    static constexpr Index kRows = 16;
    static constexpr Index kCols = 8;
    Index k = 32;

    static TileShape k16() { return TileShape{16}; }
    static TileShape k32() { return TileShape{32}; }
};

using MetaTile = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Plain 2:4 sparse tile MMA: c_in + A b where A (16 x k) holds each stored
/// value of a_vals (16 x k/2) at the column its 2-bit code names inside its
/// group of 4. Accumulates in Scalar, k ascending.
template <typename Scalar>
RowMatrix<Scalar> mma_sp_tile(const RowMatrix<Scalar>& a_vals, const MetaTile& meta,
                              const RowMatrix<Scalar>& b, const RowMatrix<Scalar>& c_in,
                              TileShape shape) {
    if (shape.k != 16 && shape.k != 32) {
        throw Error(ErrorCode::DimensionMismatch, "tile k must be 16 or 32");
    }
    const Index half_k = shape.k / 2;
    if (a_vals.rows() != TileShape::kRows || a_vals.cols() != half_k ||
        meta.rows() != TileShape::kRows || meta.cols() != half_k || b.rows() != shape.k ||
        b.cols() != TileShape::kCols || c_in.rows() != TileShape::kRows ||
        c_in.cols() != TileShape::kCols) {
        throw Error(ErrorCode::DimensionMismatch, "operands do not match the m16n8 tile");
    }
    for (Index r = 0; r < meta.rows(); ++r) {
        for (Index j = 0; j < half_k; j += 2) {
            if (meta(r, j) >= 4 || meta(r, j + 1) >= 4 || meta(r, j) >= meta(r, j + 1)) {
                throw Error(ErrorCode::IllegalMetadata,
                            "codes must lie in [0, 4) and increase within each pair");
            }
        }
    }

    RowMatrix<Scalar> out = c_in;
    for (Index r = 0; r < TileShape::kRows; ++r) {
        for (Index j = 0; j < half_k; ++j) {
            const Index col = (j / 2) * 4 + meta(r, j);
            for (Index c = 0; c < TileShape::kCols; ++c) out(r, c) += a_vals(r, j) * b(col, c);
        }
    }
    return out;
}

/// Analytical operation and byte counts for an r x k (V:N:M) by k x c SpMM.
struct CostReport {
    std::uint64_t dense_macs = 0;
    std::uint64_t sparse_macs = 0;
    /// Rows of B loaded per block-row: 4 per block-column, 4 (k/m) of k.
    std::uint64_t b_rows_loaded = 0;
    std::uint64_t column_loc_bytes = 0;
    std::uint64_t metadata_bytes = 0;
    double ideal_speedup = 0.0;
};

CostReport cost_model(Index r, Index k, Index c, const VnmConfig& cfg);

}  // namespace vnm
