#pragma once

#include "vnm/mask.hpp"

#include <cstdint>
#include <vector>

namespace vnm {

enum class Dtype : std::uint8_t {
    Real32 = 0,
    HalfEmulated = 1,  ///< 32-bit storage, every value rounded through fp16
};

/// Compressed V:N:M operand.
///
/// Canonical order: row i outer, then block-column g, then ascending m-index.
///   values     [(i * groups + g) * n + j]
///   m_indices  [(i * groups + g) * n + j]   code in [0, 4), strictly increasing in j
///   column_loc [((i / v) * groups + g) * 4 + t]   strictly increasing in t, < m
/// where groups = k / m. A stored value may be zero (padding or kept zero).
struct VnmMatrix {
    Index r = 0;
    Index k = 0;
    VnmConfig cfg{};
    Dtype dtype = Dtype::Real32;
    std::vector<float> values;
    std::vector<std::uint8_t> m_indices;
    std::vector<std::uint16_t> column_loc;

    Index groups() const { return k / cfg.m; }
    Index block_rows() const { return r / cfg.v; }
    std::size_t value_count() const { return static_cast<std::size_t>(r * groups() * cfg.n); }
    std::size_t column_loc_count() const {
        return static_cast<std::size_t>(block_rows() * groups() * kSelectedColumns);
    }

    std::size_t value_offset(Index row, Index group) const {
        return static_cast<std::size_t>((row * groups() + group) * cfg.n);
    }
    std::size_t column_loc_offset(Index row, Index group) const {
        return static_cast<std::size_t>(((row / cfg.v) * groups() + group) * kSelectedColumns);
    }

    friend bool operator==(const VnmMatrix&, const VnmMatrix&) = default;
};

/// Throws CorruptMetadata unless shapes, codes and column_loc satisfy the
/// canonical-form invariants.
void validate_structure(const VnmMatrix& s);

struct CompressOptions {
    bool half_emulation = false;
};

/// Packs the kept entries of d into the three-structure layout. Blocks with
/// fewer than 4 used columns are padded with the smallest unused columns;
/// rows with fewer than n kept entries are padded with zeros at the smallest
/// unused codes.
VnmMatrix compress(const DenseMatrix& d, const SparsityMask& mask, const VnmConfig& cfg,
                   CompressOptions options = {});

DenseMatrix decompress(const VnmMatrix& s);

/// Structural positions of s (padding included), so the popcount is always
/// r * (k/m) * n.
SparsityMask mask_of(const VnmMatrix& s);

}  // namespace vnm
