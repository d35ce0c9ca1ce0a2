#include "vnm/format.hpp"

#include "vnm/parallel.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

namespace vnm {

void validate_structure(const VnmMatrix& s) {
    const auto& cfg = s.cfg;
    if (cfg.n != 2 || cfg.m < kSelectedColumns || cfg.v < 1 || s.r < 0 || s.k < 0 ||
        s.r % cfg.v != 0 || s.k % cfg.m != 0) {
        throw Error(ErrorCode::CorruptMetadata, "inconsistent shape or pattern");
    }
    if (s.values.size() != s.value_count() || s.m_indices.size() != s.value_count() ||
        s.column_loc.size() != s.column_loc_count()) {
        throw Error(ErrorCode::CorruptMetadata, "structure sizes do not match shape");
    }
    for (std::size_t base = 0; base < s.column_loc.size(); base += kSelectedColumns) {
        for (int t = 0; t < kSelectedColumns; ++t) {
            const int col = s.column_loc[base + t];
            if (col >= cfg.m) {
                throw Error(ErrorCode::CorruptMetadata,
                            "column_loc entry " + std::to_string(col) + " outside block");
            }
            if (t > 0 && col <= s.column_loc[base + t - 1]) {
                throw Error(ErrorCode::CorruptMetadata, "column_loc not strictly increasing");
            }
        }
    }
    for (std::size_t base = 0; base < s.m_indices.size(); base += cfg.n) {
        for (int j = 0; j < cfg.n; ++j) {
            const int code = s.m_indices[base + j];
            if (code >= kSelectedColumns) {
                throw Error(ErrorCode::CorruptMetadata, "m-index code out of range");
            }
            if (j > 0 && code <= s.m_indices[base + j - 1]) {
                throw Error(ErrorCode::CorruptMetadata, "m-index codes duplicate or unordered");
            }
        }
    }
}

VnmMatrix compress(const DenseMatrix& d, const SparsityMask& mask, const VnmConfig& cfg,
                   CompressOptions options) {
    if (d.rows() != mask.rows() || d.cols() != mask.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "mask shape differs from matrix shape");
    }
    validate_config(d.rows(), d.cols(), cfg);
    if (cfg.m > std::numeric_limits<std::uint16_t>::max() + 1) {
        throw Error(ErrorCode::UnsupportedPattern, "m exceeds the 16-bit column_loc range");
    }
    require_finite(d);
    if (!vnm_valid(mask, cfg)) {
        throw Error(ErrorCode::InvalidMask, "mask violates the V:N:M pattern");
    }

    VnmMatrix s;
    s.r = d.rows();
    s.k = d.cols();
    s.cfg = cfg;
    s.dtype = options.half_emulation ? Dtype::HalfEmulated : Dtype::Real32;
    s.values.assign(s.value_count(), 0.0f);
    s.m_indices.assign(s.value_count(), 0);
    s.column_loc.assign(s.column_loc_count(), 0);

    const Index groups = s.groups();
    parallel_for(0, s.block_rows() * groups, [&](Index block) {
        const Index br = (block / groups) * cfg.v;
        const Index g = block % groups;
        const Index col0 = g * cfg.m;
        const auto tile = mask.block(br, col0, cfg.v, cfg.m);

        // Used columns first, then the smallest unused ones; both ascending.
        std::array<int, kSelectedColumns> selected{};
        int used = 0;
        for (int c = 0; c < cfg.m && used < kSelectedColumns; ++c) {
            if (tile.col(c).any()) selected[used++] = c;
        }
        for (int c = 0; c < cfg.m && used < kSelectedColumns; ++c) {
            bool taken = false;
            for (int t = 0; t < used; ++t) taken = taken || selected[t] == c;
            if (!taken && !tile.col(c).any()) selected[used++] = c;
        }
        std::sort(selected.begin(), selected.end());
        const std::size_t loc = s.column_loc_offset(br, g);
        for (int t = 0; t < kSelectedColumns; ++t) {
            s.column_loc[loc + t] = static_cast<std::uint16_t>(selected[t]);
        }

        for (Index i = br; i < br + cfg.v; ++i) {
            std::array<bool, kSelectedColumns> occupied{};
            int kept = 0;
            for (int t = 0; t < kSelectedColumns; ++t) {
                if (mask(i, col0 + selected[t])) {
                    occupied[t] = true;
                    ++kept;
                }
            }
            for (int t = 0; t < kSelectedColumns && kept < cfg.n; ++t) {
                if (!occupied[t]) {
                    occupied[t] = true;
                    ++kept;
                }
            }
            const std::size_t off = s.value_offset(i, g);
            int j = 0;
            for (int t = 0; t < kSelectedColumns; ++t) {
                if (!occupied[t]) continue;
                float value = mask(i, col0 + selected[t]) ? d(i, col0 + selected[t]) : 0.0f;
                if (options.half_emulation) value = round_to_half(value);
                s.values[off + j] = value;
                s.m_indices[off + j] = static_cast<std::uint8_t>(t);
                ++j;
            }
        }
    });
    return s;
}

DenseMatrix decompress(const VnmMatrix& s) {
    validate_structure(s);
    DenseMatrix out = DenseMatrix::Zero(s.r, s.k);
    const Index groups = s.groups();
    for (Index i = 0; i < s.r; ++i) {
        for (Index g = 0; g < groups; ++g) {
            const std::size_t off = s.value_offset(i, g);
            const std::size_t loc = s.column_loc_offset(i, g);
            for (int j = 0; j < s.cfg.n; ++j) {
                out(i, g * s.cfg.m + s.column_loc[loc + s.m_indices[off + j]]) = s.values[off + j];
            }
        }
    }
    return out;
}

SparsityMask mask_of(const VnmMatrix& s) {
    validate_structure(s);
    SparsityMask mask = SparsityMask::Constant(s.r, s.k, false);
    const Index groups = s.groups();
    for (Index i = 0; i < s.r; ++i) {
        for (Index g = 0; g < groups; ++g) {
            const std::size_t off = s.value_offset(i, g);
            const std::size_t loc = s.column_loc_offset(i, g);
            for (int j = 0; j < s.cfg.n; ++j) {
                mask(i, g * s.cfg.m + s.column_loc[loc + s.m_indices[off + j]]) = true;
            }
        }
    }
    return mask;
}

}  // namespace vnm
