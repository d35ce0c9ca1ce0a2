#pragma once

#include "vnm/fisher.hpp"
#include "vnm/mask.hpp"
#include "vnm/saliency.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace vnm {

enum class SaliencyMode { Exact, Pairwise };
enum class ColumnSearch { Exhaustive, Greedy };

std::string_view to_string(SaliencyMode mode);
std::string_view to_string(ColumnSearch search);

/// Largest candidate count searched exhaustively, both for 4-column subsets
/// of a block (C(m, 4)) and for row-wise keep sets (C(candidates, n)).
inline constexpr std::uint64_t kExhaustiveSearchBound = 20000;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Exhaustive when C(m, 4) <= kExhaustiveSearchBound, else greedy.
ColumnSearch column_search_for(int m);

/// Second-order V:N:M pruning.
///
/// Weights are scored independently per row; the Fisher inverse must be
/// block-diagonal with block_size == m, block (i * k/m + g) covering row i's
/// group g of the row-major flattened matrix. For each block every candidate
/// 4-column subset is scored by summing, over the block's rows, the smallest
/// pruned-set saliency among the row's keep-n-of-4 patterns; the lowest total
/// wins (first in lexicographic order on ties). With `prev`, only positions
/// kept by prev may be kept; InfeasibleNesting if prev leaves a row group with
/// fewer than n of them.
SparsityMask so_prune_vnm(const DenseMatrix& d, const FisherInverse& fisher,
                          const VnmConfig& cfg, SaliencyMode mode,
                          const std::optional<SparsityMask>& prev = std::nullopt);

/// Generalization used by gradual pruning; cfg.n may be any value >= 1.
/// The per-row budget is relaxed: a row keeps at most n of its candidates, so
/// any prev is accepted.
///   n >= m     keeps every candidate position
///   4 < n < m  row-wise n:m only (no column constraint yet)
///   n <= 4     full V:n:M structure with 4 selected columns per block
SparsityMask so_prune_pattern(const DenseMatrix& d, const FisherInverse& fisher,
                              const VnmConfig& cfg, SaliencyMode mode,
                              const std::optional<SparsityMask>& prev = std::nullopt);

}  // namespace vnm
