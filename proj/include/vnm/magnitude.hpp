#pragma once

#include "vnm/mask.hpp"

namespace vnm {

/// Two-level magnitude pruning. Per V x M block the 4 columns with the largest
/// L1 norm over the block's rows are selected, then each row keeps its n
/// largest-|w| entries among them. Ties go to the lower index.
SparsityMask magnitude_prune_vnm(const DenseMatrix& d, const VnmConfig& cfg);

/// Keeps the ceil((1 - s) * size) largest-|w| entries, ties by linear index.
SparsityMask magnitude_prune_unstructured(const DenseMatrix& d, double sparsity);

/// Keeps whole length-l column segments ranked by L1 norm; the budget is
/// ceil((1 - s) * (rows / l) * cols) segments, ties by segment index
/// (segment row major).
SparsityMask magnitude_prune_vectorwise(const DenseMatrix& d, Index length, double sparsity);

/// Number of entries kept at sparsity s out of `total`. Tolerates the
/// rounding of s values such as 1 - 2/m.
Index keep_budget(Index total, double sparsity);

}  // namespace vnm
