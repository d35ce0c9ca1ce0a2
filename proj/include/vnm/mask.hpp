#pragma once

#include "vnm/config.hpp"

namespace vnm {

/// V:N:M validity: within every V x M block at most 4 distinct columns hold
/// kept entries, and each row of the block keeps at most n of them.
/// Works for any n (gradual pruning uses n > 2). False on non-divisible shapes.
bool vnm_valid(const SparsityMask& mask, const VnmConfig& cfg);

/// Row-wise n:m validity: every row keeps at most n entries per m-wide group.
bool nm_rowwise_valid(const SparsityMask& mask, int n, int m);

/// True when every kept entry of `inner` is also kept by `outer`.
bool mask_subset(const SparsityMask& inner, const SparsityMask& outer);

Index kept_count(const SparsityMask& mask);

/// d with dropped entries set to zero.
DenseMatrix apply_mask(const DenseMatrix& d, const SparsityMask& mask);

}  // namespace vnm
