#pragma once

#include "vnm/common.hpp"

namespace vnm {

/// Number of columns kept per V x M block by the vector-wise stage.
inline constexpr int kSelectedColumns = 4;

/// V:N:M pattern. The compressed format only supports n == 2 (the fp16
/// 2:4 instruction); masks for gradual pruning may carry other n.
struct VnmConfig {
    int v = 1;
    int n = 2;
    int m = 4;

    double sparsity() const { return 1.0 - static_cast<double>(n) / m; }
    double ideal_speedup() const { return static_cast<double>(m) / n; }

    friend bool operator==(const VnmConfig&, const VnmConfig&) = default;
};

/// ok iff v | r, m | k, m >= 4 and n == 2.
void validate_config(Index r, Index k, const VnmConfig& cfg);

}  // namespace vnm
