#pragma once

#include "vnm/common.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace vnm {

/// Finalized inverse of a block-diagonal empirical Fisher. Block b covers
/// weights [b * block_size, (b + 1) * block_size) of the flattened tensor.
struct FisherInverse {
    Index dim = 0;
    Index block_size = 0;
    std::vector<Eigen::MatrixXd> blocks;

    Index block_count() const { return static_cast<Index>(blocks.size()); }
    const Eigen::MatrixXd& block(Index b) const { return blocks[static_cast<std::size_t>(b)]; }

    /// damp * I inverted, i.e. (1/damp) * I per block, as if no gradient
    /// information were available.
    static FisherInverse identity(Index dim, Index block_size, double damp = 1.0);
};

/// Block-diagonal empirical Fisher accumulator. Samples must be added from
/// one thread at a time.
class FisherEstimator {
public:
    /// damp unset selects 1e-4 * mean(diag) of the averaged Fisher at
    /// finalize time (1.0 when that mean is zero).
    FisherEstimator(Index dim, Index block_size, std::optional<double> damp = std::nullopt);

    void add_sample(const Eigen::Ref<const Eigen::VectorXd>& grad);

    /// (damp I + (1/count) sum g g^T)^-1 per block, symmetrized.
    FisherInverse finalize() const;

    Index dim() const { return dim_; }
    Index block_size() const { return block_size_; }
    Index sample_count() const { return samples_; }
    const std::vector<Eigen::MatrixXd>& accumulated() const { return blocks_; }

    /// The dampening finalize() will apply.
    double effective_damp() const;

private:
    Index dim_;
    Index block_size_;
    std::optional<double> damp_;
    Index samples_ = 0;
    std::vector<Eigen::MatrixXd> blocks_;
};

}  // namespace vnm
