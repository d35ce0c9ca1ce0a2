#include "vnm/fisher.hpp"

#include <string>

namespace vnm {

FisherInverse FisherInverse::identity(Index dim, Index block_size, double damp) {
    if (block_size < 1 || dim % block_size != 0) {
        throw Error(ErrorCode::FisherShapeMismatch, "block size must divide the dimension");
    }
    if (!(damp > 0.0)) throw Error(ErrorCode::InvalidArgument, "damp must be positive");
    FisherInverse inv;
    inv.dim = dim;
    inv.block_size = block_size;
    inv.blocks.assign(static_cast<std::size_t>(dim / block_size),
                      Eigen::MatrixXd::Identity(block_size, block_size) / damp);
    return inv;
}

FisherEstimator::FisherEstimator(Index dim, Index block_size, std::optional<double> damp)
    : dim_(dim), block_size_(block_size), damp_(damp) {
    if (block_size < 1 || dim < 0 || dim % block_size != 0) {
        throw Error(ErrorCode::FisherShapeMismatch,
                    "block size " + std::to_string(block_size) + " does not divide " +
                        std::to_string(dim));
    }
    if (damp && !(*damp > 0.0)) throw Error(ErrorCode::InvalidArgument, "damp must be positive");
    blocks_.assign(static_cast<std::size_t>(dim / block_size),
                   Eigen::MatrixXd::Zero(block_size, block_size));
}

void FisherEstimator::add_sample(const Eigen::Ref<const Eigen::VectorXd>& grad) {
    if (grad.size() != dim_) {
        throw Error(ErrorCode::LengthMismatch, "gradient length " + std::to_string(grad.size()) +
                                                   " != " + std::to_string(dim_));
    }
    if (!grad.allFinite()) throw Error(ErrorCode::NonFinite, "gradient contains NaN or Inf");
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto slice = grad.segment(static_cast<Index>(b) * block_size_, block_size_);
        blocks_[b].noalias() += slice * slice.transpose();
    }
    ++samples_;
}

double FisherEstimator::effective_damp() const {
    if (damp_) return *damp_;
    if (samples_ == 0 || dim_ == 0) return 1.0;
    double trace = 0.0;
    for (const auto& block : blocks_) trace += block.diagonal().sum();
    const double mean_diag = trace / static_cast<double>(samples_) / static_cast<double>(dim_);
    return mean_diag > 0.0 ? 1e-4 * mean_diag : 1.0;
}

FisherInverse FisherEstimator::finalize() const {
    if (samples_ < 1) throw Error(ErrorCode::NoSamples, "Fisher estimator has no samples");
    const double damp = effective_damp();
    const double scale = 1.0 / static_cast<double>(samples_);

    FisherInverse inv;
    inv.dim = dim_;
    inv.block_size = block_size_;
    inv.blocks.reserve(blocks_.size());
    for (const auto& acc : blocks_) {
        Eigen::MatrixXd fisher = scale * acc;
        fisher.diagonal().array() += damp;
        Eigen::MatrixXd block = fisher.inverse();
        inv.blocks.push_back(0.5 * (block + block.transpose()));
    }
    return inv;
}

}  // namespace vnm
