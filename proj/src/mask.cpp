#include "vnm/mask.hpp"

namespace vnm {

bool vnm_valid(const SparsityMask& mask, const VnmConfig& cfg) {
    const Index rows = mask.rows();
    const Index cols = mask.cols();
    if (cfg.v < 1 || cfg.m < 1 || rows % cfg.v != 0 || cols % cfg.m != 0) return false;

    for (Index br = 0; br < rows; br += cfg.v) {
        for (Index bc = 0; bc < cols; bc += cfg.m) {
            const auto block = mask.block(br, bc, cfg.v, cfg.m);
            const Index used_cols = block.colwise().any().count();
            if (used_cols > kSelectedColumns) return false;
            if ((block.rowwise().count().array() > cfg.n).any()) return false;
        }
    }
    return true;
}

bool nm_rowwise_valid(const SparsityMask& mask, int n, int m) {
    if (m < 1 || mask.cols() % m != 0) return false;
    for (Index i = 0; i < mask.rows(); ++i) {
        for (Index g = 0; g < mask.cols(); g += m) {
            if (mask.row(i).segment(g, m).count() > n) return false;
        }
    }
    return true;
}

bool mask_subset(const SparsityMask& inner, const SparsityMask& outer) {
    if (inner.rows() != outer.rows() || inner.cols() != outer.cols()) return false;
    return !(inner && !outer).any();
}

Index kept_count(const SparsityMask& mask) { return mask.count(); }

DenseMatrix apply_mask(const DenseMatrix& d, const SparsityMask& mask) {
    if (d.rows() != mask.rows() || d.cols() != mask.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "mask shape differs from matrix shape");
    }
    return mask.select(d.array(), 0.0f).matrix();
}

}  // namespace vnm
