#include "vnm/magnitude.hpp"

#include "vnm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace vnm {
namespace {

void check_sparsity(double s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "sparsity must lie in (0, 1], got " + std::to_string(s));
    }
}

// Indices of the `count` largest scores, ties to the lower index, returned in
// ascending index order.
template <typename Scores>
std::vector<Index> top_indices(const Scores& scores, Index count) {
    std::vector<Index> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), Index{0});
    count = std::clamp<Index>(count, 0, static_cast<Index>(order.size()));
    std::partial_sort(order.begin(), order.begin() + count, order.end(), [&](Index a, Index b) {
        return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    });
    order.resize(static_cast<std::size_t>(count));
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

Index keep_budget(Index total, double sparsity) {
    const double keep = (1.0 - sparsity) * static_cast<double>(total);
    return std::clamp<Index>(static_cast<Index>(std::ceil(keep - 1e-9)), 0, total);
}

SparsityMask magnitude_prune_vnm(const DenseMatrix& d, const VnmConfig& cfg) {
    validate_config(d.rows(), d.cols(), cfg);
    require_finite(d);
    SparsityMask mask = SparsityMask::Constant(d.rows(), d.cols(), false);
    const Index groups = d.cols() / cfg.m;

    parallel_for(0, (d.rows() / cfg.v) * groups, [&](Index block) {
        const Index br = (block / groups) * cfg.v;
        const Index col0 = (block % groups) * cfg.m;
        const auto tile = d.block(br, col0, cfg.v, cfg.m).cast<double>().cwiseAbs();

        const Eigen::VectorXd col_l1 = tile.colwise().sum().transpose();
        const auto selected = top_indices(col_l1, kSelectedColumns);

        Eigen::VectorXd row_abs(kSelectedColumns);
        for (Index i = 0; i < cfg.v; ++i) {
            for (int t = 0; t < kSelectedColumns; ++t) row_abs[t] = tile(i, selected[t]);
            for (Index t : top_indices(row_abs, cfg.n)) mask(br + i, col0 + selected[t]) = true;
        }
    });
    return mask;
}

SparsityMask magnitude_prune_unstructured(const DenseMatrix& d, double sparsity) {
    check_sparsity(sparsity);
    require_finite(d);
    const Eigen::VectorXd magnitude =
        d.cast<double>().cwiseAbs().reshaped<Eigen::RowMajor>();
    SparsityMask mask = SparsityMask::Constant(d.rows(), d.cols(), false);
    for (Index idx : top_indices(magnitude, keep_budget(d.size(), sparsity))) {
        mask.data()[idx] = true;
    }
    return mask;
}

SparsityMask magnitude_prune_vectorwise(const DenseMatrix& d, Index length, double sparsity) {
    check_sparsity(sparsity);
    if (length < 1) throw Error(ErrorCode::InvalidArgument, "vector length must be >= 1");
    if (d.rows() % length != 0) {
        throw Error(ErrorCode::NonDivisibleRows,
                    std::to_string(d.rows()) + " rows not divisible by l = " +
                        std::to_string(length));
    }
    require_finite(d);

    const Index seg_rows = d.rows() / length;
    Eigen::VectorXd l1(seg_rows * d.cols());
    for (Index sr = 0; sr < seg_rows; ++sr) {
        for (Index c = 0; c < d.cols(); ++c) {
            l1[sr * d.cols() + c] =
                d.col(c).segment(sr * length, length).cast<double>().cwiseAbs().sum();
        }
    }

    SparsityMask mask = SparsityMask::Constant(d.rows(), d.cols(), false);
    for (Index seg : top_indices(l1, keep_budget(l1.size(), sparsity))) {
        const Index sr = seg / d.cols();
        const Index c = seg % d.cols();
        mask.col(c).segment(sr * length, length).setConstant(true);
    }
    return mask;
}

}  // namespace vnm
