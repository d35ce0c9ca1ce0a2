#include "vnm/saliency.hpp"

#include <string>

namespace vnm {
namespace {

void combinations(int group, int keep, int start, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == keep) {
        out.push_back(current);
        return;
    }
    for (int i = start; i < group; ++i) {
        current.push_back(i);
        combinations(group, keep, i + 1, current, out);
        current.pop_back();
    }
}

void check_subset(Index group, std::span<const int> q) {
    for (int idx : q) {
        if (idx < 0 || idx >= group) {
            throw Error(ErrorCode::DimensionMismatch,
                        "index " + std::to_string(idx) + " outside group of " +
                            std::to_string(group));
        }
    }
}

}  // namespace

CandidateSet CandidateSet::keep_patterns(int group, int keep) {
    if (group < 0 || keep < 0 || keep > group) {
        throw Error(ErrorCode::InvalidArgument, "keep must lie in [0, group]");
    }
    CandidateSet set;
    std::vector<int> current;
    combinations(group, keep, 0, current, set.selectors);
    return set;
}

CandidateSet CandidateSet::pairwise(int i, int j) {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "pair indices must differ");
    return CandidateSet{{{i}, {j}, {i, j}}};
}

double saliency_exact(const Eigen::Ref<const Eigen::VectorXd>& w_q,
                      const Eigen::Ref<const Eigen::MatrixXd>& finv_qq) {
    if (finv_qq.rows() != w_q.size() || finv_qq.cols() != w_q.size()) {
        throw Error(ErrorCode::DimensionMismatch, "Finv_QQ must be |Q| x |Q|");
    }
    if (w_q.size() == 0) return 0.0;
    if (w_q.size() == 1) {
        if (!(finv_qq(0, 0) > 0.0)) throw Error(ErrorCode::SingularSubmatrix, "Finv_QQ <= 0");
        return 0.5 * w_q[0] * w_q[0] / finv_qq(0, 0);
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(finv_qq);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularSubmatrix, "Finv_QQ is not positive definite");
    }
    // 1/2 w^T (L L^T)^-1 w = 1/2 |L^-1 w|^2
    const Eigen::VectorXd y = llt.matrixL().solve(w_q);
    return 0.5 * y.squaredNorm();
}

double saliency_exact_subset(const Eigen::Ref<const Eigen::VectorXd>& w_group,
                             const Eigen::Ref<const Eigen::MatrixXd>& finv_block,
                             std::span<const int> q) {
    if (finv_block.rows() != w_group.size() || finv_block.cols() != w_group.size()) {
        throw Error(ErrorCode::DimensionMismatch, "Fisher block does not match group size");
    }
    check_subset(w_group.size(), q);
    const auto size = static_cast<Index>(q.size());
    Eigen::VectorXd w_q(size);
    Eigen::MatrixXd finv_qq(size, size);
    for (Index a = 0; a < size; ++a) {
        w_q[a] = w_group[q[a]];
        for (Index b = 0; b < size; ++b) finv_qq(a, b) = finv_block(q[a], q[b]);
    }
    return saliency_exact(w_q, finv_qq);
}

double saliency_pairwise(const Eigen::Ref<const Eigen::VectorXd>& w_group,
                         const Eigen::Ref<const Eigen::MatrixXd>& finv_block,
                         std::span<const int> q) {
    if (finv_block.rows() != w_group.size() || finv_block.cols() != w_group.size()) {
        throw Error(ErrorCode::DimensionMismatch, "Fisher block does not match group size");
    }
    check_subset(w_group.size(), q);
    if (q.size() <= 2) return saliency_exact_subset(w_group, finv_block, q);
    std::vector<double> single(q.size());
    double total = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
        const int idx[] = {q[a]};
        single[a] = saliency_exact_subset(w_group, finv_block, idx);
        total += single[a];
    }
    for (std::size_t a = 0; a < q.size(); ++a) {
        for (std::size_t b = a + 1; b < q.size(); ++b) {
            const int pair[] = {q[a], q[b]};
            total += saliency_exact_subset(w_group, finv_block, pair) - single[a] - single[b];
        }
    }
    return total;
}

}  // namespace vnm
