#pragma once

#include "vnm/common.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace vnm {

/// Index subsets over a weight group (canonical-basis selectors).
struct CandidateSet {
    std::vector<std::vector<int>> selectors;

    /// All `keep`-element subsets of {0..group-1} in lexicographic order.
    /// keep_patterns(4, 2) = {01, 02, 03, 12, 13, 23}.
    static CandidateSet keep_patterns(int group, int keep);

    /// The pair-wise selectors {i}, {j}, {i, j} for the pair (i, j).
    static CandidateSet pairwise(int i, int j);

    std::size_t size() const { return selectors.size(); }
};

/// Loss increase from removing the weights w_Q: 1/2 w_Q^T (Finv_QQ)^-1 w_Q.
/// Throws SingularSubmatrix when Finv_QQ is not positive definite.
double saliency_exact(const Eigen::Ref<const Eigen::VectorXd>& w_q,
                      const Eigen::Ref<const Eigen::MatrixXd>& finv_qq);

/// Second-order inclusion-exclusion approximation of saliency_exact over Q:
/// sum of singleton scores plus, for each pair, rho_ij - rho_i - rho_j.
/// Exact when |Q| <= 2 or Finv is diagonal.
double saliency_pairwise(const Eigen::Ref<const Eigen::VectorXd>& w_group,
                         const Eigen::Ref<const Eigen::MatrixXd>& finv_block,
                         std::span<const int> q);

/// saliency_exact on the sub-vector and sub-matrix picked by q.
double saliency_exact_subset(const Eigen::Ref<const Eigen::VectorXd>& w_group,
                             const Eigen::Ref<const Eigen::MatrixXd>& finv_block,
                             std::span<const int> q);

}  // namespace vnm
