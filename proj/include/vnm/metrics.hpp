#pragma once

#include "vnm/mask.hpp"

#include <string>
#include <vector>

namespace vnm {

/// Kept absolute mass over total absolute mass, in [0, 1].
/// Throws ZeroDenominator for an all-zero matrix.
double energy(const DenseMatrix& d, const SparsityMask& mask);

/// Weight selection policy compared in an energy sweep.
struct PrunePolicy {
    enum class Kind { Unstructured, Vnm, VectorWise };
    Kind kind = Kind::Unstructured;
    /// V for Vnm, vector length l for VectorWise.
    Index length = 1;

    static PrunePolicy unstructured() { return {Kind::Unstructured, 1}; }
    static PrunePolicy vnm(Index v) { return {Kind::Vnm, v}; }
    static PrunePolicy vector_wise(Index l) { return {Kind::VectorWise, l}; }

    /// "unstructured", "vnm_<V>" or "vw_<l>".
    std::string name() const;
    static PrunePolicy parse(const std::string& name);
};

struct EnergyReport {
    std::string policy;
    double sparsity = 0.0;
    double energy = 0.0;
};

/// Smallest-M n:m pattern with 1 - 2/m == s, or UnrealizableSparsity.
int vnm_m_for_sparsity(double sparsity);

/// One report per (policy, sparsity) pair, policy-major. V:N:M points need
/// s = 1 - 2/m for an integer m >= 4; unstructured and vector-wise use the
/// same s, so every policy keeps the same budget at a grid point.
std::vector<EnergyReport> energy_sweep(const DenseMatrix& d,
                                       const std::vector<PrunePolicy>& policies,
                                       const std::vector<double>& sparsities);

std::string energy_csv(const std::vector<EnergyReport>& reports);

}  // namespace vnm
