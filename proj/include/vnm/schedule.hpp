#pragma once

#include "vnm/second_order.hpp"

#include <functional>
#include <vector>

namespace vnm {

/// N per gradual-pruning step: steps[0] = n0, steps[beta] = n_target.
struct DecaySchedule {
    int n0 = 0;
    int n_target = 0;
    int beta = 0;
    std::vector<int> steps;
};

/// Linear decay in N rounded half away from zero:
/// steps[t] = round(n0 - t (n0 - n_target) / beta).
DecaySchedule make_decay_schedule(int n0, int n_target, int beta);

/// Supplies the finalized Fisher inverse to use at a given step.
using FisherProvider = std::function<FisherInverse(int step)>;

/// Prunes d through the schedule with nested masks. Step t scores the
/// weights d masked by step t-1 and may only keep positions step t-1 kept.
/// Returns one mask per step; the last is valid V:n_target:M.
std::vector<SparsityMask> gradual_prune(const DenseMatrix& d, const VnmConfig& cfg,
                                        const DecaySchedule& schedule,
                                        const FisherProvider& fisher_provider,
                                        SaliencyMode mode);

}  // namespace vnm
