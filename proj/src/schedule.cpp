#include "vnm/schedule.hpp"

#include <string>

namespace vnm {
namespace {

void check_schedule(const DecaySchedule& schedule) {
    const auto& steps = schedule.steps;
    if (schedule.beta < 0 || steps.size() != static_cast<std::size_t>(schedule.beta) + 1 ||
        steps.front() != schedule.n0 || steps.back() != schedule.n_target ||
        schedule.n_target < 1) {
        throw Error(ErrorCode::InvalidSchedule, "schedule endpoints or length inconsistent");
    }
    for (std::size_t t = 1; t < steps.size(); ++t) {
        if (steps[t] > steps[t - 1] || steps[t] < schedule.n_target) {
            throw Error(ErrorCode::InvalidSchedule, "schedule must be non-increasing");
        }
    }
}

}  // namespace

DecaySchedule make_decay_schedule(int n0, int n_target, int beta) {
    if (n_target < 2 || n0 <= n_target) {
        throw Error(ErrorCode::InvalidSchedule,
                    "need n0 > n_target >= 2, got n0 = " + std::to_string(n0) +
                        ", n_target = " + std::to_string(n_target));
    }
    if (beta < 1) throw Error(ErrorCode::InvalidSchedule, "beta must be >= 1");

    DecaySchedule schedule{n0, n_target, beta, {}};
    schedule.steps.reserve(static_cast<std::size_t>(beta) + 1);
    // value * 2 beta = 2 beta n0 - 2 t (n0 - n_target), rounded half up (value > 0).
    const long long span = n0 - n_target;
    for (long long t = 0; t <= beta; ++t) {
        const long long twice_scaled = 2LL * beta * n0 - 2LL * t * span;
        schedule.steps.push_back(static_cast<int>((twice_scaled + beta) / (2LL * beta)));
    }
    return schedule;
}

std::vector<SparsityMask> gradual_prune(const DenseMatrix& d, const VnmConfig& cfg,
                                        const DecaySchedule& schedule,
                                        const FisherProvider& fisher_provider,
                                        SaliencyMode mode) {
    check_schedule(schedule);

    std::vector<SparsityMask> masks;
    masks.reserve(schedule.steps.size());
    std::optional<SparsityMask> prev;
    for (std::size_t t = 0; t < schedule.steps.size(); ++t) {
        const VnmConfig step_cfg{cfg.v, schedule.steps[t], cfg.m};
        const DenseMatrix weights = prev ? apply_mask(d, *prev) : d;
        const FisherInverse fisher = fisher_provider(static_cast<int>(t));
        masks.push_back(so_prune_pattern(weights, fisher, step_cfg, mode, prev));
        prev = masks.back();
    }
    return masks;
}

}  // namespace vnm
