#include "vnm/second_order.hpp"

#include "vnm/parallel.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

namespace vnm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pruned-set saliency of one row's m-wide group, as a function of the set of
// positions the row keeps. The pruned set is always the complement.
class RowScorer {
public:
    RowScorer(Eigen::VectorXd w, const Eigen::MatrixXd& finv, SaliencyMode mode)
        : w_(std::move(w)), finv_(finv), mode_(mode) {}

    Index size() const { return w_.size(); }

    double singleton(int i) const { return 0.5 * w_[i] * w_[i] / finv_(i, i); }

    double pruned_score(std::span<const int> kept) {
        const Index pruned_count = size() - static_cast<Index>(kept.size());
        if (mode_ == SaliencyMode::Exact || pruned_count <= 2) {
            const auto q = complement(kept);
            return saliency_exact_subset(w_, finv_, q);
        }
        ensure_pair_tables();
        double score = single_total_ + pair_total_;
        for (std::size_t a = 0; a < kept.size(); ++a) {
            score -= single_[kept[a]] + pair_row_sum_[kept[a]];
            for (std::size_t b = a + 1; b < kept.size(); ++b) {
                score += pair_(kept[a], kept[b]);
            }
        }
        return score;
    }

    /// Memoized variant for keep sets of at most 4 positions.
    double pruned_score_cached(std::span<const int> kept) {
        std::uint64_t key = kept.size();
        for (int pos : kept) key = (key << 16) | static_cast<std::uint64_t>(pos);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const double score = pruned_score(kept);
        cache_.emplace(key, score);
        return score;
    }

private:
    std::vector<int> complement(std::span<const int> kept) const {
        std::vector<int> q;
        q.reserve(static_cast<std::size_t>(size()));
        std::size_t next = 0;
        for (int i = 0; i < size(); ++i) {
            if (next < kept.size() && kept[next] == i) {
                ++next;
            } else {
                q.push_back(i);
            }
        }
        return q;
    }

    void ensure_pair_tables() {
        if (tables_ready_) return;
        const Index m = size();
        single_.resize(m);
        pair_ = Eigen::MatrixXd::Zero(m, m);
        pair_row_sum_ = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) {
            const int idx[] = {i};
            single_[i] = saliency_exact_subset(w_, finv_, idx);
        }
        single_total_ = single_.sum();
        pair_total_ = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const int idx[] = {i, j};
                const double corr = saliency_exact_subset(w_, finv_, idx) - single_[i] - single_[j];
                pair_(i, j) = pair_(j, i) = corr;
                pair_total_ += corr;
            }
        }
        pair_row_sum_ = pair_.rowwise().sum();
        tables_ready_ = true;
    }

    Eigen::VectorXd w_;
    const Eigen::MatrixXd& finv_;
    SaliencyMode mode_;
    std::unordered_map<std::uint64_t, double> cache_;

    bool tables_ready_ = false;
    Eigen::VectorXd single_;
    Eigen::MatrixXd pair_;
    Eigen::VectorXd pair_row_sum_;
    double single_total_ = 0.0;
    double pair_total_ = 0.0;
};

// Calls visit(combo) for each `keep`-subset of `pool` in lexicographic order.
template <typename Visit>
void for_each_combination(std::span<const int> pool, int keep, Visit&& visit) {
    const int size = static_cast<int>(pool.size());
    if (keep < 0 || keep > size) return;
    std::vector<int> pick(static_cast<std::size_t>(keep));
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<int> combo(static_cast<std::size_t>(keep));
    while (true) {
        for (int t = 0; t < keep; ++t) combo[t] = pool[pick[t]];
        visit(std::span<const int>(combo));
        int t = keep - 1;
        while (t >= 0 && pick[t] == size - keep + t) --t;
        if (t < 0) return;
        ++pick[t];
        for (int u = t + 1; u < keep; ++u) pick[u] = pick[u - 1] + 1;
    }
}

struct RowChoice {
    double score = kInf;
    std::vector<int> kept;
};

// Best keep set of size min(keep, |pool|) drawn from pool, by enumeration.
RowChoice best_keep_set(RowScorer& scorer, std::span<const int> pool, int keep, bool cached) {
    RowChoice best;
    const int size = std::min<int>(keep, static_cast<int>(pool.size()));
    for_each_combination(pool, size, [&](std::span<const int> combo) {
        const double score = cached ? scorer.pruned_score_cached(combo) : scorer.pruned_score(combo);
        if (score < best.score) {
            best.score = score;
            best.kept.assign(combo.begin(), combo.end());
        }
    });
    return best;
}

// Top-`keep` positions of pool by singleton saliency, ties to the lower index.
std::vector<int> top_singletons(const RowScorer& scorer, std::span<const int> pool, int keep) {
    std::vector<int> order(pool.begin(), pool.end());
    const auto count = static_cast<std::size_t>(std::min<int>(keep, static_cast<int>(order.size())));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scorer.singleton(a) > scorer.singleton(b);
    });
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

struct Problem {
    const DenseMatrix& d;
    const FisherInverse& fisher;
    VnmConfig cfg;
    SaliencyMode mode;
    const std::optional<SparsityMask>& prev;
    Index groups;

    RowScorer scorer(Index row, Index group) const {
        const Eigen::VectorXd w = d.row(row).segment(group * cfg.m, cfg.m).cast<double>().transpose();
        return RowScorer(w, fisher.block(row * groups + group), mode);
    }

    std::vector<int> candidates(Index row, Index group) const {
        std::vector<int> pool;
        for (int c = 0; c < cfg.m; ++c) {
            if (!prev || (*prev)(row, group * cfg.m + c)) pool.push_back(c);
        }
        return pool;
    }
};

void prune_rowwise(const Problem& p, SparsityMask& mask) {
    parallel_for(0, p.d.rows() * p.groups, [&](Index rg) {
        const Index row = rg / p.groups;
        const Index group = rg % p.groups;
        const auto pool = p.candidates(row, group);
        std::vector<int> kept;
        if (p.cfg.n >= static_cast<int>(pool.size())) {
            kept = pool;
        } else {
            auto scorer = p.scorer(row, group);
            if (binomial(pool.size(), static_cast<std::uint64_t>(p.cfg.n)) <= kExhaustiveSearchBound) {
                kept = best_keep_set(scorer, pool, p.cfg.n, false).kept;
            } else {
                kept = top_singletons(scorer, pool, p.cfg.n);
            }
        }
        for (int c : kept) mask(row, group * p.cfg.m + c) = true;
    });
}

void prune_structured(const Problem& p, SparsityMask& mask) {
    const auto& cfg = p.cfg;
    const bool exhaustive = column_search_for(cfg.m) == ColumnSearch::Exhaustive;
    parallel_for(0, (p.d.rows() / cfg.v) * p.groups, [&](Index block) {
        const Index row0 = (block / p.groups) * cfg.v;
        const Index group = block % p.groups;

        std::vector<RowScorer> scorers;
        std::vector<std::vector<char>> allowed;
        scorers.reserve(static_cast<std::size_t>(cfg.v));
        for (Index i = 0; i < cfg.v; ++i) {
            scorers.push_back(p.scorer(row0 + i, group));
            std::vector<char> flags(static_cast<std::size_t>(cfg.m), 0);
            for (int c : p.candidates(row0 + i, group)) flags[c] = 1;
            allowed.push_back(std::move(flags));
        }

        auto row_pool = [&](Index i, std::span<const int> subset) {
            std::vector<int> pool;
            for (int c : subset) {
                if (allowed[i][c]) pool.push_back(c);
            }
            return pool;
        };

        std::vector<int> best_subset;
        if (exhaustive) {
            std::vector<int> all(static_cast<std::size_t>(cfg.m));
            std::iota(all.begin(), all.end(), 0);
            double best_total = kInf;
            for_each_combination(all, kSelectedColumns, [&](std::span<const int> subset) {
                double total = 0.0;
                for (Index i = 0; i < cfg.v && total < best_total; ++i) {
                    total += best_keep_set(scorers[i], row_pool(i, subset), cfg.n, true).score;
                }
                if (total < best_total) {
                    best_total = total;
                    best_subset.assign(subset.begin(), subset.end());
                }
            });
        } else {
            Eigen::VectorXd column_score = Eigen::VectorXd::Zero(cfg.m);
            std::vector<int> all(static_cast<std::size_t>(cfg.m));
            std::iota(all.begin(), all.end(), 0);
            for (Index i = 0; i < cfg.v; ++i) {
                for (int c : top_singletons(scorers[i], row_pool(i, all), cfg.n)) {
                    column_score[c] += scorers[i].singleton(c);
                }
            }
            std::stable_sort(all.begin(), all.end(),
                             [&](int a, int b) { return column_score[a] > column_score[b]; });
            best_subset.assign(all.begin(), all.begin() + kSelectedColumns);
            std::sort(best_subset.begin(), best_subset.end());
        }

        for (Index i = 0; i < cfg.v; ++i) {
            const auto choice = best_keep_set(scorers[i], row_pool(i, best_subset), cfg.n, true);
            for (int c : choice.kept) mask(row0 + i, group * cfg.m + c) = true;
        }
    });
}

}  // namespace

std::string_view to_string(SaliencyMode mode) {
    return mode == SaliencyMode::Exact ? "exact" : "pairwise";
}

std::string_view to_string(ColumnSearch search) {
    return search == ColumnSearch::Exhaustive ? "exhaustive" : "greedy";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step
        const std::uint64_t factor = n - k + i;
        if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result = result * factor / i;
    }
    return result;
}

ColumnSearch column_search_for(int m) {
    return binomial(static_cast<std::uint64_t>(std::max(m, 0)), kSelectedColumns) <=
                   kExhaustiveSearchBound
               ? ColumnSearch::Exhaustive
               : ColumnSearch::Greedy;
}

SparsityMask so_prune_pattern(const DenseMatrix& d, const FisherInverse& fisher,
                              const VnmConfig& cfg, SaliencyMode mode,
                              const std::optional<SparsityMask>& prev) {
    if (cfg.v < 1 || cfg.n < 1 || cfg.m < kSelectedColumns) {
        throw Error(ErrorCode::UnsupportedPattern, "need v >= 1, n >= 1, m >= 4");
    }
    if (d.rows() % cfg.v != 0) throw Error(ErrorCode::NonDivisibleRows, "v does not divide rows");
    if (d.cols() % cfg.m != 0) throw Error(ErrorCode::NonDivisibleCols, "m does not divide cols");
    require_finite(d);
    if (fisher.dim != d.size() || fisher.block_size != cfg.m ||
        fisher.block_count() * cfg.m != d.size()) {
        throw Error(ErrorCode::FisherShapeMismatch,
                    "Fisher must have dim rows*cols and block size m");
    }
    if (prev && (prev->rows() != d.rows() || prev->cols() != d.cols())) {
        throw Error(ErrorCode::ShapeMismatch, "prev mask shape differs from matrix shape");
    }

    const Problem problem{d, fisher, cfg, mode, prev, d.cols() / cfg.m};
    SparsityMask mask = SparsityMask::Constant(d.rows(), d.cols(), false);
    if (cfg.n > kSelectedColumns) {
        prune_rowwise(problem, mask);
    } else {
        prune_structured(problem, mask);
    }
    return mask;
}

SparsityMask so_prune_vnm(const DenseMatrix& d, const FisherInverse& fisher,
                          const VnmConfig& cfg, SaliencyMode mode,
                          const std::optional<SparsityMask>& prev) {
    validate_config(d.rows(), d.cols(), cfg);
    if (prev && prev->rows() == d.rows() && prev->cols() == d.cols()) {
        for (Index row = 0; row < d.rows(); ++row) {
            for (Index c0 = 0; c0 < d.cols(); c0 += cfg.m) {
                const auto count = prev->row(row).segment(c0, cfg.m).count();
                if (count < cfg.n) {
                    throw Error(ErrorCode::InfeasibleNesting,
                                "row " + std::to_string(row) + " group " +
                                    std::to_string(c0 / cfg.m) + " has " + std::to_string(count) +
                                    " candidates, need " + std::to_string(cfg.n));
                }
            }
        }
    }
    return so_prune_pattern(d, fisher, cfg, mode, prev);
}

}  // namespace vnm
