#include "doctest.h"

#include "../support/generators.hpp"

using namespace vnm;
using vnm::testing::Rng;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected vnm::Error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("fisher_add_sample") {
    FisherEstimator est(2, 2, 1.0);
    est.add_sample(Eigen::Vector2d(0, 0));
    CHECK(est.sample_count() == 1);
    CHECK(est.accumulated()[0].isZero(0.0));

    FisherEstimator one(2, 2, 1.0);
    one.add_sample(Eigen::Vector2d(1, 2));
    Eigen::Matrix2d expect;
    expect << 1, 2, 2, 4;
    CHECK(one.accumulated()[0] == expect);

    CHECK(code_of([&] { one.add_sample(Eigen::Vector3d(1, 2, 3)); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([] { FisherEstimator(6, 4); }) == ErrorCode::FisherShapeMismatch);
}

TEST_CASE("fisher accumulation matches the dense outer-product sum on the diagonal blocks") {
    Rng rng(31);
    const Index dim = 12;
    const Index block = 4;
    FisherEstimator est(dim, block);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
    std::normal_distribution<double> normal;
    for (int s = 0; s < 10; ++s) {
        Eigen::VectorXd g(dim);
        for (auto& x : g) x = normal(rng);
        est.add_sample(g);
        dense += g * g.transpose();
    }
    for (Index b = 0; b < dim / block; ++b) {
        CHECK((est.accumulated()[b] - dense.block(b * block, b * block, block, block))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("fisher_finalize") {
    FisherEstimator zero(3, 3, 1.0);
    CHECK(code_of([&] { zero.finalize(); }) == ErrorCode::NoSamples);
    zero.add_sample(Eigen::Vector3d::Zero());
    CHECK(zero.finalize().block(0).isIdentity(0.0));

    FisherEstimator scalar(1, 1, 0.5);
    scalar.add_sample(Eigen::VectorXd::Constant(1, 2.0));
    CHECK(scalar.finalize().block(0)(0, 0) == doctest::Approx(1.0 / 4.5).epsilon(1e-15));

    Rng rng(8);
    FisherEstimator est(16, 8);
    std::normal_distribution<double> normal;
    for (int s = 0; s < 5; ++s) {
        Eigen::VectorXd g(16);
        for (auto& x : g) x = normal(rng);
        est.add_sample(g);
    }
    const double damp = est.effective_damp();
    CHECK(damp > 0.0);
    const auto inv = est.finalize();
    for (Index b = 0; b < 2; ++b) {
        Eigen::MatrixXd fisher = est.accumulated()[b] / 5.0;
        fisher.diagonal().array() += damp;
        CHECK((fisher * inv.block(b) - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK(inv.block(b) == inv.block(b).transpose());
        CHECK(inv.block(b).llt().info() == Eigen::Success);
    }
}

TEST_CASE("default dampening is scale aware") {
    FisherEstimator est(2, 2);
    est.add_sample(Eigen::Vector2d(2, 0));
    // averaged diag = (4, 0), mean 2
    CHECK(est.effective_damp() == doctest::Approx(2e-4));
    FisherEstimator flat(2, 2);
    flat.add_sample(Eigen::Vector2d::Zero());
    CHECK(flat.effective_damp() == 1.0);
}

TEST_CASE("candidate sets") {
    const auto patterns = CandidateSet::keep_patterns(4, 2);
    const std::vector<std::vector<int>> expect{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    CHECK(patterns.selectors == expect);
    CHECK(CandidateSet::pairwise(0, 1).selectors == std::vector<std::vector<int>>{{0}, {1}, {0, 1}});
    CHECK(CandidateSet::keep_patterns(8, 2).size() == 28);
}

TEST_CASE("saliency_exact") {
    const Eigen::VectorXd w = Eigen::Vector3d(3, -2, 0.5);
    const int single[] = {1};
    CHECK(saliency_exact_subset(w, Eigen::Matrix3d::Identity(), single) == 2.0);
    CHECK(saliency_exact(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()) == 0.0);

    Eigen::Matrix2d finv;
    finv << 2, 1, 1, 2;
    CHECK(saliency_exact(Eigen::Vector2d(1, 1), finv) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    Eigen::Matrix2d indefinite;
    indefinite << 1, 2, 2, 1;
    CHECK(code_of([&] { saliency_exact(Eigen::Vector2d(1, 1), indefinite); }) ==
          ErrorCode::SingularSubmatrix);
}

TEST_CASE("saliency properties on random instances") {
    Rng rng(77);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
        const Index m = 4 + trial % 5;
        const auto finv = testing::random_spd(rng, m);
        Eigen::VectorXd w(m);
        for (auto& x : w) x = normal(rng);
        std::vector<int> q(static_cast<std::size_t>(m));
        std::iota(q.begin(), q.end(), 0);
        q.resize(static_cast<std::size_t>(1 + trial % m));

        const double rho = saliency_exact_subset(w, finv, q);
        CHECK(rho >= 0.0);
        CHECK(rho == doctest::Approx(testing::oracle_saliency(w, finv, q)).epsilon(1e-10));
        const double c = 0.5 + trial % 3;
        CHECK(saliency_exact_subset(c * w, finv, q) == doctest::Approx(c * c * rho).epsilon(1e-12));
    }
}

TEST_CASE("saliency_pairwise") {
    Rng rng(5);
    std::normal_distribution<double> normal;
    Eigen::VectorXd w(6);
    for (auto& x : w) x = normal(rng);

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(6, 6);
    diag.diagonal() << 0.5, 1, 2, 3, 0.25, 4;
    const std::vector<int> q{0, 2, 3, 5};
    double expect = 0.0;
    for (int i : q) expect += 0.5 * w[i] * w[i] / diag(i, i);
    CHECK(saliency_pairwise(w, diag, q) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(saliency_exact_subset(w, diag, q) == doctest::Approx(expect).epsilon(1e-12));

    const auto finv = testing::random_spd(rng, 6);
    const std::vector<int> pair{1, 4};
    CHECK(saliency_pairwise(w, finv, pair) == saliency_exact_subset(w, finv, pair));
    const std::vector<int> triple{0, 3, 5};
    const double gap = saliency_pairwise(w, finv, triple) - saliency_exact_subset(w, finv, triple);
    MESSAGE("pairwise - exact gap on a random |Q|=3 instance: " << gap);
}

TEST_CASE("so_prune_vnm: single block, diagonal Fisher") {
    DenseMatrix d(1, 4);
    d << 3, 1, 2, 0.5;
    const auto mask = so_prune_vnm(d, FisherInverse::identity(4, 4), {1, 2, 4}, SaliencyMode::Exact);
    SparsityMask expect = SparsityMask::Constant(1, 4, false);
    expect(0, 0) = expect(0, 2) = true;
    CHECK((mask == expect).all());
}

TEST_CASE("so_prune_vnm: exhaustive oracle at m = 8") {
    Rng rng(123);
    for (int trial = 0; trial < 12; ++trial) {
        const int v = 1 + trial % 3;
        const VnmConfig cfg{v, 2, 8};
        const auto d = testing::random_dense(rng, v, 8);
        const auto fisher = testing::random_fisher_inverse(rng, d.size(), 8);
        const auto mask = so_prune_vnm(d, fisher, cfg, SaliencyMode::Exact);
        CHECK(vnm_valid(mask, cfg));
        const auto expect = testing::oracle_so_block(d.cast<double>(), fisher.blocks);
        CHECK((mask == expect).all());
    }
}

TEST_CASE("so_prune_vnm: diagonal Fisher reductions") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const bool single_row = trial % 2 == 0;
        const VnmConfig cfg = single_row ? VnmConfig{1, 2, 4 + 2 * (trial % 4)}
                                         : VnmConfig{1 + trial % 4, 2, 4};
        const auto d = testing::random_dense(rng, cfg.v * 2, cfg.m * 2);
        const auto fisher = FisherInverse::identity(d.size(), cfg.m, 3.0);
        const auto exact = so_prune_vnm(d, fisher, cfg, SaliencyMode::Exact);
        const auto pairwise = so_prune_vnm(d, fisher, cfg, SaliencyMode::Pairwise);
        CHECK((exact == pairwise).all());
        CHECK((exact == magnitude_prune_vnm(d, cfg)).all());
    }
}

TEST_CASE("so_prune_vnm: invariant under uniform positive scaling") {
    Rng rng(55);
    const VnmConfig cfg{2, 2, 8};
    const auto d = testing::random_dense(rng, 4, 16);
    const auto fisher = testing::random_fisher_inverse(rng, d.size(), 8);
    for (auto mode : {SaliencyMode::Exact, SaliencyMode::Pairwise}) {
        const auto base = so_prune_vnm(d, fisher, cfg, mode);
        const DenseMatrix scaled = 4.0f * d;
        CHECK((so_prune_vnm(scaled, fisher, cfg, mode) == base).all());
    }
}

TEST_CASE("so_prune_vnm: greedy column search for large m") {
    CHECK(column_search_for(8) == ColumnSearch::Exhaustive);
    CHECK(column_search_for(27) == ColumnSearch::Exhaustive);
    CHECK(column_search_for(28) == ColumnSearch::Greedy);
    CHECK(column_search_for(64) == ColumnSearch::Greedy);
    CHECK(binomial(64, 4) == 635376);

    Rng rng(6);
    const VnmConfig cfg{2, 2, 64};
    const auto d = testing::random_dense(rng, 4, 128);
    const auto fisher = testing::random_fisher_inverse(rng, d.size(), 64);
    for (auto mode : {SaliencyMode::Exact, SaliencyMode::Pairwise}) {
        const auto mask = so_prune_vnm(d, fisher, cfg, mode);
        CHECK(vnm_valid(mask, cfg));
        CHECK(kept_count(mask) == 4 * 2 * 2);
    }
}

TEST_CASE("so_prune_vnm: nesting and errors") {
    Rng rng(12);
    const VnmConfig cfg{2, 2, 8};
    const auto d = testing::random_dense(rng, 4, 16);
    const auto fisher = testing::random_fisher_inverse(rng, d.size(), 8);

    const auto prev = magnitude_prune_vnm(d, VnmConfig{2, 2, 8});
    const auto nested = so_prune_vnm(d, fisher, cfg, SaliencyMode::Exact, prev);
    CHECK(mask_subset(nested, prev));

    SparsityMask sparse_prev = SparsityMask::Constant(4, 16, false);
    sparse_prev(0, 0) = true;
    CHECK(code_of([&] { so_prune_vnm(d, fisher, cfg, SaliencyMode::Exact, sparse_prev); }) ==
          ErrorCode::InfeasibleNesting);
    CHECK(code_of([&] {
              so_prune_vnm(d, testing::random_fisher_inverse(rng, d.size(), 4), cfg,
                           SaliencyMode::Exact);
          }) == ErrorCode::FisherShapeMismatch);
}

TEST_CASE("make_decay_schedule") {
    CHECK(make_decay_schedule(8, 2, 3).steps == std::vector<int>{8, 6, 4, 2});
    CHECK(make_decay_schedule(4, 2, 1).steps == std::vector<int>{4, 2});
    const auto long_schedule = make_decay_schedule(16, 2, 7);
    CHECK(long_schedule.steps.front() == 16);
    CHECK(long_schedule.steps.back() == 2);
    CHECK(std::is_sorted(long_schedule.steps.rbegin(), long_schedule.steps.rend()));
    // 8 - 1.5 rounds half away from zero
    CHECK(make_decay_schedule(8, 5, 2).steps == std::vector<int>{8, 7, 5});
    CHECK(code_of([] { make_decay_schedule(2, 2, 3); }) == ErrorCode::InvalidSchedule);
    CHECK(code_of([] { make_decay_schedule(8, 1, 3); }) == ErrorCode::InvalidSchedule);
    CHECK(code_of([] { make_decay_schedule(8, 2, 0); }) == ErrorCode::InvalidSchedule);
}

TEST_CASE("gradual_prune: nesting and final validity") {
    Rng rng(99);
    const VnmConfig cfg{4, 2, 16};
    const auto d = testing::random_dense(rng, 8, 16);
    const auto fisher = testing::random_fisher_inverse(rng, d.size(), 16);
    DecaySchedule schedule{8, 2, 2, {8, 4, 2}};
    const auto masks = gradual_prune(d, cfg, schedule, [&](int) { return fisher; },
                                     SaliencyMode::Pairwise);
    REQUIRE(masks.size() == 3);
    CHECK(nm_rowwise_valid(masks[0], 8, 16));
    CHECK(vnm_valid(masks[1], {4, 4, 16}));
    CHECK(vnm_valid(masks[2], cfg));
    CHECK(mask_subset(masks[1], masks[0]));
    CHECK(mask_subset(masks[2], masks[1]));
    CHECK(kept_count(masks[0]) == 8 * 8);
    CHECK(kept_count(masks[2]) <= 8 * 2);
}

TEST_CASE("gradual_prune: relaxed budget after a row-wise step") {
    // a row-wise 6:16 step rarely leaves four columns shared by all rows
    Rng rng(101);
    const VnmConfig cfg{4, 2, 16};
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = testing::random_dense(rng, 8, 32);
        const auto fisher = testing::random_fisher_inverse(rng, d.size(), 16);
        const auto masks = gradual_prune(d, cfg, make_decay_schedule(8, 2, 3),
                                         [&](int) { return fisher; }, SaliencyMode::Pairwise);
        REQUIRE(masks.size() == 4);
        for (std::size_t t = 1; t < masks.size(); ++t) CHECK(mask_subset(masks[t], masks[t - 1]));
        CHECK(vnm_valid(masks[3], cfg));
        CHECK(kept_count(masks[3]) > 0);
    }
}

TEST_CASE("gradual_prune: degenerate schedules equal one-shot pruning") {
    Rng rng(100);
    const VnmConfig cfg{2, 2, 8};
    const auto d = testing::random_dense(rng, 4, 16);
    const auto fisher = testing::random_fisher_inverse(rng, d.size(), 8);
    const auto provider = [&](int) { return fisher; };
    const auto one_shot = so_prune_vnm(d, fisher, cfg, SaliencyMode::Exact);

    const DecaySchedule single{2, 2, 0, {2}};
    auto masks = gradual_prune(d, cfg, single, provider, SaliencyMode::Exact);
    REQUIRE(masks.size() == 1);
    CHECK((masks[0] == one_shot).all());

    // n0 = m keeps everything at step 0
    masks = gradual_prune(d, cfg, make_decay_schedule(8, 2, 1), provider, SaliencyMode::Exact);
    CHECK(masks[0].all());
    CHECK((masks[1] == one_shot).all());
}
