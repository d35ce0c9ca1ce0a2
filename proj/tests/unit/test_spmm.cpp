#include "doctest.h"

#include "../support/generators.hpp"

#include <set>

using namespace vnm;
using vnm::testing::Rng;

namespace {

// Matrix wrapper that records which rows were read.
struct RecordingMatrix {
    const DenseMatrix& inner;
    mutable std::set<Index> rows_read;
    mutable std::mutex lock;

    Index rows() const { return inner.rows(); }
    Index cols() const { return inner.cols(); }
    float operator()(Index r, Index c) const {
        std::lock_guard guard(lock);
        rows_read.insert(r);
        return inner(r, c);
    }
};

VnmMatrix random_vnm(Rng& rng, Index r, Index k, const VnmConfig& cfg) {
    const auto d = testing::random_dense(rng, r, k);
    return compress(d, testing::random_vnm_mask(rng, r, k, cfg, true), cfg);
}

}  // namespace

TEST_CASE("gemm_dense") {
    RowMatrix<float> a(1, 1);
    a << 2;
    RowMatrix<float> b(1, 1);
    b << 3;
    CHECK(gemm_dense(a, b)(0, 0) == 6.0);

    Rng rng(1);
    const auto x = testing::random_dense(rng, 5, 7);
    const auto y = testing::random_dense(rng, 7, 3);
    const DenseMatrix eye = DenseMatrix::Identity(5, 5);
    CHECK(gemm_dense(eye, x) == x.cast<double>());

    const float alpha = 4.0f;
    const DenseMatrix scaled = alpha * x;
    CHECK(testing::max_relative_error(gemm_dense(scaled, y), alpha * gemm_dense(x, y)) < 1e-12);
    CHECK(testing::max_relative_error(gemm_dense(x, y), testing::oracle_gemm(x, y)) == 0.0);
    CHECK_THROWS_AS(gemm_dense(x, x), Error);
}

TEST_CASE("spmm_reference: identity and zero operands") {
    Rng rng(2);
    const VnmConfig cfg{4, 2, 8};
    const auto a = random_vnm(rng, 8, 16, cfg);
    const DenseMatrix eye = DenseMatrix::Identity(16, 16);
    CHECK(spmm_reference(a, eye) == decompress(a).cast<double>());

    auto zero = a;
    std::fill(zero.values.begin(), zero.values.end(), 0.0f);
    CHECK(spmm_reference(zero, testing::random_dense(rng, 16, 5)).isZero(0.0));

    CHECK_THROWS_AS(spmm_reference(a, DenseMatrix::Ones(8, 2)), Error);
}

TEST_CASE("spmm_reference: dense oracle across patterns") {
    Rng rng(3);
    const VnmConfig configs[] = {{4, 2, 4}, {64, 2, 8}, {128, 2, 16}, {32, 2, 20}};
    for (const auto& cfg : configs) {
        const Index r = cfg.v * 2;
        const Index k = cfg.m * 4;
        const auto a = random_vnm(rng, r, k, cfg);
        const auto b = testing::random_dense(rng, k, 32);
        const auto out = spmm_reference(a, b);
        CHECK(testing::max_relative_error(out, gemm_dense(decompress(a), b)) <= 1e-10);
        CHECK(testing::max_relative_error(out, testing::oracle_gemm(decompress(a), b)) <= 1e-10);
    }
}

TEST_CASE("spmm_reference: reads only rows named by column_loc") {
    Rng rng(4);
    const VnmConfig cfg{4, 2, 16};
    const auto a = random_vnm(rng, 4, 64, cfg);
    const auto b = testing::random_dense(rng, 64, 4);
    RecordingMatrix recorder{b, {}, {}};
    const auto out = spmm_reference(a, recorder);
    CHECK(out == spmm_reference(a, b));

    std::set<Index> allowed;
    for (Index g = 0; g < a.groups(); ++g) {
        for (int t = 0; t < kSelectedColumns; ++t) {
            allowed.insert(g * cfg.m + a.column_loc[a.column_loc_offset(0, g) + t]);
        }
    }
    for (Index row : recorder.rows_read) CHECK(allowed.count(row) == 1);
    CHECK(allowed.size() == 4u * 64 / 16);
}

TEST_CASE("spmm_reference: independent of the thread count") {
    Rng rng(5);
    const VnmConfig cfg{8, 2, 8};
    const auto a = random_vnm(rng, 64, 64, cfg);
    const auto b = testing::random_dense(rng, 64, 16);
    const int saved = max_threads();
    set_max_threads(1);
    const auto serial = spmm_reference(a, b);
    set_max_threads(7);
    const auto parallel = spmm_reference(a, b);
    set_max_threads(saved);
    CHECK(serial == parallel);
}

TEST_CASE("spmm_reference: half emulation stays within 1e-2") {
    Rng rng(6);
    const VnmConfig cfg{4, 2, 8};
    const auto d = testing::random_dense(rng, 16, 32);
    const auto mask = magnitude_prune_vnm(d, cfg);
    const auto full = compress(d, mask, cfg);
    const auto half = compress(d, mask, cfg, {.half_emulation = true});
    const auto b = testing::random_dense(rng, 32, 8);
    const auto exact = gemm_dense(apply_mask(d, mask), b);
    CHECK(testing::max_relative_error(spmm_reference(half, b), exact) <= 1e-2);
    CHECK(testing::max_relative_error(spmm_reference(full, b), exact) <= 1e-10);
}

using testing::expand_tile;
using testing::random_sparse_tile;
using testing::SparseTile;

TEST_CASE("mma_sp_tile: examples and oracle") {
    Rng rng(7);
    for (Index k : {16, 32}) {
        const TileShape shape{k};
        SparseTile tile{testing::random_dense(rng, 16, k / 2), MetaTile::Zero(16, k / 2)};
        for (Index j = 1; j < k / 2; j += 2) tile.meta.col(j).setOnes();
        const RowMatrix<float> eye = RowMatrix<float>::Identity(k, 8);
        const RowMatrix<float> zero = RowMatrix<float>::Zero(16, 8);
        const auto out = mma_sp_tile(tile.vals, tile.meta, eye, zero, shape);
        // positions (0, 1) of group 0 land in output columns 0 and 1; group 1 starts at 4
        for (Index r = 0; r < 16; ++r) {
            CHECK(out(r, 0) == tile.vals(r, 0));
            CHECK(out(r, 1) == tile.vals(r, 1));
            CHECK(out(r, 4) == tile.vals(r, 2));
            CHECK(out(r, 5) == tile.vals(r, 3));
            CHECK(out(r, 2) == 0.0f);
        }
        const RowMatrix<float> no_vals = RowMatrix<float>::Zero(16, k / 2);
        CHECK(mma_sp_tile(no_vals, tile.meta, testing::random_dense(rng, k, 8), zero, shape)
                  .isZero(0.0f));

        for (int trial = 0; trial < 50; ++trial) {
            const auto t = random_sparse_tile(rng, k);
            const RowMatrix<float> b = testing::random_dense(rng, k, 8);
            const RowMatrix<float> c = testing::random_dense(rng, 16, 8);
            const auto expect = testing::oracle_tile(expand_tile(t, k), b, c);
            CHECK(mma_sp_tile(t.vals, t.meta, b, c, shape) == expect);
        }
    }
}

TEST_CASE("mma_sp_tile: illegal input") {
    Rng rng(8);
    auto tile = random_sparse_tile(rng, 32);
    const RowMatrix<float> b = RowMatrix<float>::Zero(32, 8);
    const RowMatrix<float> c = RowMatrix<float>::Zero(16, 8);
    tile.meta(3, 0) = tile.meta(3, 1);
    CHECK_THROWS_AS(mma_sp_tile(tile.vals, tile.meta, b, c, TileShape::k32()), Error);
    tile = random_sparse_tile(rng, 32);
    CHECK_THROWS_AS(mma_sp_tile(tile.vals, tile.meta, b, c, TileShape{64}), Error);
    CHECK_THROWS_AS(mma_sp_tile(tile.vals, tile.meta, b, c, TileShape::k16()), Error);
}

TEST_CASE("mma_sp_tile: tiles compose into the full product") {
    Rng rng(9);
    // 32 x 64 2:4 matrix, 64 x 8 rhs, m16n8k32 tiles
    SparseTile rows[2] = {random_sparse_tile(rng, 64), random_sparse_tile(rng, 64)};
    const RowMatrix<float> b = testing::random_dense(rng, 64, 8);
    RowMatrix<float> full_a(32, 64);
    full_a << expand_tile(rows[0], 64), expand_tile(rows[1], 64);

    const auto expect = testing::oracle_tile(full_a, b, RowMatrix<float>::Zero(32, 8));

    RowMatrix<float> out(32, 8);
    for (int rt = 0; rt < 2; ++rt) {
        RowMatrix<float> acc = RowMatrix<float>::Zero(16, 8);
        for (int kt = 0; kt < 2; ++kt) {
            const RowMatrix<float> vals = rows[rt].vals.middleCols(kt * 16, 16);
            const MetaTile meta = rows[rt].meta.middleCols(kt * 16, 16);
            const RowMatrix<float> b_tile = b.middleRows(kt * 32, 32);
            acc = mma_sp_tile(vals, meta, b_tile, acc, TileShape::k32());
        }
        out.middleRows(rt * 16, 16) = acc;
    }
    CHECK(out == expect);
}

TEST_CASE("cost_model") {
    CHECK(cost_model(1024, 4000, 4096, {128, 2, 10}).ideal_speedup == 5.0);
    CHECK(cost_model(1024, 4000, 4096, {128, 2, 20}).ideal_speedup == 10.0);
    CHECK(cost_model(1024, 4000, 4096, {128, 2, 40}).ideal_speedup == 20.0);
    CHECK(cost_model(1024, 4000, 4096, {128, 2, 100}).ideal_speedup == 50.0);

    const auto tile = cost_model(32, 16, 8, {32, 2, 8});
    CHECK(tile.dense_macs / (32 * 8) == 16);
    CHECK(tile.sparse_macs / (32 * 8) == 4);
    CHECK(tile.b_rows_loaded * 2 == 16);

    const auto report = cost_model(64, 128, 16, {16, 2, 8});
    CHECK(report.sparse_macs * 4 == report.dense_macs);
    CHECK(report.column_loc_bytes == (64 / 16) * (128 / 8) * 4 * 2);
    CHECK(report.metadata_bytes == (64 * (128 / 8) * 2 + 3) / 4);
    CHECK_THROWS_AS(cost_model(10, 16, 4, {4, 2, 8}), Error);
}
