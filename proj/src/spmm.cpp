#include "vnm/spmm.hpp"

#include "vnm/io.hpp"

namespace vnm {

CostReport cost_model(Index r, Index k, Index c, const VnmConfig& cfg) {
    validate_config(r, k, cfg);
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "c must be non-negative");
    const auto rows = static_cast<std::uint64_t>(r);
    const auto inner = static_cast<std::uint64_t>(k);
    const auto cols = static_cast<std::uint64_t>(c);
    const auto groups = inner / static_cast<std::uint64_t>(cfg.m);
    const auto block_rows = rows / static_cast<std::uint64_t>(cfg.v);
    const std::uint64_t stored = rows * groups * static_cast<std::uint64_t>(cfg.n);

    CostReport report;
    report.dense_macs = rows * inner * cols;
    report.sparse_macs = stored * cols;
    report.b_rows_loaded = kSelectedColumns * groups;
    report.column_loc_bytes = io::column_loc_bytes(block_rows * groups * kSelectedColumns);
    report.metadata_bytes = io::metadata_bytes(stored);
    report.ideal_speedup = cfg.ideal_speedup();
    return report;
}

}  // namespace vnm
