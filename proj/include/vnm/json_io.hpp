#pragma once

// nlohmann/json bindings for the report types.

#include "vnm/metrics.hpp"
#include "vnm/spmm.hpp"

#include "json.hpp"

namespace vnm {

inline void to_json(nlohmann::json& j, const CostReport& report) {
    j = nlohmann::json{{"dense_macs", report.dense_macs},
                       {"sparse_macs", report.sparse_macs},
                       {"b_rows_loaded", report.b_rows_loaded},
                       {"column_loc_bytes", report.column_loc_bytes},
                       {"metadata_bytes", report.metadata_bytes},
                       {"ideal_speedup", report.ideal_speedup}};
}

inline void to_json(nlohmann::json& j, const EnergyReport& report) {
    j = nlohmann::json{
        {"policy", report.policy}, {"sparsity", report.sparsity}, {"energy", report.energy}};
}

}  // namespace vnm
