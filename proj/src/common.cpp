#include "vnm/common.hpp"
#include "vnm/config.hpp"

#include <cmath>

namespace vnm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonDivisibleRows: return "NonDivisibleRows";
        case ErrorCode::NonDivisibleCols: return "NonDivisibleCols";
        case ErrorCode::UnsupportedPattern: return "UnsupportedPattern";
        case ErrorCode::InvalidMask: return "InvalidMask";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::CorruptMetadata: return "CorruptMetadata";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NoSamples: return "NoSamples";
        case ErrorCode::SingularSubmatrix: return "SingularSubmatrix";
        case ErrorCode::FisherShapeMismatch: return "FisherShapeMismatch";
        case ErrorCode::InfeasibleNesting: return "InfeasibleNesting";
        case ErrorCode::InvalidSchedule: return "InvalidSchedule";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IllegalMetadata: return "IllegalMetadata";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::UnrealizableSparsity: return "UnrealizableSparsity";
        case ErrorCode::BadFormat: return "BadFormat";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

void require_finite(const DenseMatrix& d, std::string_view what) {
    if (!d.allFinite()) {
        throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
    }
}

float round_to_half(float x) { return static_cast<float>(Eigen::half(x)); }

void validate_config(Index r, Index k, const VnmConfig& cfg) {
    if (cfg.n != 2 || cfg.m < kSelectedColumns || cfg.v < 1) {
        throw Error(ErrorCode::UnsupportedPattern,
                    "pattern " + std::to_string(cfg.v) + ":" + std::to_string(cfg.n) + ":" +
                        std::to_string(cfg.m) + " (need n = 2, m >= 4, v >= 1)");
    }
    if (r < 0 || r % cfg.v != 0) {
        throw Error(ErrorCode::NonDivisibleRows,
                    std::to_string(r) + " rows not divisible by v = " + std::to_string(cfg.v));
    }
    if (k < 0 || k % cfg.m != 0) {
        throw Error(ErrorCode::NonDivisibleCols,
                    std::to_string(k) + " cols not divisible by m = " + std::to_string(cfg.m));
    }
}

}  // namespace vnm
