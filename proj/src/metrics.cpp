#include "vnm/metrics.hpp"

#include "vnm/magnitude.hpp"

#include <charconv>
#include <cmath>

namespace vnm {
namespace {

std::string shortest(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

SparsityMask prune_for(const DenseMatrix& d, const PrunePolicy& policy, double s) {
    try {
        switch (policy.kind) {
            case PrunePolicy::Kind::Unstructured:
                return magnitude_prune_unstructured(d, s);
            case PrunePolicy::Kind::Vnm:
                return magnitude_prune_vnm(
                    d, VnmConfig{static_cast<int>(policy.length), 2, vnm_m_for_sparsity(s)});
            case PrunePolicy::Kind::VectorWise:
                return magnitude_prune_vectorwise(d, policy.length, s);
        }
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::NonDivisibleRows:
            case ErrorCode::NonDivisibleCols:
            case ErrorCode::UnsupportedPattern:
                throw Error(ErrorCode::UnrealizableSparsity,
                            policy.name() + " at s = " + shortest(s) + ": " + e.what());
            default:
                throw;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown policy");
}

}  // namespace

double energy(const DenseMatrix& d, const SparsityMask& mask) {
    if (d.rows() != mask.rows() || d.cols() != mask.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "mask shape differs from matrix shape");
    }
    const Eigen::ArrayXXd magnitude = d.cast<double>().array().abs();
    const double total = magnitude.sum();
    if (!(total > 0.0)) throw Error(ErrorCode::ZeroDenominator, "matrix has no mass");
    return mask.select(magnitude, 0.0).sum() / total;
}

std::string PrunePolicy::name() const {
    switch (kind) {
        case Kind::Unstructured: return "unstructured";
        case Kind::Vnm: return "vnm_" + std::to_string(length);
        case Kind::VectorWise: return "vw_" + std::to_string(length);
    }
    return "unknown";
}

PrunePolicy PrunePolicy::parse(const std::string& name) {
    if (name == "unstructured") return unstructured();
    auto suffix = [&](std::string_view prefix) -> Index {
        Index value = 0;
        const char* first = name.data() + prefix.size();
        const char* last = name.data() + name.size();
        const auto result = std::from_chars(first, last, value);
        if (result.ec != std::errc{} || result.ptr != last || value < 1) {
            throw Error(ErrorCode::InvalidArgument, "bad policy length in '" + name + "'");
        }
        return value;
    };
    if (name.starts_with("vnm_")) return vnm(suffix("vnm_"));
    if (name.starts_with("vw_")) return vector_wise(suffix("vw_"));
    throw Error(ErrorCode::InvalidArgument, "unknown policy '" + name + "'");
}

int vnm_m_for_sparsity(double sparsity) {
    if (sparsity < 1.0) {
        const double m = 2.0 / (1.0 - sparsity);
        const double rounded = std::round(m);
        if (rounded >= kSelectedColumns && rounded < 1e9 &&
            std::abs((1.0 - 2.0 / rounded) - sparsity) < 1e-9) {
            return static_cast<int>(rounded);
        }
    }
    throw Error(ErrorCode::UnrealizableSparsity,
                "s = " + shortest(sparsity) + " is not of the form 1 - 2/m with m >= 4");
}

std::vector<EnergyReport> energy_sweep(const DenseMatrix& d,
                                       const std::vector<PrunePolicy>& policies,
                                       const std::vector<double>& sparsities) {
    std::vector<EnergyReport> reports;
    reports.reserve(policies.size() * sparsities.size());
    for (const auto& policy : policies) {
        for (double s : sparsities) {
            reports.push_back({policy.name(), s, energy(d, prune_for(d, policy, s))});
        }
    }
    return reports;
}

std::string energy_csv(const std::vector<EnergyReport>& reports) {
    std::string csv = "policy,sparsity,energy\n";
    for (const auto& report : reports) {
        csv += report.policy + "," + shortest(report.sparsity) + "," + shortest(report.energy) + "\n";
    }
    return csv;
}

}  // namespace vnm
