// vnmkit: command-line front end for the V:N:M toolkit.
//
// JSON summaries go to stdout, diagnostics to stderr. Exit codes:
//   0 success, 2 invalid arguments or input content, 3 I/O failure.

#include "vnm/json_io.hpp"
#include "vnm/vnm.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <random>

namespace {

using nlohmann::json;

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct PatternArgs {
    int v = 1;
    int n = 2;
    int m = 4;

    vnm::VnmConfig config() const { return {v, n, m}; }
};

void add_pattern(CLI::App* cmd, PatternArgs& p) {
    cmd->add_option("--v", p.v, "Block height V")->check(CLI::PositiveNumber);
    cmd->add_option("--n", p.n, "Kept entries per row and block")->check(CLI::PositiveNumber);
    cmd->add_option("--m", p.m, "Block width M")->check(CLI::PositiveNumber);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

// gen -------------------------------------------------------------------------

struct GenArgs {
    vnm::Index rows = 0;
    vnm::Index cols = 0;
    std::uint64_t seed = 0;
    std::string output;
};

void run_gen(const GenArgs& a) {
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<float> normal(0.0f, 1.0f);
    vnm::DenseMatrix d(a.rows, a.cols);
    for (vnm::Index i = 0; i < d.size(); ++i) d.data()[i] = normal(rng);
    vnm::io::write_dense(a.output, d);
    print({{"rows", a.rows}, {"cols", a.cols}, {"seed", a.seed}});
}

// prune -----------------------------------------------------------------------

struct PruneArgs {
    std::string policy = "magnitude";
    PatternArgs pattern;
    double sparsity = 0.5;
    vnm::Index length = 4;
    std::string grad;
    std::optional<double> damp;
    std::optional<int> n0;
    int beta = 0;
    std::uint64_t seed = 0;
    std::string input;
    std::string output;
};

vnm::FisherInverse load_fisher(const PruneArgs& a, vnm::Index dim) {
    if (a.grad.empty()) return vnm::FisherInverse::identity(dim, a.pattern.m);
    const auto samples = vnm::io::read_dense(a.grad).matrix;
    if (samples.cols() != dim) {
        throw vnm::Error(vnm::ErrorCode::LengthMismatch,
                         "gradient samples have " + std::to_string(samples.cols()) +
                             " entries, expected " + std::to_string(dim));
    }
    vnm::FisherEstimator estimator(dim, a.pattern.m, a.damp);
    for (vnm::Index s = 0; s < samples.rows(); ++s) {
        estimator.add_sample(samples.row(s).transpose().cast<double>());
    }
    return estimator.finalize();
}

void run_prune(const PruneArgs& a) {
    const auto d = vnm::io::read_dense(a.input).matrix;
    const auto cfg = a.pattern.config();
    json summary = {{"policy", a.policy}};
    vnm::SparsityMask mask;

    if (a.policy == "magnitude") {
        mask = vnm::magnitude_prune_vnm(d, cfg);
    } else if (a.policy == "unstructured") {
        mask = vnm::magnitude_prune_unstructured(d, a.sparsity);
    } else if (a.policy == "vectorwise") {
        mask = vnm::magnitude_prune_vectorwise(d, a.length, a.sparsity);
    } else {
        const auto mode = a.policy == "so-exact" ? vnm::SaliencyMode::Exact
                                                 : vnm::SaliencyMode::Pairwise;
        vnm::validate_config(d.rows(), d.cols(), cfg);
        const auto fisher = load_fisher(a, d.size());
        if (a.beta > 0) {
            const auto schedule =
                vnm::make_decay_schedule(a.n0.value_or(cfg.m / 2), cfg.n, a.beta);
            const auto masks = vnm::gradual_prune(
                d, cfg, schedule, [&](int) { return fisher; }, mode);
            mask = masks.back();
            summary["schedule"] = schedule.steps;
        } else {
            mask = vnm::so_prune_vnm(d, fisher, cfg, mode);
        }
        summary["search"] = std::string(vnm::to_string(vnm::column_search_for(cfg.m)));
    }

    vnm::io::write_mask(a.output, mask);
    const bool structured = a.policy != "unstructured" && a.policy != "vectorwise";
    summary["v"] = cfg.v;
    summary["n"] = cfg.n;
    summary["m"] = cfg.m;
    summary["sparsity"] = structured ? cfg.sparsity() : a.sparsity;
    summary["energy"] = vnm::energy(d, mask);
    print(summary);
}

// compress / decompress / spmm ------------------------------------------------

struct CompressArgs {
    std::string input;
    std::string mask;
    PatternArgs pattern;
    bool half = false;
    std::string output;
};

void run_compress(const CompressArgs& a) {
    const auto d = vnm::io::read_dense(a.input).matrix;
    const auto mask = vnm::io::read_mask(a.mask);
    const auto s = vnm::compress(d, mask, a.pattern.config(), {.half_emulation = a.half});
    vnm::io::write_vnm(a.output, s);
    print({{"r", s.r}, {"k", s.k}, {"values", s.values.size()},
           {"column_loc", s.column_loc.size()}});
}

struct IoArgs {
    std::string input;
    std::string output;
};

void run_decompress(const IoArgs& a) {
    const auto s = vnm::io::read_vnm(a.input);
    vnm::io::write_dense(a.output, vnm::decompress(s));
    print({{"rows", s.r}, {"cols", s.k}});
}

struct SpmmArgs {
    std::string a;
    std::string b;
    std::string output;
};

void run_spmm(const SpmmArgs& args) {
    const auto a = vnm::io::read_vnm(args.a);
    const auto b = vnm::io::read_dense(args.b).matrix;
    const vnm::DenseMatrix out = vnm::spmm_reference(a, b).cast<float>();
    vnm::io::write_dense(args.output, out);
    print({{"rows", out.rows()}, {"cols", out.cols()}});
}

// energy ----------------------------------------------------------------------

struct EnergyArgs {
    std::string input;
    std::string mask;
    std::vector<std::string> policies;
    std::vector<double> sparsities;
    bool csv = false;
};

void run_energy(const EnergyArgs& a) {
    const auto d = vnm::io::read_dense(a.input).matrix;
    if (!a.mask.empty()) {
        print({{"energy", vnm::energy(d, vnm::io::read_mask(a.mask))}});
        return;
    }
    if (a.policies.empty() || a.sparsities.empty()) {
        throw vnm::Error(vnm::ErrorCode::InvalidArgument,
                         "give --mask, or both --policies and --sparsities");
    }
    std::vector<vnm::PrunePolicy> policies;
    for (const auto& name : a.policies) policies.push_back(vnm::PrunePolicy::parse(name));
    const auto reports = vnm::energy_sweep(d, policies, a.sparsities);
    if (a.csv) {
        std::cout << vnm::energy_csv(reports);
    } else {
        print(reports);
    }
}

// cost / inspect --------------------------------------------------------------

struct CostArgs {
    vnm::Index r = 0;
    vnm::Index k = 0;
    vnm::Index c = 0;
    PatternArgs pattern;
};

void run_cost(const CostArgs& a) { print(vnm::cost_model(a.r, a.k, a.c, a.pattern.config())); }

void run_inspect(const std::string& input) {
    const auto s = vnm::io::read_vnm(input);
    print({{"r", s.r},
           {"k", s.k},
           {"v", s.cfg.v},
           {"n", s.cfg.n},
           {"m", s.cfg.m},
           {"dtype", s.dtype == vnm::Dtype::HalfEmulated ? "half" : "real32"},
           {"values_bytes", vnm::io::values_bytes(s)},
           {"m_indices_bytes", vnm::io::metadata_bytes(s.m_indices.size())},
           {"column_loc_bytes", vnm::io::column_loc_bytes(s.column_loc.size())},
           {"sparsity", s.cfg.sparsity()},
           {"ideal_speedup", s.cfg.ideal_speedup()}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"V:N:M sparse format toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a seeded random DMX1 matrix");
    gen_cmd->add_option("--rows", gen.rows)->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--cols", gen.cols)->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("-o,--output", gen.output)->required();

    PruneArgs prune;
    auto* prune_cmd = app.add_subcommand("prune", "Prune a DMX1 matrix into an MSK1 mask");
    prune_cmd->add_option("--policy", prune.policy)
        ->check(CLI::IsMember(
            {"magnitude", "so-exact", "so-pairwise", "unstructured", "vectorwise"}));
    add_pattern(prune_cmd, prune.pattern);
    prune_cmd->add_option("--sparsity", prune.sparsity, "For unstructured and vectorwise");
    prune_cmd->add_option("--l", prune.length, "Vector length for vectorwise")
        ->check(CLI::PositiveNumber);
    prune_cmd->add_option("--grad", prune.grad, "DMX1 gradient samples, one per row");
    prune_cmd->add_option("--damp", prune.damp, "Fisher dampening");
    prune_cmd->add_option("--n0", prune.n0, "Initial N of the decay schedule (default M/2)");
    prune_cmd->add_option("--beta", prune.beta, "Decay steps; 0 prunes in one shot")
        ->check(CLI::NonNegativeNumber);
    prune_cmd->add_option("--seed", prune.seed);
    prune_cmd->add_option("-i,--input", prune.input)->required();
    prune_cmd->add_option("-o,--output", prune.output)->required();

    CompressArgs comp;
    auto* compress_cmd = app.add_subcommand("compress", "Compress a masked DMX1 matrix to VNM1");
    compress_cmd->add_option("-i,--input", comp.input)->required();
    compress_cmd->add_option("--mask", comp.mask)->required();
    add_pattern(compress_cmd, comp.pattern);
    compress_cmd->add_flag("--half", comp.half, "Round stored values to half precision");
    compress_cmd->add_option("-o,--output", comp.output)->required();

    IoArgs decomp;
    auto* decompress_cmd = app.add_subcommand("decompress", "Expand VNM1 to DMX1");
    decompress_cmd->add_option("-i,--input", decomp.input)->required();
    decompress_cmd->add_option("-o,--output", decomp.output)->required();

    SpmmArgs spmm;
    auto* spmm_cmd = app.add_subcommand("spmm", "Multiply a VNM1 matrix by a DMX1 matrix");
    spmm_cmd->add_option("-a", spmm.a)->required();
    spmm_cmd->add_option("-b", spmm.b)->required();
    spmm_cmd->add_option("-o,--output", spmm.output)->required();

    EnergyArgs en;
    auto* energy_cmd = app.add_subcommand("energy", "Kept magnitude fraction");
    energy_cmd->add_option("-i,--input", en.input)->required();
    energy_cmd->add_option("--mask", en.mask);
    energy_cmd->add_option("--policies", en.policies)->delimiter(',');
    energy_cmd->add_option("--sparsities", en.sparsities)->delimiter(',');
    energy_cmd->add_flag("--csv", en.csv);

    CostArgs cost;
    auto* cost_cmd = app.add_subcommand("cost", "Analytical SpMM cost");
    cost_cmd->add_option("--r", cost.r)->required();
    cost_cmd->add_option("--k", cost.k)->required();
    cost_cmd->add_option("--c", cost.c)->required();
    add_pattern(cost_cmd, cost.pattern);

    std::string inspect_input;
    auto* inspect_cmd = app.add_subcommand("inspect", "Describe a VNM1 file");
    inspect_cmd->add_option("-i,--input", inspect_input)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (gen_cmd->parsed()) run_gen(gen);
        if (prune_cmd->parsed()) run_prune(prune);
        if (compress_cmd->parsed()) run_compress(comp);
        if (decompress_cmd->parsed()) run_decompress(decomp);
        if (spmm_cmd->parsed()) run_spmm(spmm);
        if (energy_cmd->parsed()) run_energy(en);
        if (cost_cmd->parsed()) run_cost(cost);
        if (inspect_cmd->parsed()) run_inspect(inspect_input);
    } catch (const vnm::Error& e) {
        std::cerr << "vnmkit: " << e.what() << '\n';
        return e.code() == vnm::ErrorCode::Io ? kExitIo : kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "vnmkit: " << e.what() << '\n';
        return kExitInvalid;
    }
    return 0;
}
