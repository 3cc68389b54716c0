#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cocycle/heisenberg.hpp"

namespace cocycle::cli {

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Trigonometric-polynomial entry function:
// f(x) = c0 + sum_k cos_coef[k-1] cos(2 pi k x) + sin_coef[k-1] sin(2 pi k x),
// evaluated on the first coordinate of the base point.
struct EntryFnSpec {
    double c0 = 0.0;
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;

    double eval(const BasePoint& p) const;
};

struct ExperimentConfig {
    enum class CocycleKind { constant_matrix, heisenberg, triangular };

    CocycleKind kind = CocycleKind::heisenberg;
    Mat2 constant_entries = Mat2::diag(2.0, 0.5);
    EntryFnSpec lam, sig, eta;

    BaseSystem base = BaseSystem::torus_automorphism({2, 1, 1, 1});

    double theta_min = -0.25;
    double theta_max = 0.25;
    double theta_step = 0.025;

    long orbit_length = 10000;
    int samples = 64;
    std::uint64_t seed = 1;
    int series_depth = -1; // adaptive from tau when <= 0

    double tol_section = 1e-12;
    double tol_u = 1e-13;
    double tol_formula_vs_direct = 1e-3;

    int certify_samples = 64;
    int certify_l_max = 40;
    int refute_n_probe = 200;
    double refute_gap_floor = 0.02;

    std::vector<double> theta_grid() const;
    CertifyOptions certify_options() const;
    LyapThetaOptions lyap_options() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> files_written;
    std::string error; // structured (JSON) diagnostic when exit_code != 0
};

// sweep.csv + derivatives.json + certificate.json + plotdata.csv. All
// outputs are staged to temp files and renamed at the end; nothing is left
// behind on failure.
RunResult run(const ExperimentConfig& cfg, const std::string& out_dir);

// derivatives.json only.
RunResult run_derivatives(const ExperimentConfig& cfg, const std::string& out_dir);

// dset.csv (+ certificate.json at theta = 0).
RunResult run_dominate(const ExperimentConfig& cfg, const std::string& out_dir);

// corollary.csv + summary.txt for the nilmanifold family.
RunResult run_heisenberg(const ExperimentConfig& cfg, const std::string& out_dir);

struct SelftestResult {
    bool pass = false;
    std::string report; // per-check status lines, deterministic bytes
};

// Executable bundle of the closed-form oracles. tolerance_scale multiplies
// every tolerance (0 makes each check strict and therefore failing).
SelftestResult selftest(double tolerance_scale = 1.0);

// 17 significant digits, C locale: round-trip safe for doubles.
std::string fmt17(double v);

} // namespace cocycle::cli
