#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cocycle/parallel.hpp"
#include "cocycle/report.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("COCYCLE_LAB_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void report_outcome(const cocycle::cli::RunResult& res) {
    const int verbosity = log_level();
    if (res.exit_code != 0) {
        std::cerr << res.error << "\n";
        return;
    }
    if (verbosity >= 1)
        for (const std::string& f : res.files_written) std::cerr << "wrote " << f << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cocycle_lab: Lyapunov exponents of rotated 2d cocycles"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    long long seed_override = -1;
    int threads = 0;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", config_path, "experiment config (JSON)");
        if (config_required) c->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--threads", threads, "worker threads (0 = auto)");
    };

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "theta sweep: formula vs direct exponents");
    add_common(cmd_sweep, true);
    CLI::App* cmd_deriv = app.add_subcommand("derivatives", "derivative series at theta = 0");
    add_common(cmd_deriv, true);
    CLI::App* cmd_dom = app.add_subcommand("dominate", "domination certificates across the grid");
    add_common(cmd_dom, true);
    CLI::App* cmd_heis = app.add_subcommand("heisenberg", "nilmanifold family report");
    add_common(cmd_heis, false);

    CLI::App* cmd_self = app.add_subcommand("selftest", "run the closed-form oracle bundle");
    double tolerance_scale = 1.0;
    cmd_self->add_option("--tolerance-scale", tolerance_scale, "multiply every tolerance");
    cmd_self->add_option("--threads", threads, "worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);
    cocycle::par::set_threads(threads);

    try {
        if (cmd_self->parsed()) {
            const auto res = cocycle::cli::selftest(tolerance_scale);
            std::cout << res.report;
            return res.pass ? 0 : 1;
        }

        cocycle::cli::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = cocycle::cli::load_config_file(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

        cocycle::cli::RunResult res;
        if (cmd_sweep->parsed()) res = cocycle::cli::run(cfg, out_dir);
        else if (cmd_deriv->parsed()) res = cocycle::cli::run_derivatives(cfg, out_dir);
        else if (cmd_dom->parsed()) res = cocycle::cli::run_dominate(cfg, out_dir);
        else res = cocycle::cli::run_heisenberg(cfg, out_dir);
        report_outcome(res);
        return res.exit_code;
    } catch (const cocycle::cli::config_error& e) {
        std::cerr << "{\"error\":\"config_error\",\"detail\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"fatal\",\"detail\":\"" << e.what() << "\"}\n";
        return 1;
    }
}
