// hkcalc: verification suites and solver runs for the hyperkahler torus
// calculus library.  Subcommands emit versioned JSON reports and use exit
// codes 0 (pass), 1 (check/solver failure), 2 (config error).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hkc/cli_app.hpp"

namespace {

struct CliOptions {
    std::string config_file;
    hkc::RunConfig cfg;
    std::string seed_spec_text;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_file, "JSON config file; flags override it");
    cmd->add_option("--grid", opt.cfg.grid, "grid points per axis (even, >= 8)");
    cmd->add_option("--rank", opt.cfg.rank, "fiber rank");
    cmd->add_option("--tol", opt.cfg.tol, "check/series tolerance");
    cmd->add_option("--max-order", opt.cfg.max_order, "maximum series order");
    cmd->add_option("--s2-level", opt.cfg.s2_level, "sphere quadrature level");
    cmd->add_option("--seed", opt.cfg.seed, "random seed (logged in the report)");
    cmd->add_option("--out", opt.cfg.out, "report output file (default stdout)");
    cmd->add_option("--solver-tol", opt.cfg.solver_tol, "Green solver relative tolerance");
    cmd->add_option("--solver-max-iter", opt.cfg.solver_max_iter, "Green solver iteration cap");
    cmd->add_flag("--precond,!--no-precond", opt.cfg.precondition,
                  "Fourier-division preconditioner (default on)")
        ->default_val(true);
}

// Config file first, then flags override.
hkc::RunConfig resolve_config(const CliOptions& opt, const CLI::App* cmd) {
    hkc::RunConfig cfg;
    if (!opt.config_file.empty()) {
        std::ifstream in(opt.config_file);
        if (!in) throw hkc::ConfigError("config: cannot open " + opt.config_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw hkc::ConfigError(std::string("config: parse error: ") + e.what());
        }
        cfg = hkc::RunConfig::from_json(j);
    }
    auto touched = [&](const std::string& flag) { return cmd->count(flag) > 0; };
    if (touched("--grid")) cfg.grid = opt.cfg.grid;
    if (touched("--rank")) cfg.rank = opt.cfg.rank;
    if (touched("--tol")) cfg.tol = opt.cfg.tol;
    if (touched("--max-order")) cfg.max_order = opt.cfg.max_order;
    if (touched("--s2-level")) cfg.s2_level = opt.cfg.s2_level;
    if (touched("--seed")) cfg.seed = opt.cfg.seed;
    if (touched("--out")) cfg.out = opt.cfg.out;
    if (touched("--solver-tol")) cfg.solver_tol = opt.cfg.solver_tol;
    if (touched("--solver-max-iter")) cfg.solver_max_iter = opt.cfg.solver_max_iter;
    if (touched("--precond")) cfg.precondition = opt.cfg.precondition;
    cfg.validate();
    return cfg;
}

int emit(const hkc::CommandResult& result, const hkc::RunConfig& cfg) {
    const std::string text = result.report.dump(2);
    if (cfg.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(cfg.out);
        if (!out) {
            std::cerr << "error: cannot write " << cfg.out << "\n";
            return hkc::kExitConfigError;
        }
        out << text << "\n";
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral hyperkahler torus calculus"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* verify = app.add_subcommand("verify-calculus", "run the calculus invariant suite");
    add_common_flags(verify, opt);
    CLI::App* solve = app.add_subcommand("solve-nhym", "run the power-series solver");
    add_common_flags(solve, opt);
    solve->add_option("--seed-spec", opt.seed_spec_text,
                      "seed JSON (inline or @file), e.g. {\"kind\":\"random\",\"rank\":1}");
    CLI::App* twistor = app.add_subcommand("twistor-report", "sphere-family residual report");
    add_common_flags(twistor, opt);
    CLI::App* moduli = app.add_subcommand("moduli-demo", "flat abelian moduli demonstration");
    add_common_flags(moduli, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hkc::kExitConfigError;
    }

    try {
        if (verify->parsed()) {
            const auto cfg = resolve_config(opt, verify);
            return emit(hkc::cmd_verify_calculus(cfg), cfg);
        }
        if (solve->parsed()) {
            const auto cfg = resolve_config(opt, solve);
            nlohmann::json spec = {{"kind", "random"}};
            if (!opt.seed_spec_text.empty()) {
                std::string text = opt.seed_spec_text;
                if (text.front() == '@') {
                    std::ifstream in(text.substr(1));
                    if (!in) throw hkc::ConfigError("seed-spec: cannot open file");
                    text.assign(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
                }
                try {
                    spec = nlohmann::json::parse(text);
                } catch (const std::exception& e) {
                    throw hkc::ConfigError(std::string("seed-spec: parse error: ") + e.what());
                }
            }
            return emit(hkc::cmd_solve_nhym(cfg, spec), cfg);
        }
        if (twistor->parsed()) {
            const auto cfg = resolve_config(opt, twistor);
            return emit(hkc::cmd_twistor_report(cfg), cfg);
        }
        if (moduli->parsed()) {
            const auto cfg = resolve_config(opt, moduli);
            return emit(hkc::cmd_moduli_demo(cfg), cfg);
        }
    } catch (const hkc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hkc::kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hkc::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hkc::kExitCheckFailed;
    }
    return hkc::kExitConfigError;
}
