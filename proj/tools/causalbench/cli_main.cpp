#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace causalbench::cli {

namespace {

void add_common_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--nbar-min", cfg.nbar_min, "lowest mean photon number")
        ->check(CLI::PositiveNumber);
    sub->add_option("--nbar-max", cfg.nbar_max, "highest mean photon number")
        ->check(CLI::PositiveNumber);
    sub->add_option("--nbar-steps", cfg.nbar_steps, "number of sweep points")
        ->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "quadrature nodes per angle")->check(CLI::Range(2, 4096));
    sub->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::Range(1e-9, 1e-4));
    sub->add_option("--order", cfg.order, "causal order of the optimized circuit")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, tester::Order>{{"ab", tester::Order::a_before_b},
                                                 {"ba", tester::Order::b_before_a}}));
    sub->add_flag("--isotropic", cfg.isotropic, "restrict testers to the isotropic subspace");
    sub->add_option("--rho", cfg.rho, "target state: mixed, zero, or one")
        ->check(CLI::IsMember({"mixed", "zero", "one"}));
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--threads", cfg.threads,
                    "worker threads (0 = all cores; CAUSALBENCH_THREADS overrides)");
    sub->add_option("--out", cfg.out, "output path (default: stdout)");
}

int write_output(const RunConfig& cfg, const std::string& payload, std::ostream& fallback,
                 std::ostream& err) {
    if (cfg.out.empty()) {
        fallback << payload;
        return exit_ok;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        err << "cannot write " << cfg.out << "\n";
        return exit_io;
    }
    file << payload;
    if (!file.good()) {
        err << "write failed: " << cfg.out << "\n";
        return exit_io;
    }
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy-constrained benchmark of the quantum switch, its four-box "
                 "simulation, and fixed-causal-order circuits"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* fid = app.add_subcommand("fidelity-sweep",
                                   "gate fidelity of the boxed rotation versus energy (CSV)");
    add_common_options(fid, cfg);
    fid->add_option("--theta", cfg.theta_list, "rotation angles (radians)")
        ->check(CLI::Range(-pi, pi));

    auto* suc = app.add_subcommand(
        "success-sweep", "discrimination success probabilities versus energy (CSV + SVG)");
    add_common_options(suc, cfg);
    suc->add_option("--setups", cfg.setups, "subset of qs, 4b, fco-iso")
        ->check(CLI::IsMember({"qs", "4b", "fco-iso"}));
    suc->add_option("--svg", cfg.svg, "SVG plot path (default: derived from --out)");

    auto* fco = app.add_subcommand("fco-optimize",
                                   "optimal fixed-causal-order tester by SDP (JSON)");
    add_common_options(fco, cfg);
    fco->add_flag("--ideal", cfg.ideal, "use the unconstrained-energy payoff");
    fco->add_option("--nbar", cfg.nbar_list, "energy budgets to optimize at")
        ->check(CLI::PositiveNumber);

    auto* ver = app.add_subcommand("verify-circuit",
                                   "check the explicit perfect-discrimination circuit (JSON)");
    add_common_options(ver, cfg);
    ver->add_option("--samples", cfg.samples, "random draws per set")->check(CLI::PositiveNumber);

    auto* ent = app.add_subcommand("entropy", "control-qubit entanglement entropy sweep (CSV)");
    add_common_options(ent, cfg);

    auto* asy = app.add_subcommand("asymptotics", "first-order success probabilities (CSV)");
    add_common_options(asy, cfg);

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    std::string program = "causalbench";
    argv.push_back(program.data());
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_validation;
    }

    try {
        std::ostringstream payload;
        int rc = exit_ok;
        if (fco->parsed() && !cfg.ideal && cfg.nbar_list.empty()) {
            err << "fco-optimize needs --ideal or at least one --nbar\n";
            return exit_validation;
        }
        if (fid->parsed()) rc = cmd_fidelity_sweep(cfg, payload);
        if (suc->parsed()) {
            std::string svg_path = cfg.svg;
            if (svg_path.empty() && !cfg.out.empty()) {
                svg_path = cfg.out;
                const auto dot = svg_path.find_last_of('.');
                if (dot != std::string::npos) svg_path.resize(dot);
                svg_path += ".svg";
            }
            if (svg_path.empty()) {
                rc = cmd_success_sweep(cfg, payload, nullptr);
            } else {
                std::ofstream svg_file(svg_path, std::ios::binary);
                if (!svg_file) {
                    err << "cannot write " << svg_path << "\n";
                    return exit_io;
                }
                rc = cmd_success_sweep(cfg, payload, &svg_file);
                if (!svg_file.good()) {
                    err << "write failed: " << svg_path << "\n";
                    return exit_io;
                }
            }
        }
        if (fco->parsed()) rc = cmd_fco_optimize(cfg, payload);
        if (ver->parsed()) rc = cmd_verify_circuit(cfg, payload);
        if (ent->parsed()) rc = cmd_entropy(cfg, payload);
        if (asy->parsed()) rc = cmd_asymptotics(cfg, payload);
        const int io_rc = write_output(cfg, payload.str(), out, err);
        return io_rc != exit_ok ? io_rc : rc;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    }
}

}  // namespace causalbench::cli
