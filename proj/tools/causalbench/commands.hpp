// commands.hpp — Subcommand implementations behind the causalbench CLI; each
// writes its report to streams so runs can be captured and compared exactly.

#pragma once

#include "causalbench/discrimination.hpp"
#include "causalbench/tester.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace causalbench::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_solver = 3;
inline constexpr int exit_io = 4;

struct RunConfig {
    double nbar_min = 1.0, nbar_max = 20.0;
    int nbar_steps = 20;
    int grid = 48;
    double tol = 1e-6;
    tester::Order order = tester::Order::b_before_a;
    bool isotropic = false;
    std::string rho = "mixed";  // mixed | zero | one
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency; CAUSALBENCH_THREADS overrides
    std::string out;  // empty: stdout
    std::string svg;  // success-sweep plot path; empty: derive from out

    std::vector<double> theta_list;       // fidelity-sweep
    std::vector<std::string> setups;      // success-sweep; default {qs, 4b}
    std::vector<double> nbar_list;        // fco-optimize
    bool ideal = false;                   // fco-optimize: no energy constraint
    int samples = 1000;                   // verify-circuit

    Matrix2 rho_matrix() const;
    std::vector<double> nbar_values() const;
    int effective_threads() const;  // applies the environment override
};

int cmd_fidelity_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_success_sweep(const RunConfig& cfg, std::ostream& out, std::ostream* svg_out);
int cmd_fco_optimize(const RunConfig& cfg, std::ostream& out);
int cmd_verify_circuit(const RunConfig& cfg, std::ostream& out);
int cmd_entropy(const RunConfig& cfg, std::ostream& out);
int cmd_asymptotics(const RunConfig& cfg, std::ostream& out);

// Full command-line entry point (parsing, dispatch, file handling); returns
// the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causalbench::cli
