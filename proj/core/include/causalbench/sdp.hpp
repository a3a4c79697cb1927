// sdp.hpp — A small dense SDP engine: maximize a linear functional of
// Hermitian blocks under affine equality constraints with PSD cones on some
// blocks, by operator splitting (ADMM) with over-relaxation, plus the tester
// optimization built on it.

#pragma once

#include "causalbench/linalg.hpp"
#include "causalbench/tester.hpp"

#include <string>
#include <vector>

namespace causalbench::sdp {

struct BlockSpec {
    std::string name;
    int dim;
    bool psd = true;  // false: free Hermitian block (no cone projection)
};

// One affine equality: sum_b Tr[A_b X_b] = rhs, with Hermitian A_b.
struct Constraint {
    std::vector<std::pair<int, Matrix>> terms;
    double rhs = 0.0;
};

struct SdpProblem {
    std::vector<BlockSpec> blocks;
    std::vector<Matrix> objective;  // maximize sum_b Tr[C_b X_b], Hermitian C_b
    std::vector<Constraint> constraints;
};

enum class SolveStatus { optimal, max_iter, infeasible };

struct SolveOptions {
    double tol = 1e-7;
    int max_iter = 200000;
    double over_relaxation = 1.6;
    double rho = 1.0;           // initial ADMM penalty
    bool adaptive_rho = true;   // deterministic residual balancing
    int check_interval = 25;
};

struct SdpSolution {
    std::vector<Matrix> x;
    double primal_value = 0.0;
    double dual_value = 0.0;  // certificate bounding the optimum from above
    double gap = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double constraint_residual = 0.0;  // max |Tr[A_b X_b] - rhs| over all constraints
    double min_eigenvalue = 0.0;       // most negative eigenvalue across PSD blocks
};

SdpSolution solve(const SdpProblem& problem, const SolveOptions& options = {});

struct FcoResult {
    double p_star = 0.0;
    tester::Tester tester;
    double certificate = 0.0;  // dual bound
    double gap = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
};

// Maximum success probability (1/2)Tr[W+^T G+] + (1/2)Tr[W-^T G-] over testers
// of the given causal order; the isotropic flag restricts both outcome
// operators to the 14-dimensional frame-invariant subspace.
FcoResult optimize_fco(const tester::PayoffPair& payoff, tester::Order order,
                       bool isotropic, double tol = 1e-7, int max_iter = 200000);

}  // namespace causalbench::sdp
