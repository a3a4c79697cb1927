// tester.hpp — Quantum testers for two-slot fixed-causal-order circuits:
// constraint residuals, the generalized Born rule, payoff operators (ideal,
// finite-energy, Haar-isotropic), the isotropic operator subspace, circuit
// link products, and the explicit perfect-discrimination circuit.

#pragma once

#include "causalbench/channels.hpp"
#include "causalbench/fock.hpp"
#include "causalbench/linalg.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace causalbench::tester {

// Tensor factor ordering is fixed as A_I ⊗ A_O ⊗ B_I ⊗ B_O throughout.
enum class Order { a_before_b, b_before_a };

inline const std::vector<int>& qubit_factor_dims() {
    static const std::vector<int> dims{2, 2, 2, 2};
    return dims;
}

struct TesterResiduals {
    double psd_plus = 0.0;        // max(0, -min eig W+)
    double psd_minus = 0.0;       // max(0, -min eig W-)
    double reconstruction = 0.0;  // ||W+ + W- - M ⊗ 1||_max for the best M
    double marginal = 0.0;        // ||Tr_slot2-in M - V ⊗ 1||_max
    double normalization = 0.0;   // |Tr V - 1|
    double max() const;
};

struct Tester {
    Order order;
    Matrix w_plus, w_minus;  // 16x16 Hermitian, PSD for valid testers
    TesterResiduals residuals;
};

TesterResiduals constraint_residuals(Order order, const Matrix& w_plus, const Matrix& w_minus);
Tester make_tester(Order order, Matrix w_plus, Matrix w_minus);

// Generalized Born rule p(±) = Tr[W±^T (A ⊗ B)] on the Choi matrices of the
// two inserted operations.
std::pair<double, double> tester_probabilities(const Tester& t,
                                               const channels::ChoiMatrix& choi_a,
                                               const channels::ChoiMatrix& choi_b);

enum class Provenance { ideal, finite, haar };

struct PayoffPair {
    Matrix g_plus, g_minus;  // 16x16 Hermitian PSD, trace 4 each
    Provenance provenance;
    double nbar = 0.0;
};

// Set-averaged payoff for perfectly implemented rotations (closed form).
PayoffPair ideal_payoff();

struct PayoffGrids {
    int n_phi = 32, n_theta = 32;
    int n_phi_a = 32, n_varphi_b = 32;
};

// Set-averaged payoff with the noisy box channel at budget nbar inserted in
// the first slot, computed by quadrature over both unitary sets.
PayoffPair finite_payoff(double nbar, const PayoffGrids& grids,
                         const fock::FockTruncation& trunc);

// Closed-form payoff after Haar-averaging the frame rotation over all ports.
PayoffPair haar_payoff();

// Orthonormal span of the operators invariant under simultaneous unitary
// frame rotation of all four ports; 14-dimensional.
struct IsotropicBasis {
    std::vector<Matrix> ops;  // orthonormal under Tr[X†Y]
    Matrix project(const Matrix& x) const;
    double projection_residual(const Matrix& x) const;  // ||x - P(x)||_max
};

IsotropicBasis isotropic_basis();

// Haar unitary via QR of a complex Gaussian matrix with the phase fix; the
// Gaussian uses a hand-rolled Box-Muller so draws are reproducible across
// standard libraries.
Matrix2 haar_unitary(std::mt19937_64& rng);

// (V^T ⊗ V† ⊗ V^T ⊗ V†) G (·)†: the payoff seen after rotating the frame of
// all four ports by V.
Matrix four_port_conjugate(const Matrix& g, const Matrix2& v);

// Monte-Carlo frame average of a payoff: mean over Haar draws V of the
// four-port conjugation (V^T ⊗ V† ⊗ V^T ⊗ V†) G (·)†. Samples are split into
// blocks with per-block seeds and reduced pairwise, so the result depends only
// on (samples, seed), never on the thread count.
PayoffPair haar_average_oracle(const PayoffPair& payoff, int samples, std::uint64_t seed,
                               int threads = 1);

// A concrete circuit for one causal order: state preparation on the first
// slot's input plus memory b, a channel (Kraus list) from the first slot's
// output ⊗ b to the second slot's input ⊗ a, and a binary POVM on the second
// slot's output ⊗ a. For b_before_a the first slot is B and the second is A.
struct CircuitElements {
    Order order;
    int dim_a = 1, dim_b = 1;
    Matrix rho;                   // (2*dim_b) x (2*dim_b)
    std::vector<Matrix> channel;  // each (2*dim_a) x (2*dim_b)
    Matrix e_plus, e_minus;       // (2*dim_a) x (2*dim_a)
};

// Link-product contraction of the circuit elements into a Tester.
Tester tester_from_circuit(const CircuitElements& circuit);

// Direct Born-rule simulation of the circuit on Kraus-decomposed operations;
// the independent reference for tester_from_circuit.
std::pair<double, double> simulate_circuit(const CircuitElements& circuit,
                                           const channels::QubitChannel& op_a,
                                           const channels::QubitChannel& op_b);

// The explicit B-before-A circuit that discriminates the commuting and
// anticommuting sets perfectly for ideal rotations.
CircuitElements perfect_discrimination_circuit();

// Simulates the circuit's output states over random draws from both sets and
// returns the largest |<psi_com|psi_anti>| across all cross pairs; throws if
// an output norm strays from 1 by more than 1e-12. Requires an isometric
// channel (a single Kraus element).
double verify_perfect_discrimination(const CircuitElements& circuit, int samples,
                                     std::uint64_t seed);

}  // namespace causalbench::tester
