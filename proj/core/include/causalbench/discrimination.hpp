// discrimination.hpp — The commuting-vs-anticommuting benchmark: unitary-set
// grids, switch/four-box overlaps and success probabilities, quadrature
// averages, closed-form asymptotics, control entropy, and a statevector oracle.

#pragma once

#include "causalbench/channels.hpp"
#include "causalbench/fock.hpp"
#include "causalbench/linalg.hpp"

#include <cstddef>
#include <vector>

namespace causalbench::discrimination {

enum class Setup { quantum_switch, four_box };
enum class SetTag { commuting, anticommuting };

// One (U_A, U_B) draw with its quadrature weight. Commuting pairs rotate about
// a shared equatorial axis phi by theta_a and theta_b; anticommuting pairs are
// angle-pi rotations about the equatorial axis phi_a and an orthogonal axis
// tilted by varphi_b.
struct PairSample {
    SetTag tag;
    double phi = 0.0, theta_a = 0.0, theta_b = 0.0;
    double phi_a = 0.0, varphi_b = 0.0;
    double weight = 0.0;

    channels::Rotation u_a() const;
    channels::Rotation u_b() const;
    double box_theta() const;  // rotation angle the noisy box aims for
    double box_phi() const;    // its azimuth
};

// Uniform periodic grids on [-pi, pi) per angle; weights sum to 1.
std::vector<PairSample> grid_commuting(int n_phi, int n_theta_a, int n_theta_b);
std::vector<PairSample> grid_anticommuting(int n_phi_a, int n_varphi_b);

// <Phi_0|Phi_1> for the quantum switch: Tr[F(U_B rho_S) U_B†] with F the
// jc_channel of the pair's box angles at the full budget nbar.
Complex switch_overlap(const PairSample& pair, double nbar, const Matrix2& rho_s,
                       const fock::FockTruncation& trunc);

// <Phi_0|Phi_1> for the four-box simulation: Tr[G U_B rho_S G† U_B†] with G
// the four_box_kraus at per-box budget nbar/2. trunc_half is built for nbar/2.
Complex four_box_overlap(const PairSample& pair, double nbar, const Matrix2& rho_s,
                         const fock::FockTruncation& trunc_half);

// (1 + Re overlap)/2 for commuting pairs, (1 - Re overlap)/2 for anticommuting.
std::pair<double, SetTag> success_pair(Setup setup, const PairSample& pair, double nbar,
                                       const Matrix2& rho_s, const fock::FockTruncation& trunc);

struct GridSpec {
    int n_phi = 48, n_theta_a = 48, n_theta_b = 48;
    int n_phi_a = 48, n_varphi_b = 48;
};

struct TaskConfig {
    Setup setup = Setup::quantum_switch;
    double nbar = 20.0;
    Matrix2 rho_s = 0.5 * Matrix2::Identity();
    GridSpec grid;
    double tail_tol = 1e-12;
    int threads = 1;
    // Experimental uneven energy split for the four-box setup: box 0 receives
    // split_fraction * nbar, box 1 the rest. Benchmarks keep the even split.
    double split_fraction = 0.5;

    fock::FockTruncation box_truncation() const;  // truncation for one box's budget
};

struct SuccessReport {
    Setup setup;
    double nbar;
    double p_commuting, p_anticommuting, p_average;
    double quadrature_error_estimate;
};

// Quadrature average of success_pair over both sets, with the error estimated
// by re-evaluating at half the grid density.
SuccessReport average_success(const TaskConfig& config);

// Closed-form large-nbar expansion of the per-set and averaged success
// probabilities (first order in 1/nbar).
SuccessReport asymptotic_success(Setup setup, double nbar, const Matrix2& rho_s);

// Entanglement entropy of the control qubit in bits: H((1 + |overlap|)/2).
double control_entropy(Complex overlap);

inline constexpr std::size_t default_state_cap = 1u << 23;

// Builds |Phi_0>, |Phi_1> by explicit tensor-product evolution and returns
// their inner product; mixed rho_s is handled by its eigendecomposition.
// Refuses configurations whose statevector would exceed max_state_dim entries.
Complex statevector_oracle(Setup setup, const PairSample& pair, double nbar,
                           const Matrix2& rho_s, const fock::FockTruncation& trunc,
                           std::size_t max_state_dim = default_state_cap);

struct FirstOrderConstants {
    double c;  // limit of nbar * (1 -+ Re overlap), sign fixed by the pair's set
    double d;  // limit of nbar * Im overlap
    bool converged;
};

// Richardson extrapolation of the leading 1/nbar coefficients of the overlap
// at nbar = 200, 400, 800; flags non-convergence when successive estimates
// differ by more than 5%.
FirstOrderConstants first_order_constant(Setup setup, const PairSample& pair,
                                         double tail_tol = 1e-12);

}  // namespace causalbench::discrimination
