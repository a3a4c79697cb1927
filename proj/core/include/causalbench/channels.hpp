// channels.hpp — Qubit channels, Choi matrices, rotations, fidelity, and the
// closed-form first-order Choi expansions used as analytic references.

#pragma once

#include "causalbench/fock.hpp"
#include "causalbench/linalg.hpp"

#include <vector>

namespace causalbench::channels {

struct QubitChannel {
    std::vector<Matrix2> kraus;
    double tp_defect;  // ||sum K†K - 1||_max at build time
};

QubitChannel make_channel(std::vector<Matrix2> kraus);
QubitChannel identity_channel();

// Reduced qubit dynamics of one Jaynes-Cummings box with a coherent field of
// mean photon number nbar.
QubitChannel jc_channel(double theta, double phi, double nbar,
                        const fock::FockTruncation& trunc);

// sum_n K_n X K_n†, extended linearly to arbitrary (non-Hermitian) inputs.
Matrix2 apply_channel(const QubitChannel& ch, const Matrix2& x);

struct ChoiMatrix {
    int d_in, d_out;
    Matrix m;  // element convention <i,j|M|k,l> = <j|M(|i><k|)|l>, input factor first
};

ChoiMatrix choi_of_channel(const QubitChannel& ch);
ChoiMatrix choi_of_unitary(const Matrix2& u);

struct Rotation {
    Matrix2 u;
    // exp(-i(theta/2)(cos(phi) sx + sin(phi) sy)): angle theta about an
    // equatorial axis with azimuth phi
    static Rotation equatorial(double theta, double phi);
    // angle-pi rotation about the axis orthogonal to the equatorial axis phi_a,
    // tilted by the zenith angle varphi_b
    static Rotation pi_tilted(double phi_a, double varphi_b);
};

// Choi matrix of the perfect rotation by theta about the x axis.
Matrix4 ideal_rotation_choi(double theta);

// Row/column phase rule carrying an x-axis Choi matrix to azimuth phi.
void apply_azimuth_phases(Matrix4& m, double phi);

// First-order 1/nbar expansion of the Choi matrix of jc_channel.
ChoiMatrix jc_first_order_choi(double theta, double phi, double nbar);

// (1 ⊗ <alpha|) U (1 ⊗ |alpha>) with the field at the given mean photon
// number: the single effective operator of one box between coherent states.
Matrix2 coherent_sandwich(double theta, double phi, double field_nbar,
                          const fock::FockTruncation& trunc);

// The four-box branch operator: one box carrying half of the total budget.
// trunc_half must be built for nbar_total/2.
Matrix2 four_box_kraus(double theta, double phi, double nbar_total,
                       const fock::FockTruncation& trunc_half);

// First-order expansion of the Choi matrix of the (subnormalized) map
// X -> G X G† built from four_box_kraus, in the total budget nbar_total.
ChoiMatrix four_box_first_order_choi(double theta, double phi, double nbar_total);

// 1/2 + (1/12) sum_j Tr[U s_j U† ch(s_j)], j = x, y, z
double average_gate_fidelity(const QubitChannel& ch, const Rotation& target);

// ---- tensor-factor contractions --------------------------------------------
// All act on operators over a product space with the given per-factor dims,
// row-major index order.

// Trace out the listed factors; remaining factors keep their original order.
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& traced);

// Trace onto the listed factors, returned in the listed order.
Matrix trace_to(const Matrix& m, const std::vector<int>& dims,
                const std::vector<int>& kept);

// Transpose the listed factors in the computational basis.
Matrix partial_transpose(const Matrix& m, const std::vector<int>& dims,
                         const std::vector<int>& transposed);

// Operator acting as op on the listed factors (in the listed order) and as
// identity elsewhere.
Matrix embed(const Matrix& op, const std::vector<int>& dims,
             const std::vector<int>& positions);

}  // namespace causalbench::channels
