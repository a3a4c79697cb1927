// fock.hpp — Truncated-Fock cavity field and the Jaynes-Cummings joint unitary

#pragma once

#include "causalbench/linalg.hpp"

#include <cstddef>
#include <vector>

namespace causalbench::fock {

// Retained Fock levels 0..n_max for a coherent field; the Poisson weight
// discarded above n_max stays below tail_tol for the nbar it was built for.
struct FockTruncation {
    int n_max;
    double tail_tol;
    double nbar;
};

// Poisson mass above n_max for mean nbar, summed directly (no 1 - head cancellation).
double poisson_tail(double nbar, int n_max);

// Smallest N of the form ceil(nbar + k*sqrt(nbar) + 10), k = 4, 6, 8, ...,
// with tail mass < tail_tol; never below 16.
FockTruncation truncation_order(double nbar, double tail_tol = 1e-12);

struct CoherentField {
    double nbar;
    double amplitude;   // sqrt(nbar), taken real positive
    RealVector coeffs;  // c_n = e^{-nbar/2} nbar^{n/2} / sqrt(n!), n = 0..n_max
};

CoherentField coherent_state(double nbar, const FockTruncation& trunc);

// Joint atom-field unitary of the resonant Jaynes-Cummings interaction at
// fixed interaction time Omega0*t = theta/sqrt(nbar), on the truncated space.
// Basis ordering is atom ⊗ field: index a*(n_max+1) + n, a in {g=0, e=1}.
//
// The operator is block-bidiagonal, so only four coefficient bands are stored:
//   U|g,n> = cos_lower[n]|g,n> + phase_plus * sin_lower[n] |e,n-1>
//   U|e,n> = cos_upper[n]|e,n> + phase_minus * sin_upper[n] |g,n+1>   (n < n_max)
//   U|e,n_max> = cos_upper[n_max]|e,n_max>
// The raising coupling out of the top level is dropped by the truncation; the
// resulting sub-unit column is repaired by the polar projection onto the
// unitary group, which here reduces to replacing cos_upper[n_max] by its sign.
class JointUnitary {
public:
    JointUnitary(double theta, double phi, double nbar, int n_max);

    int n_max() const { return n_max_; }
    int dim() const { return 2 * (n_max_ + 1); }
    double theta() const { return theta_; }
    double phi() const { return phi_; }
    double nbar() const { return nbar_; }

    const RealVector& cos_lower() const { return cos_lower_; }
    const RealVector& cos_upper() const { return cos_upper_; }
    const RealVector& sin_lower() const { return sin_lower_; }
    const RealVector& sin_upper() const { return sin_upper_; }
    Complex phase_minus() const { return phase_minus_; }  // -i e^{-i phi}
    Complex phase_plus() const { return phase_plus_; }    // -i e^{+i phi}

    // In-place application to a state laid out with the given strides; the
    // atom index steps by atom_stride and the field index by field_stride.
    void apply_strided(Complex* state, std::ptrdiff_t atom_stride,
                       std::ptrdiff_t field_stride) const;

    // Plain application to a 2*(n_max+1) vector in atom ⊗ field layout.
    void apply(Eigen::Ref<Vector> state) const;

    // Dense matrix; intended for moderate truncations.
    Matrix matrix() const;

private:
    double theta_, phi_, nbar_;
    int n_max_;
    RealVector cos_lower_, cos_upper_, sin_lower_, sin_upper_;
    Complex phase_minus_, phase_plus_;
};

JointUnitary jc_unitary(double theta, double phi, double nbar, const FockTruncation& trunc);

// Kraus operators A_n = (1 ⊗ <n|) U (1 ⊗ |alpha>), n = 0..n_max, of the
// reduced qubit dynamics; extracted from the truncated unitary and coherent
// vector so that sum A_n X A_n† equals the field trace of U(X ⊗ |a><a|)U†
// exactly on the truncated space.
std::vector<Matrix2> kraus_operators(double theta, double phi, double nbar,
                                     const FockTruncation& trunc);

}  // namespace causalbench::fock
