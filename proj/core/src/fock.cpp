#include "causalbench/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace causalbench::fock {

double poisson_tail(double nbar, int n_max) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("poisson_tail: bad nbar");
    if (nbar == 0.0) return 0.0;
    const int n0 = n_max + 1;
    double log_w = -nbar + n0 * std::log(nbar) - std::lgamma(double(n0) + 1.0);
    double w = std::exp(log_w);
    double tail = 0.0;
    for (int n = n0; n < n0 + 1000000; ++n) {
        tail += w;
        w *= nbar / double(n + 1);
        if (w < tail * 1e-18 && n > n0 + 4) break;
        if (w < 1e-320) break;
    }
    return tail;
}

FockTruncation truncation_order(double nbar, double tail_tol) {
    if (!std::isfinite(nbar) || nbar < 0.0) throw std::invalid_argument("truncation_order: bad nbar");
    if (!std::isfinite(tail_tol) || tail_tol <= 0.0 || tail_tol >= 1.0)
        throw std::invalid_argument("truncation_order: tail_tol must be in (0,1)");
    const double root = std::sqrt(nbar);
    for (int k = 4; k <= 200; k += 2) {
        int n = std::max(16, int(std::ceil(nbar + k * root + 10.0)));
        if (poisson_tail(nbar, n) < tail_tol) return {n, tail_tol, nbar};
    }
    throw std::runtime_error("truncation_order: tail tolerance not reachable");
}

CoherentField coherent_state(double nbar, const FockTruncation& trunc) {
    if (!std::isfinite(nbar) || nbar < 0.0) throw std::invalid_argument("coherent_state: bad nbar");
    RealVector c(trunc.n_max + 1);
    const double root = std::sqrt(nbar);
    if (nbar < 1200.0) {
        c[0] = std::exp(-nbar / 2.0);
        for (int n = 0; n < trunc.n_max; ++n)
            c[n + 1] = c[n] * root / std::sqrt(double(n + 1));
    } else {
        // e^{-nbar/2} underflows, so anchor the same ratio recursion at the
        // Poisson peak, seeded from the log form
        const int peak = std::min(trunc.n_max, int(nbar));
        c[peak] = std::exp(-nbar / 2.0 + peak / 2.0 * std::log(nbar) -
                           0.5 * std::lgamma(double(peak) + 1.0));
        for (int n = peak; n < trunc.n_max; ++n)
            c[n + 1] = c[n] * root / std::sqrt(double(n + 1));
        for (int n = peak; n > 0; --n)
            c[n - 1] = c[n] * std::sqrt(double(n)) / root;
    }
    return {nbar, root, std::move(c)};
}

JointUnitary::JointUnitary(double theta, double phi, double nbar, int n_max)
    : theta_(theta), phi_(phi), nbar_(nbar), n_max_(n_max) {
    if (!(nbar > 0.0) || !std::isfinite(nbar))
        throw std::invalid_argument("jc_unitary: nbar must be positive (interaction time undefined at 0)");
    if (!std::isfinite(theta) || theta < -pi || theta > pi)
        throw std::invalid_argument("jc_unitary: theta must lie in [-pi, pi]");
    if (!std::isfinite(phi)) throw std::invalid_argument("jc_unitary: bad phi");
    const double half = theta / (2.0 * std::sqrt(nbar));
    cos_lower_.resize(n_max + 1);
    cos_upper_.resize(n_max + 1);
    sin_lower_.resize(n_max + 1);
    sin_upper_.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double rl = std::sqrt(double(n));
        const double ru = std::sqrt(double(n + 1));
        cos_lower_[n] = std::cos(half * rl);
        cos_upper_[n] = std::cos(half * ru);
        sin_lower_[n] = std::sin(half * rl);
        sin_upper_[n] = std::sin(half * ru);
    }
    // polar repair of the truncated top column (see header)
    const double top = cos_upper_[n_max];
    cos_upper_[n_max] = (top == 0.0) ? 1.0 : (top > 0.0 ? 1.0 : -1.0);
    phase_minus_ = Complex(0.0, -1.0) * std::polar(1.0, -phi);
    phase_plus_ = Complex(0.0, -1.0) * std::polar(1.0, phi);
}

void JointUnitary::apply_strided(Complex* state, std::ptrdiff_t atom_stride,
                                 std::ptrdiff_t field_stride) const {
    const int nmax = n_max_;
    Complex* g = state;
    Complex* e = state + atom_stride;
    // walk downward so |e,n-1> sources are read before being overwritten
    const Complex top_e = cos_upper_[nmax] * e[nmax * field_stride];
    for (int n = nmax; n >= 1; --n) {
        const Complex gn = g[n * field_stride];
        const Complex em = e[(n - 1) * field_stride];
        g[n * field_stride] = cos_lower_[n] * gn + phase_minus_ * sin_lower_[n] * em;
        e[(n - 1) * field_stride] = cos_upper_[n - 1] * em + phase_plus_ * sin_lower_[n] * gn;
    }
    // |g,0> is untouched (cos_lower_[0] = 1, sin_lower_[0] = 0)
    e[nmax * field_stride] = top_e;
}

void JointUnitary::apply(Eigen::Ref<Vector> state) const {
    apply_strided(state.data(), n_max_ + 1, 1);
}

Matrix JointUnitary::matrix() const {
    const int d = n_max_ + 1;
    Matrix u = Matrix::Zero(2 * d, 2 * d);
    for (int n = 0; n < d; ++n) {
        u(n, n) = cos_lower_[n];
        u(d + n, d + n) = cos_upper_[n];
        if (n >= 1) u(d + n - 1, n) = phase_plus_ * sin_lower_[n];
        if (n + 1 < d) u(n + 1, d + n) = phase_minus_ * sin_upper_[n];
    }
    return u;
}

JointUnitary jc_unitary(double theta, double phi, double nbar, const FockTruncation& trunc) {
    return JointUnitary(theta, phi, nbar, trunc.n_max);
}

std::vector<Matrix2> kraus_operators(double theta, double phi, double nbar,
                                     const FockTruncation& trunc) {
    const JointUnitary u(theta, phi, nbar, trunc.n_max);
    const CoherentField field = coherent_state(nbar, trunc);
    const int nmax = trunc.n_max;
    std::vector<Matrix2> kraus(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        Matrix2 a;
        a(0, 0) = field.coeffs[n] * u.cos_lower()[n];
        a(0, 1) = (n >= 1) ? u.phase_minus() * field.coeffs[n - 1] * u.sin_lower()[n] : Complex(0.0);
        a(1, 0) = (n + 1 <= nmax) ? u.phase_plus() * field.coeffs[n + 1] * u.sin_upper()[n] : Complex(0.0);
        a(1, 1) = field.coeffs[n] * u.cos_upper()[n];
        kraus[n] = a;
    }
    return kraus;
}

}  // namespace causalbench::fock
