#include "causalbench/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace causalbench::channels {

QubitChannel make_channel(std::vector<Matrix2> kraus) {
    Matrix2 s = Matrix2::Zero();
    for (const auto& k : kraus) s += k.adjoint() * k;
    const double defect = (s - Matrix2::Identity()).cwiseAbs().maxCoeff();
    return {std::move(kraus), defect};
}

QubitChannel identity_channel() { return make_channel({Matrix2::Identity()}); }

QubitChannel jc_channel(double theta, double phi, double nbar,
                        const fock::FockTruncation& trunc) {
    return make_channel(fock::kraus_operators(theta, phi, nbar, trunc));
}

Matrix2 apply_channel(const QubitChannel& ch, const Matrix2& x) {
    Matrix2 out = Matrix2::Zero();
    for (const auto& k : ch.kraus) out += k * x * k.adjoint();
    return out;
}

namespace {

// vec'(A)[2i+j] = A(j,i): column of the Choi matrix generated by Kraus A
Eigen::Vector4cd choi_vec(const Matrix2& a) {
    Eigen::Vector4cd v;
    v << a(0, 0), a(1, 0), a(0, 1), a(1, 1);
    return v;
}

}  // namespace

ChoiMatrix choi_of_channel(const QubitChannel& ch) {
    Matrix m = Matrix::Zero(4, 4);
    for (const auto& k : ch.kraus) {
        const auto v = choi_vec(k);
        m += v * v.adjoint();
    }
    return {2, 2, std::move(m)};
}

ChoiMatrix choi_of_unitary(const Matrix2& u) {
    const auto v = choi_vec(u);
    Matrix m = v * v.adjoint();
    return {2, 2, std::move(m)};
}

Rotation Rotation::equatorial(double theta, double phi) {
    const Matrix2 axis = std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y();
    Rotation r;
    r.u = std::cos(theta / 2) * Matrix2::Identity() -
          Complex(0, 1) * std::sin(theta / 2) * axis;
    return r;
}

Rotation Rotation::pi_tilted(double phi_a, double varphi_b) {
    const Matrix2 axis = std::sin(phi_a) * std::sin(varphi_b) * pauli_x() -
                         std::cos(phi_a) * std::sin(varphi_b) * pauli_y() +
                         std::cos(varphi_b) * pauli_z();
    Rotation r;
    r.u = -Complex(0, 1) * axis;
    return r;
}

Matrix4 ideal_rotation_choi(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex is(0.0, s);
    Matrix4 m;
    m << 1.0 + c, is, is, 1.0 + c,
        -is, 1.0 - c, 1.0 - c, -is,
        -is, 1.0 - c, 1.0 - c, -is,
        1.0 + c, is, is, 1.0 + c;
    return 0.5 * m;
}

void apply_azimuth_phases(Matrix4& m, double phi) {
    const Complex ep = std::polar(1.0, phi);
    const Complex em = std::conj(ep);
    // row/column 1 gains e^{+i phi}, row/column 2 gains e^{-i phi} (0-based),
    // with rows phased as (e^{+i phi}, e^{-i phi}) and columns the opposite way
    for (int j = 0; j < 4; ++j) {
        m(1, j) *= ep;
        m(2, j) *= em;
    }
    for (int i = 0; i < 4; ++i) {
        m(i, 2) *= ep;
        m(i, 1) *= em;
    }
}

ChoiMatrix jc_first_order_choi(double theta, double phi, double nbar) {
    if (!(nbar > 0.0)) throw std::invalid_argument("jc_first_order_choi: nbar must be positive");
    const double c = std::cos(theta), s = std::sin(theta), t = theta;
    const Complex i1(0.0, 1.0);
    Matrix4 corr;
    const Complex a01 = -i1 * (s - t * (2.0 - c) + t * t * s);
    const Complex a02 = -i1 * (s - t * c + t * t * s);
    const Complex a23 = i1 * (s + t * (2.0 - 3.0 * c) + t * t * s);
    corr << t * s - t * t * c, a01, a02, -t * s - t * t * c,
        -a01, -t * s + t * t * c, -4.0 * (1.0 - c) + t * s + t * t * c, -a02,
        -a02, -4.0 * (1.0 - c) + t * s + t * t * c, 3.0 * t * s + t * t * c, a23,
        -t * s - t * t * c, a02, -a23, -3.0 * t * s - t * t * c;
    Matrix4 m = ideal_rotation_choi(theta) + corr / (16.0 * nbar);
    apply_azimuth_phases(m, phi);
    return {2, 2, m};
}

Matrix2 coherent_sandwich(double theta, double phi, double field_nbar,
                          const fock::FockTruncation& trunc) {
    const auto kraus = fock::kraus_operators(theta, phi, field_nbar, trunc);
    const auto field = fock::coherent_state(field_nbar, trunc);
    Matrix2 g = Matrix2::Zero();
    for (int n = 0; n <= trunc.n_max; ++n) g += field.coeffs[n] * kraus[size_t(n)];
    return g;
}

Matrix2 four_box_kraus(double theta, double phi, double nbar_total,
                       const fock::FockTruncation& trunc_half) {
    if (!(nbar_total > 0.0)) throw std::invalid_argument("four_box_kraus: nbar must be positive");
    return coherent_sandwich(theta, phi, nbar_total / 2.0, trunc_half);
}

ChoiMatrix four_box_first_order_choi(double theta, double phi, double nbar_total) {
    if (!(nbar_total > 0.0))
        throw std::invalid_argument("four_box_first_order_choi: nbar must be positive");
    const double c = std::cos(theta), s = std::sin(theta), t = theta;
    const Complex i1(0.0, 1.0);
    const double d00 = t * s - t * t / 2.0 * (1.0 + c);
    const double d11 = -2.0 * (1.0 - c) + t * s - t * t / 2.0 * (1.0 - c);
    const double d33 = -3.0 * t * s - t * t / 2.0 * (1.0 + c);
    const double a03r = -t * s - t * t / 2.0 * (1.0 + c);
    const Complex a01 = -i1 * (s - t + t * t / 2.0 * s);
    const Complex a13 = i1 * (s + t * (1.0 - 2.0 * c) + t * t / 2.0 * s);
    Matrix4 corr;
    corr << d00, a01, a01, a03r,
        -a01, d11, d11, a13,
        -a01, d11, d11, a13,
        a03r, -a13, -a13, d33;
    Matrix4 m = ideal_rotation_choi(theta) + corr / (8.0 * nbar_total);
    apply_azimuth_phases(m, phi);
    return {2, 2, m};
}

double average_gate_fidelity(const QubitChannel& ch, const Rotation& target) {
    const Matrix2 sigmas[3] = {pauli_x(), pauli_y(), pauli_z()};
    double sum = 0.0;
    for (const auto& s : sigmas) {
        const Matrix2 ideal = target.u * s * target.u.adjoint();
        sum += (ideal * apply_channel(ch, s)).trace().real();
    }
    return 0.5 + sum / 12.0;
}

namespace {

struct FactorIndexer {
    std::vector<int> dims;
    int total;
    explicit FactorIndexer(const std::vector<int>& d) : dims(d) {
        total = 1;
        for (int x : d) total *= x;
    }
    void decompose(int idx, std::vector<int>& out) const {
        for (int q = int(dims.size()) - 1; q >= 0; --q) {
            out[size_t(q)] = idx % dims[size_t(q)];
            idx /= dims[size_t(q)];
        }
    }
    int compose(const std::vector<int>& multi) const {
        int idx = 0;
        for (size_t q = 0; q < dims.size(); ++q) idx = idx * dims[q] + multi[q];
        return idx;
    }
};

void check_dims(const Matrix& m, const FactorIndexer& fx, const char* who) {
    if (m.rows() != fx.total || m.cols() != fx.total)
        throw std::invalid_argument(std::string(who) + ": dims do not match matrix size");
}

}  // namespace

Matrix trace_to(const Matrix& m, const std::vector<int>& dims, const std::vector<int>& kept) {
    FactorIndexer fx(dims);
    check_dims(m, fx, "trace_to");
    std::vector<int> traced;
    for (int q = 0; q < int(dims.size()); ++q)
        if (std::find(kept.begin(), kept.end(), q) == kept.end()) traced.push_back(q);
    int kept_dim = 1, traced_dim = 1;
    for (int q : kept) kept_dim *= dims[size_t(q)];
    for (int q : traced) traced_dim *= dims[size_t(q)];
    Matrix out = Matrix::Zero(kept_dim, kept_dim);
    std::vector<int> rm(dims.size()), cm(dims.size());
    for (int r = 0; r < kept_dim; ++r) {
        int rr = r;
        for (int a = int(kept.size()) - 1; a >= 0; --a) {
            rm[size_t(kept[size_t(a)])] = rr % dims[size_t(kept[size_t(a)])];
            rr /= dims[size_t(kept[size_t(a)])];
        }
        for (int c = 0; c < kept_dim; ++c) {
            int cc = c;
            for (int a = int(kept.size()) - 1; a >= 0; --a) {
                cm[size_t(kept[size_t(a)])] = cc % dims[size_t(kept[size_t(a)])];
                cc /= dims[size_t(kept[size_t(a)])];
            }
            Complex sum = 0.0;
            for (int t = 0; t < traced_dim; ++t) {
                int tt = t;
                for (int a = int(traced.size()) - 1; a >= 0; --a) {
                    const int q = traced[size_t(a)];
                    rm[size_t(q)] = cm[size_t(q)] = tt % dims[size_t(q)];
                    tt /= dims[size_t(q)];
                }
                sum += m(fx.compose(rm), fx.compose(cm));
            }
            out(r, c) = sum;
        }
    }
    return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& traced) {
    std::vector<int> kept;
    for (int q = 0; q < int(dims.size()); ++q)
        if (std::find(traced.begin(), traced.end(), q) == traced.end()) kept.push_back(q);
    return trace_to(m, dims, kept);
}

Matrix partial_transpose(const Matrix& m, const std::vector<int>& dims,
                         const std::vector<int>& transposed) {
    FactorIndexer fx(dims);
    check_dims(m, fx, "partial_transpose");
    Matrix out(fx.total, fx.total);
    std::vector<int> rm(dims.size()), cm(dims.size());
    for (int r = 0; r < fx.total; ++r) {
        fx.decompose(r, rm);
        for (int c = 0; c < fx.total; ++c) {
            fx.decompose(c, cm);
            std::vector<int> rs = rm, cs = cm;
            for (int q : transposed) std::swap(rs[size_t(q)], cs[size_t(q)]);
            out(fx.compose(rs), fx.compose(cs)) = m(r, c);
        }
    }
    return out;
}

Matrix embed(const Matrix& op, const std::vector<int>& dims,
             const std::vector<int>& positions) {
    FactorIndexer fx(dims);
    int op_dim = 1;
    for (int q : positions) op_dim *= dims[size_t(q)];
    if (op.rows() != op_dim || op.cols() != op_dim)
        throw std::invalid_argument("embed: operator size does not match listed factors");
    Matrix out = Matrix::Zero(fx.total, fx.total);
    std::vector<int> rm(dims.size()), cm(dims.size());
    for (int r = 0; r < fx.total; ++r) {
        fx.decompose(r, rm);
        int rop = 0;
        for (int q : positions) rop = rop * dims[size_t(q)] + rm[size_t(q)];
        for (int c = 0; c < fx.total; ++c) {
            fx.decompose(c, cm);
            bool diag = true;
            for (int q = 0; q < int(dims.size()); ++q) {
                if (std::find(positions.begin(), positions.end(), q) != positions.end()) continue;
                if (rm[size_t(q)] != cm[size_t(q)]) { diag = false; break; }
            }
            if (!diag) continue;
            int cop = 0;
            for (int q : positions) cop = cop * dims[size_t(q)] + cm[size_t(q)];
            out(r, c) = op(rop, cop);
        }
    }
    return out;
}

}  // namespace causalbench::channels
