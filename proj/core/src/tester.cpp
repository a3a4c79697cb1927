#include "causalbench/tester.hpp"

#include "causalbench/parallel.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causalbench::tester {

namespace {

const std::vector<int> dims4{2, 2, 2, 2};

// factor positions of the three-factor marginal M in A_I ⊗ A_O ⊗ B_I ⊗ B_O
std::vector<int> marginal_positions(Order order) {
    return order == Order::a_before_b ? std::vector<int>{0, 1, 2} : std::vector<int>{2, 3, 0};
}

Matrix kron2(const Matrix& a, const Matrix& b) { return kron(a, b); }

}  // namespace

double TesterResiduals::max() const {
    return std::max({psd_plus, psd_minus, reconstruction, marginal, normalization});
}

TesterResiduals constraint_residuals(Order order, const Matrix& w_plus, const Matrix& w_minus) {
    TesterResiduals r;
    r.psd_plus = std::max(0.0, -min_eigenvalue(w_plus));
    r.psd_minus = std::max(0.0, -min_eigenvalue(w_minus));
    const Matrix total = w_plus + w_minus;
    const auto mpos = marginal_positions(order);
    const Matrix m = channels::trace_to(total, dims4, mpos) / 2.0;
    r.reconstruction = max_abs(total - channels::embed(m, dims4, mpos));
    const std::vector<int> dims3{2, 2, 2};
    const Matrix n = channels::trace_to(m, dims3, {0, 1});  // trace the second slot's input
    const std::vector<int> dims2{2, 2};
    const Matrix v = channels::trace_to(n, dims2, {0}) / 2.0;
    r.marginal = max_abs(n - kron2(v, Matrix::Identity(2, 2)));
    r.normalization = std::abs(v.trace() - Complex(1.0));
    return r;
}

Tester make_tester(Order order, Matrix w_plus, Matrix w_minus) {
    Tester t;
    t.order = order;
    t.w_plus = std::move(w_plus);
    t.w_minus = std::move(w_minus);
    t.residuals = constraint_residuals(order, t.w_plus, t.w_minus);
    return t;
}

std::pair<double, double> tester_probabilities(const Tester& t,
                                               const channels::ChoiMatrix& choi_a,
                                               const channels::ChoiMatrix& choi_b) {
    if (choi_a.m.rows() != 4 || choi_b.m.rows() != 4)
        throw std::invalid_argument("tester_probabilities: expected 4x4 Choi matrices");
    const Matrix ab = kron2(choi_a.m, choi_b.m);
    const double pp = (t.w_plus.transpose() * ab).trace().real();
    const double pm = (t.w_minus.transpose() * ab).trace().real();
    return {pp, pm};
}

PayoffPair ideal_payoff() {
    const Matrix i4 = Matrix::Identity(4, 4);
    const Matrix sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
    const Matrix xx = kron2(sx, sx), yy = kron2(sy, sy), zz = kron2(sz, sz);
    const Matrix f1 = i4 + 0.5 * xx - 0.5 * yy;
    const Matrix xy_sum = xx + yy;
    const Matrix xy_comm = kron2(sx, sy) - kron2(sy, sx);
    PayoffPair p;
    p.provenance = Provenance::ideal;
    p.g_plus = 0.25 * (kron2(f1, f1) + kron2(xy_sum, xy_sum) / 8.0 +
                       kron2(xy_comm, xy_comm) / 8.0);
    const Matrix g1 = i4 - zz;
    const Matrix g2 = i4 - 0.5 * xx + 0.5 * yy;
    p.g_minus = 0.25 * (kron2(g1, g2) - kron2(xy_sum, xy_sum) / 4.0 -
                        kron2(xy_comm, xy_comm) / 4.0);
    return p;
}

PayoffPair finite_payoff(double nbar, const PayoffGrids& grids,
                         const fock::FockTruncation& trunc) {
    if (!(nbar > 0.0)) throw std::invalid_argument("finite_payoff: nbar must be positive");
    auto node = [](int k, int n) { return -pi + 2.0 * pi * double(k) / double(n); };

    Matrix gp = Matrix::Zero(16, 16);
    for (int i = 0; i < grids.n_phi; ++i) {
        const double phi = node(i, grids.n_phi);
        Matrix slot_a = Matrix::Zero(4, 4);
        Matrix slot_b = Matrix::Zero(4, 4);
        for (int j = 0; j < grids.n_theta; ++j) {
            const double theta = node(j, grids.n_theta);
            slot_a += channels::choi_of_channel(channels::jc_channel(theta, phi, nbar, trunc)).m;
            slot_b += channels::choi_of_unitary(channels::Rotation::equatorial(theta, phi).u).m;
        }
        gp += kron2(slot_a, slot_b) / double(grids.n_theta * grids.n_theta);
    }
    gp /= double(grids.n_phi);

    Matrix gm = Matrix::Zero(16, 16);
    for (int i = 0; i < grids.n_phi_a; ++i) {
        const double phi_a = node(i, grids.n_phi_a);
        const Matrix slot_a =
            channels::choi_of_channel(channels::jc_channel(pi, phi_a, nbar, trunc)).m;
        Matrix slot_b = Matrix::Zero(4, 4);
        for (int j = 0; j < grids.n_varphi_b; ++j) {
            const double vb = node(j, grids.n_varphi_b);
            slot_b += channels::choi_of_unitary(channels::Rotation::pi_tilted(phi_a, vb).u).m;
        }
        gm += kron2(slot_a, slot_b) / double(grids.n_varphi_b);
    }
    gm /= double(grids.n_phi_a);

    PayoffPair p;
    p.provenance = Provenance::finite;
    p.nbar = nbar;
    p.g_plus = std::move(gp);
    p.g_minus = std::move(gm);
    return p;
}

PayoffPair haar_payoff() {
    const Matrix i4 = Matrix::Identity(4, 4);
    const Matrix i16 = Matrix::Identity(16, 16);
    const Matrix2 sigmas[3] = {pauli_x(), pauli_y(), pauli_z()};
    Matrix s1 = Matrix::Zero(4, 4);
    for (const auto& s : sigmas) s1 += kron2(s, s.transpose());
    Matrix s2 = Matrix::Zero(16, 16);
    for (const auto& si : sigmas)
        for (const auto& sj : sigmas) {
            s2 += kron2(kron2(si, sj.transpose()), kron2(si, sj.transpose()));
            s2 += kron2(kron2(si, sj.transpose()), kron2(sj, si.transpose()));
        }
    PayoffPair p;
    p.provenance = Provenance::haar;
    p.g_plus = 0.25 * (i16 + kron2(i4, s1) / 3.0 + kron2(s1, i4) / 3.0 +
                       kron2(s1, s1) / 15.0 + s2 / 15.0);
    p.g_minus = 0.25 * (i16 - kron2(i4, s1) / 3.0 - kron2(s1, i4) / 3.0 +
                        kron2(s1, s1) / 5.0 - 2.0 * s2 / 15.0);
    return p;
}

namespace {

Vector max_ent_ket() {  // |1>> = |00> + |11>
    Vector v = Vector::Zero(4);
    v[0] = 1.0;
    v[3] = 1.0;
    return v;
}

Vector sigma_y_ket() {  // |sy>> = i(|01> - |10>)
    Vector v = Vector::Zero(4);
    v[1] = Complex(0.0, 1.0);
    v[2] = Complex(0.0, -1.0);
    return v;
}

Matrix antisymmetric_triple() {
    const Matrix2 p[3] = {pauli_x(), pauli_y(), pauli_z()};
    struct Term {
        int a, b, c;
        double sign;
    };
    const Term terms[6] = {{0, 1, 2, 1.0}, {0, 2, 1, 1.0},  {1, 0, 2, 1.0},
                           {2, 1, 0, -1.0}, {2, 0, 1, -1.0}, {1, 2, 0, -1.0}};
    Matrix m = Matrix::Zero(8, 8);
    for (const auto& t : terms)
        m += t.sign * kron(kron(Matrix(p[t.a]), Matrix(p[t.b])), Matrix(p[t.c]));
    return m;
}

}  // namespace

IsotropicBasis isotropic_basis() {
    const Matrix i4 = Matrix::Identity(4, 4);
    const Vector k1 = max_ent_ket(), ky = sigma_y_ket();
    const Matrix K1 = k1 * k1.adjoint();
    const Matrix Ky = ky * ky.adjoint();
    const Matrix T = antisymmetric_triple();

    std::vector<Matrix> raw;
    raw.push_back(Matrix::Identity(16, 16));
    raw.push_back(kron(K1, i4));
    raw.push_back(kron(i4, K1));
    raw.push_back(kron(K1, K1));
    raw.push_back(channels::embed(kron(K1, i4), dims4, {0, 3, 2, 1}));
    raw.push_back(channels::embed(kron(i4, K1), dims4, {0, 3, 2, 1}));
    raw.push_back(channels::embed(kron(K1, K1), dims4, {0, 3, 2, 1}));
    raw.push_back(channels::embed(kron(Ky, i4), dims4, {0, 2, 1, 3}));
    raw.push_back(channels::embed(kron(i4, Ky), dims4, {0, 2, 1, 3}));
    raw.push_back(channels::embed(kron(Ky, Ky), dims4, {0, 2, 1, 3}));
    raw.push_back(channels::embed(T, dims4, {0, 1, 2}));
    raw.push_back(channels::embed(T, dims4, {1, 2, 3}));
    raw.push_back(channels::embed(T, dims4, {2, 3, 0}));
    raw.push_back(channels::embed(T, dims4, {3, 0, 1}));

    // modified Gram-Schmidt under the Hilbert-Schmidt inner product
    IsotropicBasis basis;
    for (auto& candidate : raw) {
        Matrix r = candidate;
        for (const auto& b : basis.ops) r -= hs_inner(b, r) * b;
        for (const auto& b : basis.ops) r -= hs_inner(b, r) * b;  // re-orthogonalize
        const double norm = std::sqrt(hs_inner(r, r).real());
        if (norm < 1e-8)
            throw std::runtime_error("isotropic_basis: spanning set is rank deficient");
        basis.ops.push_back(r / norm);
    }
    if (basis.ops.size() != 14)
        throw std::runtime_error("isotropic_basis: rank is not 14");
    return basis;
}

Matrix IsotropicBasis::project(const Matrix& x) const {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& b : ops) out += hs_inner(b, x) * b;
    return out;
}

double IsotropicBasis::projection_residual(const Matrix& x) const {
    return max_abs(x - project(x));
}

namespace {

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

}  // namespace

Matrix2 haar_unitary(std::mt19937_64& rng) {
    Matrix2 z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            z(i, j) = Complex(gaussian(rng), gaussian(rng)) / std::sqrt(2.0);
    Eigen::HouseholderQR<Matrix2> qr(z);
    Matrix2 q = qr.householderQ();
    const Matrix2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 2; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a == 0.0) ? Complex(1.0) : d / a;
    }
    return q;
}

Matrix four_port_conjugate(const Matrix& g, const Matrix2& v) {
    const Matrix2 vt = v.transpose();
    const Matrix2 vd = v.adjoint();
    const Matrix port = kron(Matrix(vt), Matrix(vd));
    const Matrix m = kron(port, port);
    return m * g * m.adjoint();
}

namespace {

Matrix pairwise_matrix_sum(const std::vector<Matrix>& parts, std::size_t begin, std::size_t end) {
    if (end - begin == 1) return parts[begin];
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_matrix_sum(parts, begin, mid) + pairwise_matrix_sum(parts, mid, end);
}

}  // namespace

PayoffPair haar_average_oracle(const PayoffPair& payoff, int samples, std::uint64_t seed,
                               int threads) {
    if (samples < 1) throw std::invalid_argument("haar_average_oracle: samples must be >= 1");
    constexpr int block = 256;
    const std::size_t n_blocks = std::size_t((samples + block - 1) / block);
    std::vector<Matrix> parts_p(n_blocks), parts_m(n_blocks);
    parallel_for(n_blocks, threads, [&](std::size_t bi) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * (bi + 1));
        const int lo = int(bi) * block;
        const int hi = std::min(samples, lo + block);
        Matrix acc_p = Matrix::Zero(16, 16), acc_m = Matrix::Zero(16, 16);
        for (int s = lo; s < hi; ++s) {
            const Matrix2 v = haar_unitary(rng);
            acc_p += four_port_conjugate(payoff.g_plus, v);
            acc_m += four_port_conjugate(payoff.g_minus, v);
        }
        parts_p[bi] = std::move(acc_p);
        parts_m[bi] = std::move(acc_m);
    });
    PayoffPair out;
    out.provenance = Provenance::haar;
    out.nbar = payoff.nbar;
    out.g_plus = pairwise_matrix_sum(parts_p, 0, n_blocks) / double(samples);
    out.g_minus = pairwise_matrix_sum(parts_m, 0, n_blocks) / double(samples);
    return out;
}

namespace {

// Choi matrix (input factor first) of a channel given by a Kraus list with
// rectangular elements: each K maps d_in -> d_out.
Matrix choi_of_kraus_list(const std::vector<Matrix>& kraus) {
    const Eigen::Index d_in = kraus.front().cols();
    const Eigen::Index d_out = kraus.front().rows();
    Matrix m = Matrix::Zero(d_in * d_out, d_in * d_out);
    for (const auto& k : kraus) {
        Vector v(d_in * d_out);
        for (Eigen::Index i = 0; i < d_in; ++i)
            for (Eigen::Index j = 0; j < d_out; ++j) v[i * d_out + j] = k(j, i);
        m += v * v.adjoint();
    }
    return m;
}

}  // namespace

Tester tester_from_circuit(const CircuitElements& circuit) {
    const int da = circuit.dim_a, db = circuit.dim_b;
    if (circuit.rho.rows() != 2 * db || circuit.e_plus.rows() != 2 * da ||
        circuit.channel.empty() || circuit.channel.front().rows() != 2 * da ||
        circuit.channel.front().cols() != 2 * db)
        throw std::invalid_argument("tester_from_circuit: inconsistent memory dimensions");

    // global space A_I ⊗ A_O ⊗ B_I ⊗ B_O ⊗ a ⊗ b
    const std::vector<int> dims{2, 2, 2, 2, da, db};
    const bool ab = circuit.order == Order::a_before_b;
    const int slot1_in = ab ? 0 : 2;   // where rho lives
    const int slot1_out = ab ? 1 : 3;  // input side of the channel
    const int slot2_in = ab ? 2 : 0;   // output side of the channel
    const int slot2_out = ab ? 3 : 1;  // where the POVM lives

    // Choi of the connecting channel on (slot1_out, b, slot2_in, a), memories transposed
    const std::vector<int> choi_dims{2, db, 2, da};
    const Matrix choi_c =
        channels::partial_transpose(choi_of_kraus_list(circuit.channel), choi_dims, {1, 3});
    const Matrix c_emb = channels::embed(choi_c, dims, {slot1_out, 5, slot2_in, 4});

    const Matrix rho_emb = channels::embed(circuit.rho, dims, {slot1_in, 5});

    auto contract = [&](const Matrix& e) {
        const Matrix e_emb = channels::embed(e.transpose(), dims, {slot2_out, 4});
        return channels::trace_to(e_emb * c_emb * rho_emb, dims, {0, 1, 2, 3});
    };
    return make_tester(circuit.order, contract(circuit.e_plus), contract(circuit.e_minus));
}

std::pair<double, double> simulate_circuit(const CircuitElements& circuit,
                                           const channels::QubitChannel& op_a,
                                           const channels::QubitChannel& op_b) {
    const int da = circuit.dim_a, db = circuit.dim_b;
    const auto& first = circuit.order == Order::a_before_b ? op_a : op_b;
    const auto& second = circuit.order == Order::a_before_b ? op_b : op_a;
    const Matrix ib = Matrix::Identity(db, db);
    const Matrix ia = Matrix::Identity(da, da);

    Matrix state = Matrix::Zero(2 * db, 2 * db);
    for (const auto& k : first.kraus) {
        const Matrix kk = kron(Matrix(k), ib);
        state += kk * circuit.rho * kk.adjoint();
    }
    Matrix mid = Matrix::Zero(2 * da, 2 * da);
    for (const auto& k : circuit.channel) mid += k * state * k.adjoint();
    Matrix out = Matrix::Zero(2 * da, 2 * da);
    for (const auto& k : second.kraus) {
        const Matrix kk = kron(Matrix(k), ia);
        out += kk * mid * kk.adjoint();
    }
    return {(circuit.e_plus * out).trace().real(), (circuit.e_minus * out).trace().real()};
}

CircuitElements perfect_discrimination_circuit() {
    CircuitElements c;
    c.order = Order::b_before_a;
    c.dim_b = 2;
    c.dim_a = 6;  // a1 (dim 2) ⊗ a2 (dim 3), index 3*i_a1 + i_a2

    Vector bell = Vector::Zero(4);
    bell[0] = 1.0 / std::sqrt(2.0);
    bell[3] = 1.0 / std::sqrt(2.0);
    c.rho = bell * bell.adjoint();

    // isometry from B_O ⊗ b (cols |00>,|01>,|10>,|11>) to A_I ⊗ a1 ⊗ a2
    Matrix v = Matrix::Zero(12, 4);
    auto ket_bell_a2 = [](int m) {
        Vector k = Vector::Zero(12);
        k[m] = 1.0 / std::sqrt(2.0);      // |0>^{A_I}|0>^{a1}|m>
        k[9 + m] = 1.0 / std::sqrt(2.0);  // |1>^{A_I}|1>^{a1}|m>
        return k;
    };
    v.col(0) = ket_bell_a2(0);
    v.col(3) = ket_bell_a2(1);
    v.col(1) = Vector::Unit(12, 5);  // |0>^{A_I}|1>^{a1}|2>^{a2}
    v.col(2) = Vector::Unit(12, 8);  // |1>^{A_I}|0>^{a1}|2>^{a2}
    c.channel = {v};

    // outcome '-' collects span{|01>,|10>}^{A_O a1} ⊗ |->^{a2} and |Phi->|2>
    auto minus_vec = [](int hi, int lo, double sign_lo) {
        Vector k = Vector::Zero(12);
        k[hi] = 1.0 / std::sqrt(2.0);
        k[lo] = sign_lo / std::sqrt(2.0);
        return k;
    };
    const Vector v1 = minus_vec(3, 4, -1.0);   // |01>(|0>-|1>)^{a2}
    const Vector v2 = minus_vec(6, 7, -1.0);   // |10>(|0>-|1>)^{a2}
    const Vector v3 = minus_vec(2, 11, -1.0);  // (|00>-|11>)|2>^{a2}
    c.e_minus = v1 * v1.adjoint() + v2 * v2.adjoint() + v3 * v3.adjoint();
    c.e_plus = Matrix::Identity(12, 12) - c.e_minus;
    return c;
}

double verify_perfect_discrimination(const CircuitElements& circuit, int samples,
                                     std::uint64_t seed) {
    if (circuit.channel.size() != 1)
        throw std::invalid_argument("verify_perfect_discrimination: channel must be an isometry");
    const Matrix& v = circuit.channel.front();
    const int da = circuit.dim_a, db = circuit.dim_b;

    // pure preparation: rho must be rank one
    Eigen::SelfAdjointEigenSolver<Matrix> es(circuit.rho);
    if (es.eigenvalues().head(circuit.rho.rows() - 1).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("verify_perfect_discrimination: preparation must be pure");
    const Vector prep = es.eigenvectors().col(circuit.rho.rows() - 1);

    std::mt19937_64 rng(seed);
    auto angle = [&] { return -pi + 2.0 * pi * uniform01(rng); };

    auto output = [&](const Matrix2& u_first, const Matrix2& u_second) {
        const Vector s1 = kron(Matrix(u_first), Matrix::Identity(db, db)) * prep;
        const Vector s2 = v * s1;
        return Vector(kron(Matrix(u_second), Matrix::Identity(da, da)) * s2);
    };

    std::vector<Vector> out_com, out_anti;
    out_com.reserve(std::size_t(samples));
    out_anti.reserve(std::size_t(samples));
    const bool ba = circuit.order == Order::b_before_a;
    for (int s = 0; s < samples; ++s) {
        const double phi = angle(), ta = angle(), tb = angle();
        const Matrix2 ua = channels::Rotation::equatorial(ta, phi).u;
        const Matrix2 ub = channels::Rotation::equatorial(tb, phi).u;
        out_com.push_back(ba ? output(ub, ua) : output(ua, ub));

        const double phi_a = angle(), vb = angle();
        const Matrix2 ua2 = channels::Rotation::equatorial(pi, phi_a).u;
        const Matrix2 ub2 = channels::Rotation::pi_tilted(phi_a, vb).u;
        out_anti.push_back(ba ? output(ub2, ua2) : output(ua2, ub2));
    }
    for (const auto& psi : out_com)
        if (std::abs(psi.norm() - 1.0) > 1e-12)
            throw std::runtime_error("verify_perfect_discrimination: output norm drifted");
    for (const auto& psi : out_anti)
        if (std::abs(psi.norm() - 1.0) > 1e-12)
            throw std::runtime_error("verify_perfect_discrimination: output norm drifted");

    double worst = 0.0;
    for (const auto& pc : out_com)
        for (const auto& pa : out_anti) worst = std::max(worst, std::abs(pc.dot(pa)));
    return worst;
}

}  // namespace causalbench::tester
