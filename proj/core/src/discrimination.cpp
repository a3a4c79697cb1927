#include "causalbench/discrimination.hpp"

#include "causalbench/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace causalbench::discrimination {

channels::Rotation PairSample::u_a() const {
    return tag == SetTag::commuting ? channels::Rotation::equatorial(theta_a, phi)
                                    : channels::Rotation::equatorial(pi, phi_a);
}

channels::Rotation PairSample::u_b() const {
    return tag == SetTag::commuting ? channels::Rotation::equatorial(theta_b, phi)
                                    : channels::Rotation::pi_tilted(phi_a, varphi_b);
}

double PairSample::box_theta() const { return tag == SetTag::commuting ? theta_a : pi; }
double PairSample::box_phi() const { return tag == SetTag::commuting ? phi : phi_a; }

namespace {

double node(int k, int n) { return -pi + 2.0 * pi * double(k) / double(n); }

void check_nodes(int n) {
    if (n < 2) throw std::invalid_argument("grid: node counts must be >= 2");
}

}  // namespace

std::vector<PairSample> grid_commuting(int n_phi, int n_theta_a, int n_theta_b) {
    check_nodes(n_phi);
    check_nodes(n_theta_a);
    check_nodes(n_theta_b);
    std::vector<PairSample> out;
    out.reserve(std::size_t(n_phi) * n_theta_a * n_theta_b);
    const double w = 1.0 / (double(n_phi) * double(n_theta_a) * double(n_theta_b));
    for (int i = 0; i < n_phi; ++i)
        for (int j = 0; j < n_theta_a; ++j)
            for (int k = 0; k < n_theta_b; ++k) {
                PairSample p;
                p.tag = SetTag::commuting;
                p.phi = node(i, n_phi);
                p.theta_a = node(j, n_theta_a);
                p.theta_b = node(k, n_theta_b);
                p.weight = w;
                out.push_back(p);
            }
    return out;
}

std::vector<PairSample> grid_anticommuting(int n_phi_a, int n_varphi_b) {
    check_nodes(n_phi_a);
    check_nodes(n_varphi_b);
    std::vector<PairSample> out;
    out.reserve(std::size_t(n_phi_a) * n_varphi_b);
    const double w = 1.0 / (double(n_phi_a) * double(n_varphi_b));
    for (int i = 0; i < n_phi_a; ++i)
        for (int j = 0; j < n_varphi_b; ++j) {
            PairSample p;
            p.tag = SetTag::anticommuting;
            p.phi_a = node(i, n_phi_a);
            p.varphi_b = node(j, n_varphi_b);
            p.weight = w;
            out.push_back(p);
        }
    return out;
}

Complex switch_overlap(const PairSample& pair, double nbar, const Matrix2& rho_s,
                       const fock::FockTruncation& trunc) {
    const auto ch = channels::jc_channel(pair.box_theta(), pair.box_phi(), nbar, trunc);
    const Matrix2 ub = pair.u_b().u;
    const Matrix2 x = ub * rho_s;
    return (channels::apply_channel(ch, x) * ub.adjoint()).trace();
}

namespace {

Complex four_box_overlap_split(const PairSample& pair, double nbar0, double nbar1,
                               const Matrix2& rho_s, const fock::FockTruncation& t0,
                               const fock::FockTruncation& t1) {
    const Matrix2 g0 = channels::coherent_sandwich(pair.box_theta(), pair.box_phi(), nbar0, t0);
    const Matrix2 g1 = (nbar0 == nbar1 && t0.n_max == t1.n_max)
                           ? g0
                           : channels::coherent_sandwich(pair.box_theta(), pair.box_phi(), nbar1, t1);
    const Matrix2 ub = pair.u_b().u;
    return (g1 * ub * rho_s * g0.adjoint() * ub.adjoint()).trace();
}

}  // namespace

Complex four_box_overlap(const PairSample& pair, double nbar, const Matrix2& rho_s,
                         const fock::FockTruncation& trunc_half) {
    return four_box_overlap_split(pair, nbar / 2.0, nbar / 2.0, rho_s, trunc_half, trunc_half);
}

std::pair<double, SetTag> success_pair(Setup setup, const PairSample& pair, double nbar,
                                       const Matrix2& rho_s,
                                       const fock::FockTruncation& trunc) {
    const Complex overlap = setup == Setup::quantum_switch
                                ? switch_overlap(pair, nbar, rho_s, trunc)
                                : four_box_overlap(pair, nbar, rho_s, trunc);
    const double sign = pair.tag == SetTag::commuting ? 1.0 : -1.0;
    return {(1.0 + sign * overlap.real()) / 2.0, pair.tag};
}

fock::FockTruncation TaskConfig::box_truncation() const {
    const double box_nbar = setup == Setup::quantum_switch ? nbar : nbar / 2.0;
    return fock::truncation_order(box_nbar, tail_tol);
}

namespace {

struct SetAverages {
    double commuting, anticommuting;
};

SetAverages evaluate_grids(const TaskConfig& cfg, const GridSpec& grid) {
    const auto com = grid_commuting(grid.n_phi, grid.n_theta_a, grid.n_theta_b);
    const auto anti = grid_anticommuting(grid.n_phi_a, grid.n_varphi_b);

    const bool qs = cfg.setup == Setup::quantum_switch;
    fock::FockTruncation t0{0, cfg.tail_tol, 0}, t1{0, cfg.tail_tol, 0};
    double nbar0 = 0, nbar1 = 0;
    if (!qs) {
        nbar0 = cfg.split_fraction * cfg.nbar;
        nbar1 = (1.0 - cfg.split_fraction) * cfg.nbar;
        t0 = fock::truncation_order(nbar0, cfg.tail_tol);
        t1 = fock::truncation_order(nbar1, cfg.tail_tol);
    } else {
        t0 = fock::truncation_order(cfg.nbar, cfg.tail_tol);
    }

    auto pair_success = [&](const PairSample& p) {
        Complex overlap;
        if (qs)
            overlap = switch_overlap(p, cfg.nbar, cfg.rho_s, t0);
        else
            overlap = four_box_overlap_split(p, nbar0, nbar1, cfg.rho_s, t0, t1);
        const double sign = p.tag == SetTag::commuting ? 1.0 : -1.0;
        return (1.0 + sign * overlap.real()) / 2.0;
    };

    std::vector<double> vals_com(com.size()), vals_anti(anti.size());
    parallel_for(com.size(), cfg.threads,
                 [&](std::size_t i) { vals_com[i] = pair_success(com[i]) * com[i].weight; });
    parallel_for(anti.size(), cfg.threads,
                 [&](std::size_t i) { vals_anti[i] = pair_success(anti[i]) * anti[i].weight; });
    return {pairwise_sum(vals_com), pairwise_sum(vals_anti)};
}

GridSpec halved(const GridSpec& g) {
    auto h = [](int n) { return std::max(2, n / 2); };
    return {h(g.n_phi), h(g.n_theta_a), h(g.n_theta_b), h(g.n_phi_a), h(g.n_varphi_b)};
}

}  // namespace

SuccessReport average_success(const TaskConfig& config) {
    if (!(config.nbar > 0.0)) throw std::invalid_argument("average_success: nbar must be positive");
    const SetAverages full = evaluate_grids(config, config.grid);
    const SetAverages half = evaluate_grids(config, halved(config.grid));
    SuccessReport r;
    r.setup = config.setup;
    r.nbar = config.nbar;
    r.p_commuting = full.commuting;
    r.p_anticommuting = full.anticommuting;
    r.p_average = (r.p_commuting + r.p_anticommuting) / 2.0;
    r.quadrature_error_estimate =
        std::abs(r.p_average - (half.commuting + half.anticommuting) / 2.0);
    return r;
}

SuccessReport asymptotic_success(Setup setup, double nbar, const Matrix2& rho_s) {
    if (!(nbar > 0.0)) throw std::invalid_argument("asymptotic_success: nbar must be positive");
    const double z = (pauli_z() * rho_s).trace().real();
    SuccessReport r;
    r.setup = setup;
    r.nbar = nbar;
    if (setup == Setup::quantum_switch) {
        r.p_commuting = 1.0 - 1.0 / (16.0 * nbar);
        r.p_anticommuting = 1.0 - (2.0 + pi * pi) / (16.0 * nbar);
    } else {
        r.p_commuting = 1.0 - (2.0 + pi * pi / 3.0 - z) / (16.0 * nbar);
        r.p_anticommuting = 1.0 - (4.0 + pi * pi) / (16.0 * nbar);
    }
    r.p_average = (r.p_commuting + r.p_anticommuting) / 2.0;
    r.quadrature_error_estimate = 0.0;
    return r;
}

double control_entropy(Complex overlap) {
    double a = std::abs(overlap);
    if (a > 1.0 + 1e-10) throw std::invalid_argument("control_entropy: |overlap| > 1");
    a = std::min(a, 1.0);
    const double x = (1.0 + a) / 2.0;
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace {

// <phi0|phi1> for one pure target state; workspaces sized by the caller.
Complex oracle_pure_qs(const fock::JointUnitary& u, const fock::CoherentField& field,
                       const Matrix2& ub, const Vector& psi) {
    const int d = u.n_max() + 1;
    Vector state(2 * d);
    for (int a = 0; a < 2; ++a)
        for (int n = 0; n < d; ++n) state[a * d + n] = psi[a] * field.coeffs[n];

    Vector phi0 = state;
    u.apply(phi0);
    // U_B on the atom index
    for (int n = 0; n < d; ++n) {
        const Complex g = phi0[n], e = phi0[d + n];
        phi0[n] = ub(0, 0) * g + ub(0, 1) * e;
        phi0[d + n] = ub(1, 0) * g + ub(1, 1) * e;
    }

    Vector phi1(2 * d);
    for (int n = 0; n < d; ++n) {
        const Complex g = state[n], e = state[d + n];
        phi1[n] = ub(0, 0) * g + ub(0, 1) * e;
        phi1[d + n] = ub(1, 0) * g + ub(1, 1) * e;
    }
    u.apply(phi1);
    return phi0.dot(phi1);  // Eigen: conjugates the left argument
}

Complex oracle_pure_4b(const fock::JointUnitary& u, const fock::CoherentField& field,
                       const Matrix2& ub, const Vector& psi) {
    const std::ptrdiff_t d = u.n_max() + 1;
    Vector state(2 * d * d);
    for (int a = 0; a < 2; ++a)
        for (std::ptrdiff_t n0 = 0; n0 < d; ++n0)
            for (std::ptrdiff_t n1 = 0; n1 < d; ++n1)
                state[(a * d + n0) * d + n1] = psi[a] * field.coeffs[n0] * field.coeffs[n1];

    auto apply_ub = [&](Vector& s) {
        for (std::ptrdiff_t k = 0; k < d * d; ++k) {
            const Complex g = s[k], e = s[d * d + k];
            s[k] = ub(0, 0) * g + ub(0, 1) * e;
            s[d * d + k] = ub(1, 0) * g + ub(1, 1) * e;
        }
    };

    Vector phi0 = state;
    // box 0 acts on (atom, field 0): field stride d, spectator n1 offset
    for (std::ptrdiff_t n1 = 0; n1 < d; ++n1) u.apply_strided(phi0.data() + n1, d * d, d);
    apply_ub(phi0);

    Vector phi1 = state;
    apply_ub(phi1);
    // box 1 acts on (atom, field 1): field stride 1, spectator n0 offset
    for (std::ptrdiff_t n0 = 0; n0 < d; ++n0) u.apply_strided(phi1.data() + n0 * d, d * d, 1);
    return phi0.dot(phi1);
}

}  // namespace

Complex statevector_oracle(Setup setup, const PairSample& pair, double nbar,
                           const Matrix2& rho_s, const fock::FockTruncation& trunc,
                           std::size_t max_state_dim) {
    if (!(nbar > 0.0)) throw std::invalid_argument("statevector_oracle: nbar must be positive");
    const bool qs = setup == Setup::quantum_switch;
    const double box_nbar = qs ? nbar : nbar / 2.0;
    const std::size_t d = std::size_t(trunc.n_max) + 1;
    const std::size_t state_dim = qs ? 2 * d : 2 * d * d;
    if (state_dim > max_state_dim)
        throw std::length_error("statevector_oracle: state dimension exceeds the memory cap");

    const fock::JointUnitary u(pair.box_theta(), pair.box_phi(), box_nbar, trunc.n_max);
    const fock::CoherentField field = fock::coherent_state(box_nbar, trunc);
    const Matrix2 ub = pair.u_b().u;

    Eigen::SelfAdjointEigenSolver<Matrix2> es(rho_s);
    Complex overlap = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double w = es.eigenvalues()[i];
        if (std::abs(w) < 1e-15) continue;
        const Vector psi = es.eigenvectors().col(i);
        overlap += w * (qs ? oracle_pure_qs(u, field, ub, psi)
                           : oracle_pure_4b(u, field, ub, psi));
    }
    return overlap;
}

FirstOrderConstants first_order_constant(Setup setup, const PairSample& pair,
                                         double tail_tol) {
    const double sign = pair.tag == SetTag::commuting ? 1.0 : -1.0;
    double y[3], z[3];
    const double nbars[3] = {200.0, 400.0, 800.0};
    for (int i = 0; i < 3; ++i) {
        const double nb = nbars[i];
        const double box_nbar = setup == Setup::quantum_switch ? nb : nb / 2.0;
        const auto trunc = fock::truncation_order(box_nbar, tail_tol);
        const Matrix2 rho = 0.5 * Matrix2::Identity();
        const Complex overlap = setup == Setup::quantum_switch
                                    ? switch_overlap(pair, nb, rho, trunc)
                                    : four_box_overlap(pair, nb, rho, trunc);
        y[i] = nb * (1.0 - sign * overlap.real());
        z[i] = nb * overlap.imag();
    }
    // y(nbar) = c + a/nbar + O(1/nbar^2): eliminate the a/nbar term pairwise
    const double c1 = 2.0 * y[1] - y[0], c2 = 2.0 * y[2] - y[1];
    const double d1 = 2.0 * z[1] - z[0], d2 = 2.0 * z[2] - z[1];
    const bool conv_c = std::abs(c2 - c1) <= 0.05 * std::max(std::abs(c2), 1e-6);
    const bool conv_d = std::abs(d2 - d1) <= 0.05 * std::max(std::abs(d2), 1e-6);
    return {c2, d2, conv_c && conv_d};
}

}  // namespace causalbench::discrimination
