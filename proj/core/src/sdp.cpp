#include "causalbench/sdp.hpp"

#include "causalbench/channels.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalbench::sdp {

namespace {

// Real parametrization of Hermitian matrices preserving Tr[AB]:
// [diagonal entries, then sqrt(2)*Re/Im of the upper triangle row by row].
struct HermCoords {
    int d, n;
    explicit HermCoords(int dim) : d(dim), n(dim * dim) {}

    void svec(const Matrix& h, double* out) const {
        int k = 0;
        for (int i = 0; i < d; ++i) out[k++] = h(i, i).real();
        const double r2 = std::sqrt(2.0);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                out[k++] = h(i, j).real() * r2;
                out[k++] = h(i, j).imag() * r2;
            }
    }

    void smat(const double* in, Matrix& h) const {
        h.resize(d, d);
        int k = 0;
        for (int i = 0; i < d; ++i) h(i, i) = in[k++];
        const double r2 = std::sqrt(2.0);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const double re = in[k++] / r2;
                const double im = in[k++] / r2;
                h(i, j) = Complex(re, im);
                h(j, i) = Complex(re, -im);
            }
    }
};

struct Layout {
    std::vector<HermCoords> coords;
    std::vector<int> offset;
    int total = 0;
};

Layout make_layout(const std::vector<BlockSpec>& blocks) {
    Layout lay;
    for (const auto& b : blocks) {
        if (b.dim < 1) throw std::invalid_argument("sdp: block dims must be >= 1");
        lay.coords.emplace_back(b.dim);
        lay.offset.push_back(lay.total);
        lay.total += b.dim * b.dim;
    }
    return lay;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolveOptions& options) {
    const auto& blocks = problem.blocks;
    if (problem.objective.size() != blocks.size())
        throw std::invalid_argument("sdp: objective must list one matrix per block");
    const Layout lay = make_layout(blocks);
    const int n = lay.total;
    const int m = int(problem.constraints.size());

    RealVector c = RealVector::Zero(n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (problem.objective[b].rows() != blocks[b].dim ||
            problem.objective[b].cols() != blocks[b].dim)
            throw std::invalid_argument("sdp: objective dimension mismatch");
        lay.coords[b].svec(problem.objective[b], c.data() + lay.offset[b]);
    }

    RealMatrix a_full = RealMatrix::Zero(m, n);
    RealVector b_full = RealVector::Zero(m);
    for (int k = 0; k < m; ++k) {
        const auto& con = problem.constraints[k];
        b_full[k] = con.rhs;
        for (const auto& [bi, mat] : con.terms) {
            if (bi < 0 || bi >= int(blocks.size()) || mat.rows() != blocks[std::size_t(bi)].dim ||
                mat.cols() != blocks[std::size_t(bi)].dim)
                throw std::invalid_argument("sdp: constraint dimension mismatch");
            RealVector seg(blocks[std::size_t(bi)].dim * blocks[std::size_t(bi)].dim);
            lay.coords[std::size_t(bi)].svec(mat, seg.data());
            a_full.row(k).segment(lay.offset[std::size_t(bi)], seg.size()) += seg.transpose();
        }
    }

    // prune redundant rows by rank-revealing QR of A^T (threshold 1e-10)
    Eigen::ColPivHouseholderQR<RealMatrix> rrqr(a_full.transpose());
    rrqr.setThreshold(1e-10);
    const int rank = int(rrqr.rank());
    std::vector<int> keep(rrqr.colsPermutation().indices().data(),
                          rrqr.colsPermutation().indices().data() + rank);
    std::sort(keep.begin(), keep.end());
    RealMatrix a0(rank, n);
    RealVector b0(rank);
    for (int r = 0; r < rank; ++r) {
        a0.row(r) = a_full.row(keep[std::size_t(r)]);
        b0[r] = b_full[keep[std::size_t(r)]];
    }

    // prefactor the normal equations: A0^T = QR gives A0 A0^T = R^T R
    Eigen::HouseholderQR<RealMatrix> qr(a0.transpose());
    const RealMatrix r_factor =
        qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    auto project_affine = [&](const RealVector& v, RealVector& mu) -> RealVector {
        RealVector resid = a0 * v - b0;
        mu = r_factor.transpose().triangularView<Eigen::Lower>().solve(resid);
        mu = r_factor.triangularView<Eigen::Upper>().solve(mu);
        return v - a0.transpose() * mu;
    };

    SdpSolution sol;
    sol.x.resize(blocks.size());

    // consistency of the pruned system with the full one
    {
        RealVector mu;
        const RealVector x0 = project_affine(RealVector::Zero(n), mu);
        if ((a_full * x0 - b_full).cwiseAbs().maxCoeff() > 1e-6) {
            sol.status = SolveStatus::infeasible;
            return sol;
        }
    }

    double rho = options.rho;
    const double alpha = options.over_relaxation;
    RealVector z = RealVector::Zero(n), u = RealVector::Zero(n);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Matrix init =
            Matrix::Identity(blocks[b].dim, blocks[b].dim) / double(blocks[b].dim);
        lay.coords[b].svec(init, z.data() + lay.offset[b]);
    }

    RealVector x = z, mu = RealVector::Zero(rank), z_prev = z;
    Matrix work;
    Eigen::SelfAdjointEigenSolver<Matrix> eig;
    double primal = 0.0, dual = 0.0, r_primal = 0.0, r_dual = 0.0;
    int it = 0;
    bool converged = false;

    for (it = 1; it <= options.max_iter; ++it) {
        const RealVector v = z - u + c / rho;
        x = project_affine(v, mu);
        const RealVector xh = alpha * x + (1.0 - alpha) * z;
        z_prev.swap(z);
        z = xh + u;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (!blocks[b].psd) continue;
            const auto& hc = lay.coords[b];
            hc.smat(z.data() + lay.offset[b], work);
            eig.compute(work);
            Matrix clipped = eig.eigenvectors() *
                             eig.eigenvalues().cwiseMax(0.0).asDiagonal() *
                             eig.eigenvectors().adjoint();
            hc.svec(clipped, z.data() + lay.offset[b]);
        }
        u += xh - z;

        if (it % options.check_interval == 0) {
            r_primal = (x - z).norm();
            r_dual = rho * (z - z_prev).norm();
            primal = c.dot(x);
            dual = rho * b0.dot(mu);
            const double gap = std::abs(primal - dual);
            if (x.cwiseAbs().maxCoeff() > 1e10) {
                sol.status = SolveStatus::infeasible;
                sol.iterations = it;
                return sol;
            }
            if (r_primal <= options.tol && r_dual <= options.tol && gap <= options.tol) {
                converged = true;
                break;
            }
            if (options.adaptive_rho && it < 20000) {
                if (r_primal > 10.0 * r_dual && rho < 1e4) {
                    rho *= 2.0;
                    u /= 2.0;
                } else if (r_dual > 10.0 * r_primal && rho > 1e-4) {
                    rho /= 2.0;
                    u *= 2.0;
                }
            }
        }
    }
    if (!converged) it = options.max_iter;

    // return the affine projection of the cone-feasible iterate; its PSD
    // defect is bounded by the primal residual
    RealVector mu_final;
    const RealVector x_final = project_affine(z, mu_final);
    sol.primal_value = c.dot(x_final);
    sol.dual_value = dual;
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
    sol.iterations = it;
    sol.status = converged ? SolveStatus::optimal : SolveStatus::max_iter;
    sol.primal_residual = r_primal;
    sol.dual_residual = r_dual;
    sol.min_eigenvalue = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        Matrix xb;
        lay.coords[b].smat(x_final.data() + lay.offset[b], xb);
        if (blocks[b].psd) sol.min_eigenvalue = std::min(sol.min_eigenvalue, min_eigenvalue(xb));
        sol.x[b] = std::move(xb);
    }
    sol.constraint_residual = (a_full * x_final - b_full).cwiseAbs().maxCoeff();
    return sol;
}

namespace {

std::vector<Matrix> hermitian_basis(int d) {
    std::vector<Matrix> basis;
    basis.reserve(std::size_t(d) * d);
    for (int i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = 1.0 / r2;
            e(j, i) = 1.0 / r2;
            basis.push_back(e);
            e(i, j) = Complex(0.0, 1.0 / r2);
            e(j, i) = Complex(0.0, -1.0 / r2);
            basis.push_back(std::move(e));
        }
    return basis;
}

}  // namespace

FcoResult optimize_fco(const tester::PayoffPair& payoff, tester::Order order,
                       bool isotropic, double tol, int max_iter) {
    if (hermiticity_defect(payoff.g_plus) > 1e-9 || hermiticity_defect(payoff.g_minus) > 1e-9)
        throw std::invalid_argument("optimize_fco: payoff must be Hermitian");

    SdpProblem p;
    p.blocks = {{"W+", 16, true}, {"W-", 16, true}, {"marginal", 8, false}, {"norm", 2, false}};
    p.objective = {0.5 * payoff.g_plus.transpose(), 0.5 * payoff.g_minus.transpose(),
                   Matrix::Zero(8, 8), Matrix::Zero(2, 2)};

    const std::vector<int> dims4{2, 2, 2, 2};
    const std::vector<int> dims3{2, 2, 2};
    const std::vector<int> dims2{2, 2};
    const std::vector<int> mpos = order == tester::Order::a_before_b
                                      ? std::vector<int>{0, 1, 2}
                                      : std::vector<int>{2, 3, 0};

    // W+ + W- = M ⊗ 1 on the second slot's output
    for (const auto& h : hermitian_basis(16)) {
        Constraint con;
        con.terms.emplace_back(0, h);
        con.terms.emplace_back(1, h);
        con.terms.emplace_back(2, Matrix(-channels::trace_to(h, dims4, mpos)));
        p.constraints.push_back(std::move(con));
    }
    // tracing the second slot's input off M leaves V ⊗ 1
    for (const auto& h : hermitian_basis(4)) {
        Constraint con;
        con.terms.emplace_back(2, channels::embed(h, dims3, {0, 1}));
        con.terms.emplace_back(3, Matrix(-channels::partial_trace(h, dims2, {1})));
        p.constraints.push_back(std::move(con));
    }
    {
        Constraint con;
        con.terms.emplace_back(3, Matrix(Matrix::Identity(2, 2)));
        con.rhs = 1.0;
        p.constraints.push_back(std::move(con));
    }

    if (isotropic) {
        const auto basis = tester::isotropic_basis();
        HermCoords hc(16);
        RealMatrix proj = RealMatrix::Zero(256, 256);
        RealVector seg(256);
        for (const auto& op : basis.ops) {
            hc.svec(op, seg.data());
            proj += seg * seg.transpose();
        }
        const RealMatrix compl_proj = RealMatrix::Identity(256, 256) - proj;
        Matrix row_mat;
        for (int k = 0; k < 256; ++k) {
            if (compl_proj.row(k).cwiseAbs().maxCoeff() < 1e-13) continue;
            RealVector row = compl_proj.row(k).transpose();
            hc.smat(row.data(), row_mat);
            for (int block : {0, 1}) {
                Constraint con;
                con.terms.emplace_back(block, row_mat);
                p.constraints.push_back(std::move(con));
            }
        }
    }

    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    const SdpSolution sol = solve(p, opts);

    FcoResult res;
    res.status = sol.status;
    res.iterations = sol.iterations;
    res.gap = sol.gap;
    if (sol.status == SolveStatus::infeasible) return res;
    res.p_star = sol.primal_value;
    res.certificate = sol.dual_value;
    res.tester = tester::make_tester(order, sol.x[0], sol.x[1]);
    return res;
}

}  // namespace causalbench::sdp
