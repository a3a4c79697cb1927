// Acceptance suite: one line per criterion, PASS/FAIL at the pinned
// tolerances, nonzero exit if anything failed. Heavier than the unit tests;
// run through ctest or directly.

#include "causalbench/discrimination.hpp"
#include "causalbench/sdp.hpp"
#include "causalbench/serialize.hpp"
#include "causalbench/tester.hpp"
#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace causalbench;
namespace disc = causalbench::discrimination;
namespace tst = causalbench::tester;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::vector<double> g_solver_gaps;  // weak-duality audit across every solve
std::vector<double> g_solver_tols;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

sdp::FcoResult solve_logged(const tst::PayoffPair& payoff, tst::Order order, bool iso,
                            double tol) {
    auto res = sdp::optimize_fco(payoff, order, iso, tol, 200000);
    g_solver_gaps.push_back(res.gap);
    g_solver_tols.push_back(tol);
    return res;
}

double tester_value(const tst::Tester& t, const tst::PayoffPair& payoff) {
    return 0.5 * (t.w_plus.transpose() * payoff.g_plus).trace().real() +
           0.5 * (t.w_minus.transpose() * payoff.g_minus).trace().real();
}

int threads() { return cli::RunConfig{}.effective_threads(); }

double uniform_angle(std::mt19937_64& rng) {
    return -pi + 2.0 * pi * (double(rng() >> 11) * 0x1.0p-53);
}

disc::PairSample random_pair(std::mt19937_64& rng, bool commuting) {
    disc::PairSample p;
    if (commuting) {
        p.tag = disc::SetTag::commuting;
        p.phi = uniform_angle(rng);
        p.theta_a = uniform_angle(rng);
        p.theta_b = uniform_angle(rng);
    } else {
        p.tag = disc::SetTag::anticommuting;
        p.phi_a = uniform_angle(rng);
        p.varphi_b = uniform_angle(rng);
    }
    p.weight = 1.0;
    return p;
}

const Matrix2 rho_mixed = 0.5 * Matrix2::Identity();

// ---- criteria ---------------------------------------------------------------

void criterion_1_2_3() {
    const auto ideal = tst::ideal_payoff();

    auto t0 = Clock::now();
    const auto ab = solve_logged(ideal, tst::Order::a_before_b, false, 1e-6);
    const double dt = seconds_since(t0);
    {
        std::ostringstream os;
        os << "ideal A<B tester optimum p*=" << ab.p_star << " (target 0.9489 +- 2e-3), "
           << ab.iterations << " iters, " << dt << " s";
        report(1, ab.status == sdp::SolveStatus::optimal && std::abs(ab.p_star - 0.9489) <= 2e-3 &&
                      dt < 60.0,
               os.str());
    }

    const auto ba = solve_logged(ideal, tst::Order::b_before_a, false, 1e-6);
    {
        std::ostringstream os;
        os << "ideal B<A tester optimum p*=" << ba.p_star << " (target >= 1 - 1e-5)";
        report(2, ba.status == sdp::SolveStatus::optimal && ba.p_star >= 1.0 - 1e-5, os.str());
    }

    const auto iso_ab = solve_logged(ideal, tst::Order::a_before_b, true, 1e-6);
    const auto iso_ba = solve_logged(ideal, tst::Order::b_before_a, true, 1e-6);
    const auto haar = tst::haar_payoff();
    const auto haar_ab = solve_logged(haar, tst::Order::a_before_b, false, 1e-6);
    const auto haar_ba = solve_logged(haar, tst::Order::b_before_a, false, 1e-6);
    {
        const bool iso_ok = std::abs(iso_ab.p_star - 0.9288) <= 2e-3 &&
                            std::abs(iso_ba.p_star - 0.9288) <= 2e-3;
        const bool haar_ok = std::abs(haar_ab.p_star - iso_ab.p_star) <= 2e-3 &&
                             std::abs(haar_ba.p_star - iso_ba.p_star) <= 2e-3;
        std::ostringstream os;
        os << "isotropic optimum p*=(" << iso_ab.p_star << ", " << iso_ba.p_star
           << ") (target 0.9288 +- 2e-3); haar payoff p*=(" << haar_ab.p_star << ", "
           << haar_ba.p_star << ") within 2e-3 of isotropic";
        report(3, iso_ok && haar_ok, os.str());
    }
}

void criterion_4() {
    const auto circuit = tst::perfect_discrimination_circuit();
    const double worst = tst::verify_perfect_discrimination(circuit, 1000, 20240117);
    const auto t = tst::tester_from_circuit(circuit);
    const double p = tester_value(t, tst::ideal_payoff());
    std::ostringstream os;
    os << "explicit B<A circuit: max |<psi_com|psi_anti>| = " << worst
       << " over 1000 draws per set (<= 1e-10); tester value " << p << " (>= 1 - 1e-6)";
    report(4, worst <= 1e-10 && p >= 1.0 - 1e-6 && t.residuals.max() <= 1e-9, os.str());
}

void criterion_5() {
    const auto t0 = Clock::now();
    bool tolerance_ok = true, dominance_ok = true;
    std::printf("    nbar   p_qs        diff_fo     p_4b        diff_fo\n");
    for (int nbar = 1; nbar <= 20; ++nbar) {
        disc::TaskConfig cfg;
        cfg.nbar = nbar;
        cfg.rho_s = rho_mixed;
        cfg.grid = {48, 48, 48, 48, 48};
        cfg.threads = threads();
        cfg.setup = disc::Setup::quantum_switch;
        const auto qs = disc::average_success(cfg);
        cfg.setup = disc::Setup::four_box;
        const auto fb = disc::average_success(cfg);

        const double fo_qs = 1.0 - (3.0 + pi * pi) / (32.0 * nbar);
        const double fo_fb = 1.0 - (6.0 + 4.0 * pi * pi / 3.0) / (32.0 * nbar);
        const double dq = qs.p_average - fo_qs;
        const double df = fb.p_average - fo_fb;
        if (nbar >= 8 && (std::abs(dq) > 2e-3 || std::abs(df) > 2e-3)) tolerance_ok = false;
        if (!(qs.p_average > fb.p_average)) dominance_ok = false;
        if (nbar >= 8)
            std::printf("    %4d   %.6f   %+.2e   %.6f   %+.2e\n", nbar, qs.p_average, dq,
                        fb.p_average, df);
    }
    const double dt = seconds_since(t0);
    std::ostringstream os;
    os << "sweep at 48^3 nodes: first-order agreement within 2e-3 for nbar in {8..20} "
       << (tolerance_ok ? "holds" : "fails (physical 1/nbar^2 terms exceed the tolerance below "
                                    "nbar = 10 for the switch and 13 for the four-box)")
       << "; strict switch advantage for nbar in {1..20} " << (dominance_ok ? "holds" : "fails")
       << "; " << dt << " s (< 600 s)";
    report(5, tolerance_ok && dominance_ok && dt < 600.0, os.str());
}

void criterion_6() {
    disc::TaskConfig cfg;
    cfg.nbar = 200.0;
    cfg.rho_s = rho_mixed;
    cfg.grid = {48, 48, 48, 48, 48};
    cfg.threads = threads();
    cfg.setup = disc::Setup::quantum_switch;
    const double slope_qs = 200.0 * (1.0 - disc::average_success(cfg).p_average);
    cfg.setup = disc::Setup::four_box;
    const double slope_fb = 200.0 * (1.0 - disc::average_success(cfg).p_average);

    const auto trunc = fock::truncation_order(200.0);
    const double f = channels::average_gate_fidelity(channels::jc_channel(pi, 0.0, 200.0, trunc),
                                                     channels::Rotation::equatorial(pi, 0.0));
    const double slope_f = 200.0 * (1.0 - f);

    const double t_qs = (3.0 + pi * pi) / 32.0;
    const double t_fb = (6.0 + 4.0 * pi * pi / 3.0) / 32.0;
    const double t_f = (2.0 + pi * pi / 2.0) / 12.0;
    const bool ok = std::abs(slope_qs - t_qs) <= 0.03 * t_qs &&
                    std::abs(slope_fb - t_fb) <= 0.03 * t_fb &&
                    std::abs(slope_f - t_f) <= 0.03 * t_f;
    std::ostringstream os;
    os << "slopes at nbar=200: switch " << slope_qs << " (target " << t_qs << "), four-box "
       << slope_fb << " (target " << t_fb << "), fidelity " << slope_f << " (target " << t_f
       << "), all within 3%";
    report(6, ok, os.str());
}

void criterion_7() {
    std::mt19937_64 rng(777);
    double worst = 0.0;
    for (double nbar : {5.0, 20.0}) {
        const auto tq = fock::truncation_order(nbar);
        const auto th = fock::truncation_order(nbar / 2.0);
        for (int rep = 0; rep < 100; ++rep) {
            const auto p = random_pair(rng, rep % 2 == 0);
            worst = std::max(worst,
                             std::abs(disc::switch_overlap(p, nbar, rho_mixed, tq) -
                                      disc::statevector_oracle(disc::Setup::quantum_switch, p,
                                                               nbar, rho_mixed, tq)));
            worst = std::max(worst,
                             std::abs(disc::four_box_overlap(p, nbar, rho_mixed, th) -
                                      disc::statevector_oracle(disc::Setup::four_box, p, nbar,
                                                               rho_mixed, th)));
        }
    }
    std::ostringstream os;
    os << "overlap formulas vs statevector oracle: max deviation " << worst
       << " over 100 pairs per setup at nbar in {5, 20} (<= 1e-10)";
    report(7, worst <= 1e-10, os.str());
}

void criterion_8() {
    double worst_f = 0.0, worst_g = 0.0;
    for (double theta : {pi / 4, pi / 2, pi}) {
        const auto tf = fock::truncation_order(400.0);
        const auto exact_f =
            channels::choi_of_channel(channels::jc_channel(theta, 0.0, 400.0, tf));
        worst_f = std::max(
            worst_f, 400.0 * max_abs(exact_f.m - channels::jc_first_order_choi(theta, 0.0, 400.0).m));

        const auto tg = fock::truncation_order(200.0);
        const Matrix2 g = channels::four_box_kraus(theta, 0.0, 400.0, tg);
        const auto exact_g = channels::choi_of_channel(channels::make_channel({g}));
        worst_g = std::max(worst_g,
                           400.0 * max_abs(exact_g.m -
                                           channels::four_box_first_order_choi(theta, 0.0, 400.0).m));
    }
    std::ostringstream os;
    os << "choi expansion regressions at nbar=400: scaled residuals " << worst_f
       << " (jc channel) and " << worst_g << " (four-box kraus), both <= 0.05";
    report(8, worst_f <= 0.05 && worst_g <= 0.05, os.str());
}

void criterion_9() {
    bool ok = true;
    std::ostringstream os;

    // Kraus completeness
    double worst_complete = 0.0;
    for (auto [theta, phi, nbar] :
         {std::tuple{pi, 0.0, 5.0}, std::tuple{1.1, 0.7, 20.0}, std::tuple{-pi / 3, 2.0, 80.0}}) {
        const auto trunc = fock::truncation_order(nbar);
        const auto kraus = fock::kraus_operators(theta, phi, nbar, trunc);
        Matrix2 s = Matrix2::Zero();
        for (const auto& a : kraus) s += a.adjoint() * a;
        worst_complete = std::max(
            worst_complete, max_abs(Matrix(s - Matrix2::Identity())) / (10.0 * trunc.tail_tol));
    }
    ok = ok && worst_complete <= 1.0;

    // tester normalization on random TP pairs
    std::mt19937_64 rng(999);
    const auto circuit_tester = tst::tester_from_circuit(tst::perfect_discrimination_circuit());
    double worst_norm = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const double t1 = uniform_angle(rng), t2 = uniform_angle(rng);
        const double n1 = 2.0 + 20.0 * std::abs(t1), n2 = 2.0 + 20.0 * std::abs(t2);
        const auto a = channels::choi_of_channel(
            channels::jc_channel(t1, uniform_angle(rng), n1, fock::truncation_order(n1)));
        const auto b = channels::choi_of_channel(
            channels::jc_channel(t2, uniform_angle(rng), n2, fock::truncation_order(n2)));
        const auto [pp, pm] = tst::tester_probabilities(circuit_tester, a, b);
        worst_norm = std::max(worst_norm, std::abs(pp + pm - 1.0));
    }
    ok = ok && worst_norm <= 1e-9;

    // payoff traces
    double worst_trace = 0.0;
    const auto finite = tst::finite_payoff(20.0, {}, fock::truncation_order(20.0));
    for (const auto* p : {&finite}) {
        worst_trace = std::max(worst_trace, std::abs(p->g_plus.trace().real() - 4.0));
        worst_trace = std::max(worst_trace, std::abs(p->g_minus.trace().real() - 4.0));
    }
    for (const auto p : {tst::ideal_payoff(), tst::haar_payoff()}) {
        worst_trace = std::max(worst_trace, std::abs(p.g_plus.trace().real() - 4.0));
        worst_trace = std::max(worst_trace, std::abs(p.g_minus.trace().real() - 4.0));
    }
    ok = ok && worst_trace <= 1e-6;

    // entropy relation is the binary entropy of the overlap modulus
    double worst_entropy = 0.0;
    for (double re : {0.0, 0.3, -0.8}) {
        for (double im : {0.0, 0.4}) {
            const Complex o(re, im);
            if (std::abs(o) > 1.0) continue;
            const double x = (1.0 + std::abs(o)) / 2.0;
            const double direct =
                (x <= 0.0 || x >= 1.0) ? 0.0 : -x * std::log2(x) - (1 - x) * std::log2(1 - x);
            worst_entropy = std::max(worst_entropy, std::abs(disc::control_entropy(o) - direct));
        }
    }
    ok = ok && worst_entropy <= 1e-10;

    // isotropic span dimension
    const bool rank_ok = tst::isotropic_basis().ops.size() == 14;
    ok = ok && rank_ok;

    // weak duality on every solve performed in this run
    double worst_gap_ratio = 0.0;
    for (std::size_t i = 0; i < g_solver_gaps.size(); ++i)
        worst_gap_ratio = std::max(worst_gap_ratio, g_solver_gaps[i] / g_solver_tols[i]);
    ok = ok && worst_gap_ratio <= 1.0;

    os << "properties: kraus completeness ratio " << worst_complete
       << ", tester normalization defect " << worst_norm << ", payoff trace defect " << worst_trace
       << ", entropy defect " << worst_entropy << ", isotropic rank " << (rank_ok ? 14 : -1)
       << ", max solver gap/tol " << worst_gap_ratio << " over " << g_solver_gaps.size()
       << " solves";
    report(9, ok, os.str());
}

void criterion_10() {
    auto run_once = [&](int nthreads) {
        cli::RunConfig cfg;
        cfg.nbar_min = 2;
        cfg.nbar_max = 14;
        cfg.nbar_steps = 4;
        cfg.grid = 16;
        cfg.seed = 31;
        cfg.threads = nthreads;
        std::ostringstream sweep, svg, fco, entropy;
        cli::cmd_success_sweep(cfg, sweep, &svg);
        cfg.ideal = true;
        cfg.tol = 1e-6;
        cli::cmd_fco_optimize(cfg, fco);
        cfg.nbar_steps = 2;
        cfg.grid = 8;
        cli::cmd_entropy(cfg, entropy);
        // drop the config comment lines, which record the thread count itself
        std::string all = sweep.str() + svg.str() + fco.str() + entropy.str();
        std::string filtered;
        std::istringstream is(all);
        std::string line;
        while (std::getline(is, line))
            if (line.rfind("# causalbench", 0) != 0) filtered += line + "\n";
        return filtered;
    };
    const std::string a = run_once(1);
    const std::string b = run_once(4);
    std::ostringstream os;
    os << "fixed-seed outputs byte-identical across thread counts (1 vs 4): "
       << (a == b ? "yes" : "no") << " (" << a.size() << " bytes compared)";
    report(10, a == b, os.str());
}

void qualitative_crossings() {
    // informational: the per-energy optimized isotropic circuits beat both
    // setups at very low energy and fall below them by nbar ~ 8
    auto best_iso = [&](double nbar) {
        const auto payoff = tst::finite_payoff(nbar, {}, fock::truncation_order(nbar));
        double best = 0.0;
        for (auto order : {tst::Order::a_before_b, tst::Order::b_before_a})
            best = std::max(best, solve_logged(payoff, order, true, 1e-6).p_star);
        return best;
    };
    auto p_setup = [&](disc::Setup setup, double nbar) {
        disc::TaskConfig cfg;
        cfg.setup = setup;
        cfg.nbar = nbar;
        cfg.rho_s = rho_mixed;
        cfg.grid = {24, 24, 24, 24, 24};
        cfg.threads = threads();
        return disc::average_success(cfg).p_average;
    };
    double prev_iso_qs = 0.0, prev_iso_fb = 0.0;
    int crossings_qs = 0, crossings_fb = 0;
    std::printf("    nbar   p_qs      p_4b      best_iso_fco\n");
    for (double nbar : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
        const double iso = best_iso(nbar);
        const double qs = p_setup(disc::Setup::quantum_switch, nbar);
        const double fb = p_setup(disc::Setup::four_box, nbar);
        std::printf("    %4.0f   %.5f   %.5f   %.5f\n", nbar, qs, fb, iso);
        const double d_qs = iso - qs, d_fb = iso - fb;
        if (nbar > 1.0 && d_qs * prev_iso_qs < 0.0) ++crossings_qs;
        if (nbar > 1.0 && d_fb * prev_iso_fb < 0.0) ++crossings_fb;
        prev_iso_qs = d_qs;
        prev_iso_fb = d_fb;
    }
    const bool ok = crossings_qs >= 1 && crossings_fb >= 1;
    std::printf("%s qualitative: isotropic-circuit curve crosses the switch and four-box "
                "curves below nbar ~ 8 (%d and %d sign changes)\n",
                ok ? "PASS" : "FAIL", crossings_qs, crossings_fb);
    if (!ok) ++g_failures;
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    criterion_1_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    qualitative_crossings();  // before 9 so its solves join the duality audit
    criterion_9();
    criterion_10();
    std::printf("%d criterion(s) failed; total runtime %.1f s\n", g_failures,
                seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
