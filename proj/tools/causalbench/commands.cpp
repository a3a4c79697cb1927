#include "commands.hpp"

#include "csv.hpp"
#include "svg.hpp"

#include "causalbench/parallel.hpp"
#include "causalbench/sdp.hpp"
#include "causalbench/serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace causalbench::cli {

namespace disc = causalbench::discrimination;

Matrix2 RunConfig::rho_matrix() const {
    Matrix2 r = Matrix2::Zero();
    if (rho == "mixed") {
        r = 0.5 * Matrix2::Identity();
    } else if (rho == "zero") {
        r(0, 0) = 1.0;
    } else if (rho == "one") {
        r(1, 1) = 1.0;
    } else {
        throw std::invalid_argument("rho must be one of mixed, zero, one");
    }
    return r;
}

std::vector<double> RunConfig::nbar_values() const {
    std::vector<double> v;
    if (nbar_steps == 1) {
        v.push_back(nbar_min);
        return v;
    }
    for (int i = 0; i < nbar_steps; ++i)
        v.push_back(nbar_min + (nbar_max - nbar_min) * double(i) / double(nbar_steps - 1));
    return v;
}

int RunConfig::effective_threads() const {
    if (const char* env = std::getenv("CAUSALBENCH_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return resolve_threads(threads);
}

namespace {

std::string config_comment(const char* command, const RunConfig& cfg) {
    std::ostringstream os;
    os << "causalbench " << command << " schema=1"
       << " nbar_min=" << format_double(cfg.nbar_min) << " nbar_max=" << format_double(cfg.nbar_max)
       << " nbar_steps=" << cfg.nbar_steps << " grid=" << cfg.grid
       << " tol=" << format_double(cfg.tol) << " rho=" << cfg.rho << " seed=" << cfg.seed
       << " threads=" << cfg.effective_threads();
    return os.str();
}

double first_order_fidelity(double theta, double nbar) {
    return 1.0 - (1.0 - std::cos(theta) + theta * theta / 2.0) / (12.0 * nbar);
}

}  // namespace

int cmd_fidelity_sweep(const RunConfig& cfg, std::ostream& out) {
    CsvWriter csv(out);
    csv.comment(config_comment("fidelity-sweep", cfg));
    csv.field("theta").field("nbar").field("F_exact").field("F_first_order");
    csv.end_row();
    std::vector<double> thetas = cfg.theta_list;
    if (thetas.empty()) thetas = {pi / 4, pi / 2, pi};
    for (double theta : thetas) {
        const auto target = channels::Rotation::equatorial(theta, 0.0);
        for (double nbar : cfg.nbar_values()) {
            const auto trunc = fock::truncation_order(nbar);
            const double f = channels::average_gate_fidelity(
                channels::jc_channel(theta, 0.0, nbar, trunc), target);
            csv.field(theta).field(nbar).field(f).field(first_order_fidelity(theta, nbar));
            csv.end_row();
        }
    }
    return exit_ok;
}

namespace {

struct SweepRow {
    double nbar;
    std::string setup;
    double p_avg, p_com, p_anti, quad_err;
    bool has_first_order;
    double p_first_order;
};

int best_isotropic_fco(const tester::PayoffPair& payoff, double tol, double* p_best) {
    double best = 0.0;
    for (auto order : {tester::Order::a_before_b, tester::Order::b_before_a}) {
        const auto res = sdp::optimize_fco(payoff, order, true, tol, 200000);
        if (res.status != sdp::SolveStatus::optimal) return exit_solver;
        best = std::max(best, res.p_star);
    }
    *p_best = best;
    return exit_ok;
}

}  // namespace

int cmd_success_sweep(const RunConfig& cfg, std::ostream& out, std::ostream* svg_out) {
    std::vector<std::string> setups = cfg.setups;
    if (setups.empty()) setups = {"qs", "4b"};
    std::sort(setups.begin(), setups.end());
    const Matrix2 rho = cfg.rho_matrix();

    std::vector<SweepRow> rows;
    for (double nbar : cfg.nbar_values()) {
        for (const auto& setup : setups) {
            SweepRow row;
            row.nbar = nbar;
            row.setup = setup;
            if (setup == "qs" || setup == "4b") {
                disc::TaskConfig tc;
                tc.setup = setup == "qs" ? disc::Setup::quantum_switch : disc::Setup::four_box;
                tc.nbar = nbar;
                tc.rho_s = rho;
                tc.grid = {cfg.grid, cfg.grid, cfg.grid, cfg.grid, cfg.grid};
                tc.threads = cfg.effective_threads();
                const auto rep = disc::average_success(tc);
                row.p_avg = rep.p_average;
                row.p_com = rep.p_commuting;
                row.p_anti = rep.p_anticommuting;
                row.quad_err = rep.quadrature_error_estimate;
                row.has_first_order = true;
                row.p_first_order = disc::asymptotic_success(tc.setup, nbar, rho).p_average;
            } else if (setup == "fco-iso") {
                tester::PayoffGrids grids{cfg.grid, cfg.grid, cfg.grid, cfg.grid};
                const auto payoff =
                    tester::finite_payoff(nbar, grids, fock::truncation_order(nbar));
                double best = 0.0;
                if (const int rc = best_isotropic_fco(payoff, cfg.tol, &best); rc != exit_ok)
                    return rc;
                row.p_avg = best;
                row.p_com = row.p_anti = row.quad_err = 0.0;
                row.has_first_order = false;
                row.p_first_order = 0.0;
            } else {
                throw std::invalid_argument("unknown setup: " + setup);
            }
            rows.push_back(std::move(row));
        }
    }

    CsvWriter csv(out);
    csv.comment(config_comment("success-sweep", cfg));
    csv.field("nbar").field("setup").field("p_avg").field("p_com").field("p_anti")
        .field("quad_err").field("p_first_order");
    csv.end_row();
    for (const auto& r : rows) {
        csv.field(r.nbar).field(r.setup).field(r.p_avg).field(r.p_com).field(r.p_anti)
            .field(r.quad_err);
        if (r.has_first_order)
            csv.field(r.p_first_order);
        else
            csv.field("");
        csv.end_row();
    }
    // limiting value of the optimized isotropic circuits, when requested
    if (std::find(setups.begin(), setups.end(), "fco-iso") != setups.end()) {
        double best = 0.0;
        if (const int rc = best_isotropic_fco(tester::ideal_payoff(), cfg.tol, &best);
            rc != exit_ok)
            return rc;
        csv.field("inf").field("fco-iso").field(best).field("").field("").field("").field("");
        csv.end_row();
    }

    if (svg_out != nullptr) {
        SvgPlot plot("Commuting-vs-anticommuting success probability", "nbar", "p_success");
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
        int ci = 0;
        for (const auto& setup : setups) {
            SvgCurve curve;
            curve.label = setup;
            curve.color = colors[ci % 3];
            for (const auto& r : rows)
                if (r.setup == setup) curve.points.emplace_back(r.nbar, r.p_avg);
            plot.add_curve(std::move(curve));
            if (setup == "qs" || setup == "4b") {
                SvgCurve dash;
                dash.label = setup + std::string(" first order");
                dash.color = colors[ci % 3];
                dash.dashed = true;
                for (const auto& r : rows)
                    if (r.setup == setup) dash.points.emplace_back(r.nbar, r.p_first_order);
                plot.add_curve(std::move(dash));
            }
            ++ci;
        }
        plot.render(*svg_out);
    }
    return exit_ok;
}

int cmd_fco_optimize(const RunConfig& cfg, std::ostream& out) {
    nlohmann::json records = nlohmann::json::array();
    int rc = exit_ok;
    auto solve_one = [&](const tester::PayoffPair& payoff, bool is_ideal, double nbar) {
        const auto res = sdp::optimize_fco(payoff, cfg.order, cfg.isotropic, cfg.tol, 200000);
        nlohmann::json rec = serialize::fco_result_to_json(res);
        rec["nbar"] = is_ideal ? nlohmann::json() : nlohmann::json(nbar);
        rec["ideal"] = is_ideal;
        rec["order"] = cfg.order == tester::Order::a_before_b ? "ab" : "ba";
        rec["isotropic"] = cfg.isotropic;
        records.push_back(std::move(rec));
        if (res.status != sdp::SolveStatus::optimal) rc = exit_solver;
    };
    if (cfg.ideal) {
        solve_one(tester::ideal_payoff(), true, 0.0);
    }
    for (double nbar : cfg.nbar_list) {
        tester::PayoffGrids grids{cfg.grid, cfg.grid, cfg.grid, cfg.grid};
        solve_one(tester::finite_payoff(nbar, grids, fock::truncation_order(nbar)), false, nbar);
    }
    out << records.dump(2) << "\n";
    return rc;
}

int cmd_verify_circuit(const RunConfig& cfg, std::ostream& out) {
    const auto circuit = tester::perfect_discrimination_circuit();
    const double worst = tester::verify_perfect_discrimination(circuit, cfg.samples, cfg.seed);
    const auto t = tester::tester_from_circuit(circuit);
    const auto payoff = tester::ideal_payoff();
    const double p = 0.5 * (t.w_plus.transpose() * payoff.g_plus).trace().real() +
                     0.5 * (t.w_minus.transpose() * payoff.g_minus).trace().real();
    nlohmann::json rec{{"samples", cfg.samples},
                       {"seed", cfg.seed},
                       {"max_abs_overlap", worst},
                       {"tester_success_ideal", p},
                       {"max_constraint_residual", t.residuals.max()}};
    out << rec.dump(2) << "\n";
    return exit_ok;
}

namespace {

double mean_abs_overlap(disc::Setup setup, double nbar, const Matrix2& rho, int grid,
                        int threads) {
    const auto com = disc::grid_commuting(grid, grid, grid);
    const auto anti = disc::grid_anticommuting(grid, grid);
    const double box_nbar = setup == disc::Setup::quantum_switch ? nbar : nbar / 2.0;
    const auto trunc = fock::truncation_order(box_nbar);
    auto value = [&](const disc::PairSample& p) {
        const Complex o = setup == disc::Setup::quantum_switch
                              ? disc::switch_overlap(p, nbar, rho, trunc)
                              : disc::four_box_overlap(p, nbar, rho, trunc);
        return std::abs(o) * p.weight;
    };
    std::vector<double> vc(com.size()), va(anti.size());
    parallel_for(com.size(), threads, [&](std::size_t i) { vc[i] = value(com[i]); });
    parallel_for(anti.size(), threads, [&](std::size_t i) { va[i] = value(anti[i]); });
    return 0.5 * pairwise_sum(vc) + 0.5 * pairwise_sum(va);
}

}  // namespace

int cmd_entropy(const RunConfig& cfg, std::ostream& out) {
    CsvWriter csv(out);
    csv.comment(config_comment("entropy", cfg));
    csv.field("nbar").field("setup").field("mean_abs_overlap").field("entropy_bits");
    csv.end_row();
    const Matrix2 rho = cfg.rho_matrix();
    for (double nbar : cfg.nbar_values()) {
        for (auto [setup, name] : {std::pair{disc::Setup::four_box, "4b"},
                                   std::pair{disc::Setup::quantum_switch, "qs"}}) {
            const double mo =
                mean_abs_overlap(setup, nbar, rho, cfg.grid, cfg.effective_threads());
            csv.field(nbar).field(name).field(mo).field(disc::control_entropy(Complex(mo, 0.0)));
            csv.end_row();
        }
    }
    return exit_ok;
}

int cmd_asymptotics(const RunConfig& cfg, std::ostream& out) {
    CsvWriter csv(out);
    csv.comment(config_comment("asymptotics", cfg));
    csv.field("nbar").field("qs_com").field("qs_anti").field("qs_avg").field("4b_com")
        .field("4b_anti").field("4b_avg").field("gap");
    csv.end_row();
    const Matrix2 rho = cfg.rho_matrix();
    for (double nbar : cfg.nbar_values()) {
        const auto qs = disc::asymptotic_success(disc::Setup::quantum_switch, nbar, rho);
        const auto fb = disc::asymptotic_success(disc::Setup::four_box, nbar, rho);
        csv.field(nbar).field(qs.p_commuting).field(qs.p_anticommuting).field(qs.p_average)
            .field(fb.p_commuting).field(fb.p_anticommuting).field(fb.p_average)
            .field(qs.p_average - fb.p_average);
        csv.end_row();
    }
    return exit_ok;
}

}  // namespace causalbench::cli
