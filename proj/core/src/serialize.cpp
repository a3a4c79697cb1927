#include "causalbench/serialize.hpp"

#include <stdexcept>

namespace causalbench::serialize {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (Eigen::Index(entries.size()) != rows * cols)
        throw std::invalid_argument("matrix_from_json: entry count mismatch");
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index jj = 0; jj < cols; ++jj, ++k)
            m(i, jj) = Complex(entries[std::size_t(k)][0].get<double>(),
                               entries[std::size_t(k)][1].get<double>());
    return m;
}

namespace {

const char* provenance_name(tester::Provenance p) {
    switch (p) {
        case tester::Provenance::ideal: return "ideal";
        case tester::Provenance::finite: return "finite";
        case tester::Provenance::haar: return "haar";
    }
    return "ideal";
}

tester::Provenance provenance_from(const std::string& s) {
    if (s == "ideal") return tester::Provenance::ideal;
    if (s == "finite") return tester::Provenance::finite;
    if (s == "haar") return tester::Provenance::haar;
    throw std::invalid_argument("unknown payoff provenance: " + s);
}

const char* order_name(tester::Order o) {
    return o == tester::Order::a_before_b ? "ab" : "ba";
}

tester::Order order_from(const std::string& s) {
    if (s == "ab") return tester::Order::a_before_b;
    if (s == "ba") return tester::Order::b_before_a;
    throw std::invalid_argument("unknown causal order: " + s);
}

}  // namespace

json payoff_to_json(const tester::PayoffPair& p) {
    return {{"provenance", provenance_name(p.provenance)},
            {"nbar", p.nbar},
            {"g_plus", matrix_to_json(p.g_plus)},
            {"g_minus", matrix_to_json(p.g_minus)}};
}

tester::PayoffPair payoff_from_json(const json& j) {
    tester::PayoffPair p;
    p.provenance = provenance_from(j.at("provenance").get<std::string>());
    p.nbar = j.at("nbar").get<double>();
    p.g_plus = matrix_from_json(j.at("g_plus"));
    p.g_minus = matrix_from_json(j.at("g_minus"));
    return p;
}

json tester_to_json(const tester::Tester& t) {
    return {{"order", order_name(t.order)},
            {"w_plus", matrix_to_json(t.w_plus)},
            {"w_minus", matrix_to_json(t.w_minus)},
            {"residuals",
             {{"psd_plus", t.residuals.psd_plus},
              {"psd_minus", t.residuals.psd_minus},
              {"reconstruction", t.residuals.reconstruction},
              {"marginal", t.residuals.marginal},
              {"normalization", t.residuals.normalization}}}};
}

tester::Tester tester_from_json(const json& j) {
    return tester::make_tester(order_from(j.at("order").get<std::string>()),
                               matrix_from_json(j.at("w_plus")),
                               matrix_from_json(j.at("w_minus")));
}

json fco_result_to_json(const sdp::FcoResult& r) {
    const char* status = r.status == sdp::SolveStatus::optimal
                             ? "optimal"
                             : (r.status == sdp::SolveStatus::max_iter ? "max_iter" : "infeasible");
    return {{"p_star", r.p_star},
            {"dual_certificate", r.certificate},
            {"gap", r.gap},
            {"solver_iters", r.iterations},
            {"status", status},
            {"tester", tester_to_json(r.tester)}};
}

}  // namespace causalbench::serialize
