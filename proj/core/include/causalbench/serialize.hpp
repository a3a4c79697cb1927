// serialize.hpp — JSON records for payoffs, testers, and solver results:
// dimensions plus row-major complex entries as [re, im] pairs.

#pragma once

#include "causalbench/sdp.hpp"
#include "causalbench/tester.hpp"

#include <json.hpp>

namespace causalbench::serialize {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json payoff_to_json(const tester::PayoffPair& p);
tester::PayoffPair payoff_from_json(const nlohmann::json& j);

nlohmann::json tester_to_json(const tester::Tester& t);
tester::Tester tester_from_json(const nlohmann::json& j);

nlohmann::json fco_result_to_json(const sdp::FcoResult& r);

}  // namespace causalbench::serialize
