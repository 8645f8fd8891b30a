#pragma once

// JSON state and network specifications, and JSON views of reports.
//
// State specs carry a "family" key:
//   ghz                 n, d, amplitudes | theta
//   dicke               n, d, k, coeffs ("uniform" or [{digits, amp}])
//   dicke_superposition betas, parts (dicke specs)
//   w                   alpha, beta, gamma | theta, phi
//   bipartite           schmidt | theta
//   epr                 (no parameters) (|00> + |11>)/sqrt(2)
//   literal             dims, amplitudes {label: number | [re, im]}
//   noisy               state (pure spec), v
//   mixture             components [{weight, state}]
// A document with "parties" and "sources" is a network spec; each source is
// {"state": spec, "assignment": {"0": "A1", "1": {"party": "A2", "slot": 0}}}.

#include <string>

#include <json.hpp>

#include "lossent/inequalities.hpp"
#include "lossent/network.hpp"
#include "lossent/witnesses.hpp"

namespace lossent {

using nlohmann::json;

/// Parses a file; syntax errors become InvalidInput naming line and column.
json parse_json_file(const std::string& path);
json parse_json_text(const std::string& text, const std::string& origin = "<input>");

bool is_network_spec(const json& j);
StateRef parse_state_spec(const json& j, const std::string& where = "");
NetworkSpec parse_network_spec(const json& j);

json to_json(const Verdict& v);
json to_json(const DepthReport& r, const Ownership& own);
json to_json(const PlsResult& r, const Ownership& own);
json to_json(const NetworkReport& r, const NetworkSpec& net);
json to_json(const Crosscheck& c, const Ownership& own);
json to_json(const QuditReport& r);
json to_json(const HardyReport& r);

/// Loss-set labels: party names, or "name[i]" particle labels.
std::string loss_set_label(const IndexSet& lost, const Ownership& own, LossMode mode);

}  // namespace lossent
