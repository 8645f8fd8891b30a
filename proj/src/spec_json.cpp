#include "lossent/spec_json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lossent/error.hpp"
#include "lossent/states.hpp"

namespace lossent {

namespace {

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput("missing field '" + key + "'", join(where, key));
  return j.at(key);
}

double num(const json& j, const std::string& field) {
  if (!j.is_number()) throw InvalidInput("expected a number", field);
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InvalidInput("expected a non-negative integer", field);
  return j.get<std::size_t>();
}

std::vector<double> nums(const json& j, const std::string& field) {
  if (!j.is_array()) throw InvalidInput("expected an array of numbers", field);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Complex complex_of(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidInput("expected a number or [re, im]", field);
}

std::vector<std::size_t> digits_of(const json& j, const DimVector& dims, const std::string& field) {
  if (j.is_string()) return parse_basis_label(j.get<std::string>(), dims);
  if (j.is_array()) {
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < j.size(); ++i) d.push_back(count(j[i], field));
    return d;
  }
  throw InvalidInput("expected a digit string or array", field);
}

DickeParams dicke_params(const json& j, const std::string& where) {
  DickeParams p;
  p.n = count(need(j, "n", where), join(where, "n"));
  p.d = j.contains("d") ? count(j.at("d"), join(where, "d")) : 2;
  p.k = count(need(j, "k", where), join(where, "k"));
  if (j.contains("coeffs") && !(j.at("coeffs").is_string() && j.at("coeffs") == "uniform")) {
    const json& c = j.at("coeffs");
    const std::string f = join(where, "coeffs");
    if (!c.is_array()) throw InvalidInput("coeffs must be \"uniform\" or a list", f);
    if (p.n < 1 || p.d < 2) throw InvalidInput("invalid n or d", where);
    const DimVector dims(std::vector<std::size_t>(p.n, p.d));
    std::map<Composition, double> m;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string fi = f + "[" + std::to_string(i) + "]";
      m[digits_of(need(c[i], "digits", fi), dims, fi + ".digits")] = num(need(c[i], "amp", fi), fi + ".amp");
    }
    p.coeffs = std::move(m);
  }
  return p;
}

template <class F>
auto with_field(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    if (!e.field().empty()) throw;
    throw InvalidInput(e.what(), where);
  }
}

PureState pure_of(const StateRef& s, const std::string& where) {
  if (const auto* p = std::get_if<PureState>(&s)) return *p;
  throw InvalidInput("a pure state is required here", where);
}

ParticleSlot slot_of(const json& j, const std::vector<std::string>& parties, const std::string& field) {
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < parties.size(); ++i)
      if (parties[i] == name) return i;
    throw InvalidInput("unknown party '" + name + "'", field);
  };
  if (j.is_string()) return {index_of(j.get<std::string>()), std::nullopt};
  if (j.is_object()) {
    ParticleSlot s{index_of(need(j, "party", field).get<std::string>()), std::nullopt};
    if (j.contains("slot")) s.slot = count(j.at("slot"), field + ".slot");
    return s;
  }
  throw InvalidInput("assignment entries are party names or {party, slot}", field);
}

json cut_json(const std::string& s) { return s.empty() ? json(nullptr) : json(s); }

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidInput(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error",
                       "line " + std::to_string(line));
  }
}

json parse_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open '" + path + "'", "input");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_json_text(ss.str(), path);
}

bool is_network_spec(const json& j) { return j.is_object() && j.contains("parties") && j.contains("sources"); }

StateRef parse_state_spec(const json& j, const std::string& where) {
  if (!j.is_object()) throw InvalidInput("state spec must be an object", where.empty() ? "$" : where);
  const std::string family = need(j, "family", where).get<std::string>();
  const std::string fw = join(where, "family");
  if (family == "ghz") {
    GhzParams p;
    p.n = count(need(j, "n", where), join(where, "n"));
    p.d = j.contains("d") ? count(j.at("d"), join(where, "d")) : 2;
    if (j.contains("theta")) {
      const double t = num(j.at("theta"), join(where, "theta"));
      if (p.d != 2) throw InvalidInput("theta form requires d = 2", join(where, "theta"));
      p.amplitudes = {std::cos(t), std::sin(t)};
    } else {
      p.amplitudes = nums(need(j, "amplitudes", where), join(where, "amplitudes"));
    }
    return with_field(where, [&] { return StateRef(ghz(p)); });
  }
  if (family == "dicke") {
    const DickeParams p = dicke_params(j, where);
    return with_field(where, [&] { return StateRef(dicke(p)); });
  }
  if (family == "dicke_superposition") {
    const std::vector<double> betas = nums(need(j, "betas", where), join(where, "betas"));
    const json& parts = need(j, "parts", where);
    std::vector<DickeParams> ps;
    for (std::size_t i = 0; i < parts.size(); ++i)
      ps.push_back(dicke_params(parts[i], join(where, "parts[" + std::to_string(i) + "]")));
    return with_field(where, [&] { return StateRef(dicke_superposition(betas, ps)); });
  }
  if (family == "w") {
    if (j.contains("theta"))
      return w_state_angles(num(j.at("theta"), join(where, "theta")), num(need(j, "phi", where), join(where, "phi")));
    const double a = num(need(j, "alpha", where), join(where, "alpha"));
    const double b = num(need(j, "beta", where), join(where, "beta"));
    const double g = num(need(j, "gamma", where), join(where, "gamma"));
    return with_field(where, [&] { return StateRef(w_state(a, b, g)); });
  }
  if (family == "epr") return bipartite_pure({std::sqrt(0.5), std::sqrt(0.5)});
  if (family == "bipartite") {
    std::vector<double> s;
    if (j.contains("theta")) {
      const double t = num(j.at("theta"), join(where, "theta"));
      s = {std::cos(t), std::sin(t)};
    } else {
      s = nums(need(j, "schmidt", where), join(where, "schmidt"));
    }
    return with_field(join(where, "schmidt"), [&] { return StateRef(bipartite_pure(s)); });
  }
  if (family == "literal") {
    const std::string fd = join(where, "dims");
    const DimVector dims = with_field(fd, [&] {
      return DimVector(need(j, "dims", where).get<std::vector<std::size_t>>());
    });
    const json& amps = need(j, "amplitudes", where);
    const std::string fa = join(where, "amplitudes");
    if (!amps.is_object()) throw InvalidInput("amplitudes must map basis labels to values", fa);
    std::vector<std::pair<std::vector<std::size_t>, Complex>> list;
    for (const auto& [label, value] : amps.items()) {
      const std::string fl = fa + "." + label;
      list.emplace_back(with_field(fl, [&] { return parse_basis_label(label, dims); }), complex_of(value, fl));
    }
    return with_field(fa, [&] { return StateRef(from_amplitudes(dims, list)); });
  }
  if (family == "noisy") {
    const PureState psi = pure_of(parse_state_spec(need(j, "state", where), join(where, "state")), join(where, "state"));
    const double v = num(need(j, "v", where), join(where, "v"));
    return with_field(join(where, "v"), [&] { return StateRef(noisy_mix(psi, v)); });
  }
  if (family == "mixture") {
    const json& comps = need(j, "components", where);
    if (!comps.is_array() || comps.empty()) throw InvalidInput("components must be a nonempty list", join(where, "components"));
    std::vector<double> w;
    std::vector<DensityMatrix> states;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string fi = join(where, "components[" + std::to_string(i) + "]");
      w.push_back(num(need(comps[i], "weight", fi), fi + ".weight"));
      const StateRef s = parse_state_spec(need(comps[i], "state", fi), fi + ".state");
      states.push_back(std::holds_alternative<PureState>(s) ? std::get<PureState>(s).projector()
                                                             : std::get<DensityMatrix>(s));
    }
    return with_field(join(where, "components"), [&] { return StateRef(mix(w, states)); });
  }
  throw InvalidInput("unknown state family '" + family + "'", fw);
}

NetworkSpec parse_network_spec(const json& j) {
  NetworkSpec net;
  const json& parties = need(j, "parties", "");
  if (!parties.is_array()) throw InvalidInput("parties must be a list of names", "parties");
  for (const auto& p : parties) {
    if (!p.is_string()) throw InvalidInput("party names must be strings", "parties");
    net.parties.push_back(p.get<std::string>());
  }
  const json& sources = need(j, "sources", "");
  if (!sources.is_array()) throw InvalidInput("sources must be a list", "sources");
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const std::string where = "sources[" + std::to_string(si) + "]";
    const StateRef s = parse_state_spec(need(sources[si], "state", where), where + ".state");
    Source src{pure_of(s, where + ".state"), {}, need(sources[si], "state", where).value("family", "")};
    const json& asg = need(sources[si], "assignment", where);
    if (!asg.is_object()) throw InvalidInput("assignment must map particle index to party", where + ".assignment");
    const std::size_t np = src.state.num_subsystems();
    for (const auto& [key, value] : asg.items()) {
      if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos || std::stoul(key) >= np)
        throw InvalidInput("assignment key '" + key + "' is not a particle index of this source",
                           where + ".assignment." + key);
    }
    for (std::size_t p = 0; p < np; ++p) {
      const std::string key = std::to_string(p);
      if (!asg.contains(key))
        throw InvalidInput(where + ": particle " + key + " is not assigned to a party", where + ".assignment." + key);
      src.assignment.push_back(slot_of(asg.at(key), net.parties, where + ".assignment." + key));
    }
    net.sources.push_back(std::move(src));
  }
  net.validate();
  return net;
}

std::string loss_set_label(const IndexSet& lost, const Ownership& own, LossMode mode) {
  std::string out = "{";
  for (std::size_t i = 0; i < lost.size(); ++i) {
    if (i) out += ",";
    if (mode == LossMode::Party) {
      out += own.names().at(lost[i]);
    } else {
      const std::size_t party = own.party_of(lost[i]);
      const IndexSet ps = own.particles_of(party);
      const auto pos = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), lost[i]) - ps.begin());
      out += own.names()[party] + "[" + std::to_string(pos) + "]";
    }
  }
  return out + "}";
}

json to_json(const Verdict& v) {
  json ev = json::array();
  for (const auto& e : v.evidence) ev.push_back({{"test", e.test}, {"cut", cut_json(e.cut)}, {"value", e.value}});
  json out = {{"status", to_string(v.status)}, {"evidence", ev}};
  if (!v.level.empty()) out["level"] = v.level;
  return out;
}

json to_json(const DepthReport& r, const Ownership& own) {
  json trace = json::array();
  for (const auto& s : r.trace) {
    json item = to_json(s.verdict);
    item["lost"] = s.lost;
    item["label"] = loss_set_label(s.lost, own, r.mode);
    trace.push_back(std::move(item));
  }
  json out = {{"depth", r.depth},
              {"mode", to_string(r.mode)},
              {"base_entangled", r.base_entangled},
              {"capped", r.capped},
              {"exhausted", r.exhausted},
              {"unknown_at_size", r.unknown_at_size ? json(*r.unknown_at_size) : json(nullptr)},
              {"first_failure", r.first_failure ? json(loss_set_label(*r.first_failure, own, r.mode)) : json(nullptr)},
              {"witness_trace", trace}};
  return out;
}

json to_json(const PlsResult& r, const Ownership& own) {
  json trace = json::array();
  for (const auto& s : r.trace) {
    json item = to_json(s.verdict);
    item["lost"] = s.lost;
    item["label"] = loss_set_label(s.lost, own, LossMode::Party);
    trace.push_back(std::move(item));
  }
  const char* verdict = r.status == Status::Separable   ? "particle_lose_separable"
                        : r.status == Status::Entangled ? "robust"
                                                        : "unknown";
  return {{"verdict", verdict},
          {"status", to_string(r.status)},
          {"witness_set", r.witness_set ? json(loss_set_label(*r.witness_set, own, LossMode::Party)) : json(nullptr)},
          {"witness_indices", r.witness_set ? json(*r.witness_set) : json(nullptr)},
          {"granularity", r.granularity.empty() ? json(nullptr) : json(r.granularity)},
          {"trace", trace}};
}

json to_json(const NetworkReport& r, const NetworkSpec& net) {
  auto names = [&](const IndexSet& s) {
    json a = json::array();
    for (std::size_t i : s) a.push_back(net.parties.at(i));
    return a;
  };
  return {{"parties", r.num_parties},
          {"k_independence", r.k_independence},
          {"independent_set", names(r.independent_set)},
          {"particle_lose_separable", r.particle_lose_separable},
          {"witnessing_loss_set", names(r.witnessing_loss_set)},
          {"completely_connected", r.completely_connected},
          {"robust", r.robust},
          {"connected", r.connected},
          {"min_degree", r.min_degree},
          {"predicted_depth", r.predicted_depth ? json(*r.predicted_depth) : json(nullptr)},
          {"k_connected_cap", r.bipartite_cap},
          {"cap_depth_bound", r.cap_depth_bound ? json(*r.cap_depth_bound) : json(nullptr)}};
}

json to_json(const Crosscheck& c, const Ownership& own) {
  json out = {{"depth", to_json(c.depth, own)},
              {"predicted_depth", c.predicted ? json(*c.predicted) : json(nullptr)},
              {"agrees", c.agrees}};
  if (!c.connectivity.empty()) {
    json rows = json::array();
    for (const auto& k : c.connectivity)
      rows.push_back({{"lost", loss_set_label(k.lost, own, LossMode::Particle)},
                      {"status", to_string(k.status)},
                      {"share_graph_connected", k.share_graph_connected},
                      {"source_graph_connected", k.source_graph_connected},
                      {"consistent", k.consistent}});
    out["connectivity"] = rows;
  }
  return out;
}

json to_json(const QuditReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"u", t.u}, {"lhs", t.lhs}, {"bound", t.bound}, {"value", t.value}});
  return {{"d", r.d}, {"terms", terms}, {"aggregate", r.aggregate}, {"violated", r.violated}};
}

json to_json(const HardyReport& r) {
  json pre = json::array();
  for (const auto& c : r.preconditions) pre.push_back({{"name", c.name}, {"holds", c.holds}, {"residual", c.residual}});
  return {{"preconditions", pre},
          {"quadratic", {{"holds", r.quadratic.holds}, {"value", r.quadratic.residual}}},
          {"preconditions_hold", r.preconditions_hold},
          {"hardy_violation", r.hardy_violation}};
}

}  // namespace lossent
