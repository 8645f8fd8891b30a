// lossent: build states and networks, apply particle loss, classify the
// reductions and emit sweep data.
//
// Exit codes: 0 success, 1 analysis verdict Unknown, 2 input or capacity error.
// Errors are reported as one JSON object on stderr.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lossent/channels.hpp"
#include "lossent/error.hpp"
#include "lossent/inequalities.hpp"
#include "lossent/network.hpp"
#include "lossent/spec_json.hpp"
#include "lossent/state_io.hpp"
#include "lossent/sweep.hpp"
#include "lossent/witnesses.hpp"

using namespace lossent;

namespace {

struct Globals {
  std::optional<double> tolerance;
  std::string frames = "optimized";
  std::size_t max_dim = kDefaultMaxDim;
  std::string mode = "party";
};

struct Loaded {
  StateFile file;
  std::optional<NetworkSpec> net;
};

WitnessOptions witness_options(const Globals& g) {
  WitnessOptions o;
  if (g.frames == "identity") {
    o.bitflip_frames = false;
    o.optimize_frames = false;
  } else if (g.frames == "bitflip") {
    o.optimize_frames = false;
  }
  if (g.tolerance) {
    o.witness_threshold = *g.tolerance;
    o.npt_threshold = -*g.tolerance;
  }
  return o;
}

LossMode loss_mode(const Globals& g) { return g.mode == "particle" ? LossMode::Particle : LossMode::Party; }

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open '" + path + "'", "input");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool is_state_file(const std::string& content) {
  const std::string first = content.substr(0, content.find('\n'));
  const json h = json::parse(first, nullptr, false);
  return h.is_object() && h.value("format", "") == "lossent-state";
}

void check_capacity(const StateRef& s, std::size_t max_dim) {
  const std::size_t dim = dims_of(s).total();
  if (dim > max_dim)
    throw CapacityExceeded("state dimension " + std::to_string(dim) + " exceeds --max-dim " + std::to_string(max_dim));
}

Loaded load(const std::string& path, std::size_t max_dim) {
  const std::string content = slurp(path);
  if (is_state_file(content)) {
    std::istringstream is(content);
    Loaded l{read_state(is), std::nullopt};
    check_capacity(l.file.state, max_dim);
    return l;
  }
  const json j = parse_json_text(content, path);
  if (is_network_spec(j)) {
    NetworkSpec net = parse_network_spec(j);
    NetworkState built = build_state(net, max_dim);
    return {StateFile{std::move(built.state), std::move(built.ownership)}, std::move(net)};
  }
  Loaded l{StateFile{parse_state_spec(j), std::nullopt}, std::nullopt};
  check_capacity(l.file.state, max_dim);
  return l;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

bool is_index(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

// Party mode: party names or indices. Particle mode: global indices,
// "name[i]" for a party's i-th particle, or a bare name for all of them.
IndexSet parse_loss(const std::string& text, const Ownership& own, LossMode mode) {
  IndexSet out;
  for (const std::string& tok : split(text, ',')) {
    if (is_index(tok)) {
      out.push_back(std::stoul(tok));
    } else if (mode == LossMode::Party) {
      out.push_back(own.party_index(tok));
    } else if (const auto br = tok.find('['); br != std::string::npos && tok.back() == ']') {
      const std::string idx = tok.substr(br + 1, tok.size() - br - 2);
      const IndexSet ps = own.particles_of(own.party_index(tok.substr(0, br)));
      if (!is_index(idx) || std::stoul(idx) >= ps.size())
        throw InvalidInput("no particle '" + tok + "'", "--lose");
      out.push_back(ps[std::stoul(idx)]);
    } else {
      for (std::size_t p : own.particles_of(own.party_index(tok))) out.push_back(p);
    }
  }
  if (out.empty()) throw InvalidInput("empty loss set", "--lose");
  return out;
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(out);
  if (!os) throw InvalidInput("cannot open '" + out + "' for writing", "output");
  os << j.dump(2) << '\n';
}

json summary(const StateFile& f, const std::string& path) {
  const DensityMatrix rho = to_density(f.state);
  double norm = 0.0;
  if (const auto* p = std::get_if<PureState>(&f.state)) norm = p->amps().norm();
  else norm = rho.mat().trace().real();
  const Ownership own = ownership_or_trivial(f);
  return {{"output", path},
          {"kind", std::holds_alternative<PureState>(f.state) ? "pure" : "density"},
          {"dims", dims_of(f.state).values()},
          {"dim", dims_of(f.state).total()},
          {"parties", own.names()},
          {"norm", norm},
          {"purity", rho.purity()}};
}

bool all_qubits(const DimVector& d) {
  for (std::size_t x : d.values())
    if (x != 2) return false;
  return true;
}

bool uniform_qudits(const DimVector& d) {
  for (std::size_t x : d.values())
    if (x != d.values().front()) return false;
  return d.values().front() > 2;
}

json witness_report(const DensityMatrix& rho, const WitnessOptions& opts, std::size_t grid, Status& status) {
  json out = {{"dims", rho.dims().values()}};
  const std::size_t n = rho.num_subsystems();
  if (all_qubits(rho.dims()) && n == 2) {
    const FramedValue fv = nonlinear2_bitflip_max(rho);
    const ChshMax xy = chsh_plane_max(rho, Plane::XY, grid);
    const ChshMax xz = chsh_plane_max(rho, Plane::XZ, grid);
    const auto s = default_hardy_settings();
    out["nonlinear2"] = {{"lhs", nonlinear2_lhs(rho)},
                         {"density_lhs", nonlinear2_density_lhs(rho)},
                         {"bitflip_max", fv.value},
                         {"bitflip_frame", fv.flips}};
    out["chsh"] = {{"xy", {{"value", xy.value}, {"angles", xy.angles}}},
                   {"xz", {{"value", xz.value}, {"angles", xz.angles}}}};
    out["hardy"] = to_json(hardy_check(probability_table(rho, s, s)));
  }
  if (all_qubits(rho.dims()) && n >= 2) {
    const double dens = multipartite_witness_lhs(rho, WitnessForm::Density);
    const double lit = multipartite_witness_lhs(rho, WitnessForm::PauliLiteral);
    const FrameSearch fs = multipartite_witness_frame_search(rho, opts);
    out["multipartite"] = {{"density", dens},
                           {"pauli_literal", lit},
                           {"sign_disagreement", (dens > 0) != (lit > 0) && std::abs(dens) > 1e-12},
                           {"best_frame_value", fs.value},
                           {"best_frame", fs.frame},
                           {"fidelity", fidelity_witness(rho)}};
  }
  if (uniform_qudits(rho.dims())) out["qudit"] = to_json(qudit_witness_report(rho));
  const Verdict v = classify_reduction(rho, opts);
  status = v.status;
  out["verdict"] = to_json(v);
  return out;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos || !is_index(s.substr(0, x)) || !is_index(s.substr(x + 1)))
    throw InvalidInput("grid must look like 50x50", "--grid");
  return {std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
}

int fail(const std::string& kind, const std::string& message, const std::string& field = {}) {
  json d = {{"error", kind}, {"message", message}};
  if (!field.empty()) d["field"] = field;
  std::cerr << d.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-loss robustness of multipartite entanglement"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tolerance", g.tolerance, "Witness threshold; NPT threshold is its negative")
      ->check(CLI::PositiveNumber);
  app.add_option("--frames", g.frames, "Witness frames")->check(CLI::IsMember({"identity", "bitflip", "optimized"}));
  app.add_option("--max-dim", g.max_dim, "Largest ambient dimension")->check(CLI::PositiveNumber);
  app.add_option("--mode", g.mode, "Loss granularity")->check(CLI::IsMember({"party", "particle"}));

  std::string input, output, lose, grid = "50x50", format = "csv", family;
  bool text = false, crosscheck = false, serial = false;
  std::size_t max_loss = 0, resolution = 2048, chsh_grid = 48;

  auto* build = app.add_subcommand("build", "Build a state from a state or network spec");
  build->fallthrough();
  build->add_option("spec", input, "Spec JSON")->required();
  build->add_option("-o,--output", output, "State file")->required();
  build->add_flag("--text", text, "Text encoding");

  auto* apply = app.add_subcommand("apply-loss", "Trace out lost parties or particles");
  apply->fallthrough();
  apply->add_option("input", input, "State file or spec")->required();
  apply->add_option("--lose", lose, "Comma-separated loss set")->required();
  apply->add_option("-o,--output", output, "State file")->required();
  apply->add_flag("--text", text, "Text encoding");

  auto* analyze = app.add_subcommand("analyze", "Particle-lose separability and robustness depth");
  analyze->fallthrough();
  analyze->add_option("input", input, "State file or spec")->required();
  analyze->add_option("--max-loss", max_loss, "Largest loss-set size (0: all admissible)");
  analyze->add_option("-o,--output", output, "Report file");

  auto* witness = app.add_subcommand("witness", "Evaluate witnesses and inequalities");
  witness->fallthrough();
  witness->add_option("input", input, "State file or spec")->required();
  witness->add_option("--lose", lose, "Loss set applied first");
  witness->add_option("--chsh-grid", chsh_grid, "CHSH angle grid")->check(CLI::Range(4, 4096));
  witness->add_option("-o,--output", output, "Report file");

  auto* network = app.add_subcommand("network", "Graph analysis of a network spec");
  network->fallthrough();
  network->add_option("spec", input, "Network spec JSON")->required();
  network->add_flag("--crosscheck", crosscheck, "Brute-force depth against the graph prediction");
  network->add_option("-o,--output", output, "Report file");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep data");
  sweep->fallthrough();
  sweep->add_option("family", family, "Sweep family")
      ->required()
      ->check(CLI::IsMember({"w_nonlinear", "chsh_planes", "svetlichny_visibility", "ghz_family", "dicke_family"}));
  sweep->add_option("--grid", grid, "theta x phi steps, e.g. 50x50");
  sweep->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--resolution", resolution, "1-D maximization grid")->check(CLI::Range(2, 1 << 24));
  sweep->add_option("--chsh-grid", chsh_grid, "CHSH angle grid")->check(CLI::Range(4, 4096));
  sweep->add_flag("--serial", serial, "Single-threaded");
  sweep->add_option("-o,--output", output, "Data file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    const LossMode mode = loss_mode(g);
    const WitnessOptions wopts = witness_options(g);

    if (*build) {
      const Loaded l = load(input, g.max_dim);
      write_state_file(output, l.file, text ? Encoding::Text : Encoding::Binary);
      emit(summary(l.file, output), "");
      return 0;
    }

    if (*apply) {
      const Loaded l = load(input, g.max_dim);
      const Ownership own = ownership_or_trivial(l.file);
      const LossSpec spec{mode, parse_loss(lose, own, mode)};
      const LossResult r = std::holds_alternative<PureState>(l.file.state)
                               ? lossent::lose(std::get<PureState>(l.file.state), spec, own)
                               : lossent::lose(std::get<DensityMatrix>(l.file.state), spec, own);
      const StateFile out{r.state, r.ownership};
      write_state_file(output, out, text ? Encoding::Text : Encoding::Binary);
      json s = summary(out, output);
      s["lost"] = loss_set_label(spec.lost, own, mode);
      emit(s, "");
      return 0;
    }

    if (*analyze) {
      const Loaded l = load(input, g.max_dim);
      const Ownership own = ownership_or_trivial(l.file);
      const PlsResult pls = particle_lose_separable(l.file.state, own, wopts);
      DepthOptions dopts;
      dopts.mode = mode;
      dopts.max_loss = max_loss;
      dopts.witness = wopts;
      const DepthReport depth = robustness_depth(l.file.state, own, dopts);
      json report = {{"dims", dims_of(l.file.state).values()},
                     {"parties", own.names()},
                     {"particle_lose_separability", to_json(pls, own)},
                     {"robustness", to_json(depth, own)}};
      if (l.net) report["network"] = to_json(classify_network(*l.net), *l.net);
      emit(report, output);
      return pls.status == Status::Unknown || depth.unknown_at_size ? 1 : 0;
    }

    if (*witness) {
      const Loaded l = load(input, g.max_dim);
      DensityMatrix rho = to_density(l.file.state);
      json extra = json::object();
      if (!lose.empty()) {
        const Ownership own = ownership_or_trivial(l.file);
        const LossSpec spec{mode, parse_loss(lose, own, mode)};
        rho = lossent::lose(rho, spec, own).state;
        extra["lost"] = loss_set_label(spec.lost, own, mode);
      }
      Status status = Status::Unknown;
      json report = witness_report(rho, wopts, chsh_grid, status);
      report.update(extra);
      emit(report, output);
      return status == Status::Unknown ? 1 : 0;
    }

    if (*network) {
      const json j = parse_json_file(input);
      if (!is_network_spec(j)) throw InvalidInput("expected a network spec with parties and sources", "$");
      const NetworkSpec net = parse_network_spec(j);
      json report = to_json(classify_network(net), net);
      int code = 0;
      if (crosscheck) {
        DepthOptions dopts;
        dopts.mode = mode;
        dopts.witness = wopts;
        const Crosscheck c = depth_crosscheck(net, mode, g.max_dim, dopts);
        report["crosscheck"] = to_json(c, build_state(net, g.max_dim).ownership);
        if (c.depth.unknown_at_size) code = 1;
      }
      emit(report, output);
      return code;
    }

    if (*sweep) {
      SweepConfig cfg;
      cfg.family = family;
      std::tie(cfg.theta_steps, cfg.phi_steps) = parse_grid(grid);
      cfg.format = format == "json" ? SweepFormat::Json : SweepFormat::Csv;
      cfg.resolution = resolution;
      cfg.chsh_grid = chsh_grid;
      cfg.parallel = !serial;
      const std::string data = run_sweep(cfg);
      if (output.empty() || output == "-") {
        std::cout << data;
      } else {
        std::ofstream os(output, std::ios::binary);
        if (!os) throw InvalidInput("cannot open '" + output + "' for writing", "output");
        os << data;
      }
      return 0;
    }
  } catch (const InvalidInput& e) {
    return fail("invalid_input", e.what(), e.field());
  } catch (const CapacityExceeded& e) {
    return fail("capacity_exceeded", e.what());
  } catch (const std::exception& e) {
    return fail("error", e.what());
  }
  return 0;
}
