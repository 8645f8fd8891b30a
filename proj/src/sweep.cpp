#include "lossent/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lossent/channels.hpp"
#include "lossent/error.hpp"
#include "lossent/inequalities.hpp"
#include "lossent/states.hpp"
#include "lossent/witnesses.hpp"

namespace lossent {

namespace {

using Cell = std::variant<double, std::size_t, bool, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double axis(std::size_t i, std::size_t steps) {
  return 0.5 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(double v) const { return fmt(v); }
    std::string operator()(std::size_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isnan(*d) ? nlohmann::json(nullptr) : nlohmann::json(*d);
  return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

std::string render(const Table& t, SweepFormat format) {
  if (format == SweepFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const Row& r : t.rows) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = json_cell(r[i]);
      rows.push_back(std::move(o));
    }
    return nlohmann::json{{"columns", t.columns}, {"rows", rows}}.dump(1) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const Row& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_cell(r[i]);
    out += "\n";
  }
  return out;
}

template <class F>
std::vector<Row> grid_rows(const SweepConfig& cfg, F&& row_at) {
  std::vector<Row> rows(cfg.theta_steps * cfg.phi_steps);
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    rows[u] = row_at(axis(u / cfg.phi_steps, cfg.theta_steps), axis(u % cfg.phi_steps, cfg.phi_steps));
  }
  return rows;
}

DensityMatrix reduction(const PureState& w, std::size_t lost) { return partial_trace(w, {lost}); }

Table w_nonlinear(const SweepConfig& cfg) {
  Table t{{"theta", "phi", "value_A1", "value_A2", "value_A3", "flag"}, {}};
  t.rows = grid_rows(cfg, [](double th, double ph) {
    const PureState w = w_state_angles(th, ph);
    Row r{th, ph};
    bool all = true;
    for (std::size_t k = 0; k < 3; ++k) {
      const double v = nonlinear2_bitflip_max(reduction(w, k)).value;
      all = all && v > tol::kWitness;
      r.emplace_back(v);
    }
    r.emplace_back(all);
    return r;
  });
  return t;
}

Table chsh_planes(const SweepConfig& cfg) {
  Table t{{"plane", "theta", "phi", "value_A1", "value_A2", "value_A3", "flag"}, {}};
  for (Plane plane : {Plane::XY, Plane::XZ}) {
    auto rows = grid_rows(cfg, [&](double th, double ph) {
      const PureState w = w_state_angles(th, ph);
      Row r{std::string(to_string(plane)), th, ph};
      bool all = true;
      for (std::size_t k = 0; k < 3; ++k) {
        const double v = chsh_plane_max(reduction(w, k), plane, cfg.chsh_grid).value;
        all = all && v > 2.0 + tol::kWitness;
        r.emplace_back(v);
      }
      r.emplace_back(all);
      return r;
    });
    t.rows.insert(t.rows.end(), rows.begin(), rows.end());
  }
  return t;
}

// Smallest visibility v at which the framed nonlinear witness fires on
// v rho + (1 - v) I/4; nan when it does not fire even at v = 1.
double witness_visibility(const DensityMatrix& rho2) {
  const CMatrix noise = CMatrix::Identity(4, 4) / 4.0;
  auto fires = [&](double v) {
    return nonlinear2_bitflip_max(DensityMatrix::unchecked(v * rho2.mat() + (1.0 - v) * noise, rho2.dims())).value >
           tol::kWitness;
  };
  if (!fires(1.0)) return kNan;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (fires(mid) ? hi : lo) = mid;
  }
  return hi;
}

Table svetlichny_visibility(const SweepConfig& cfg) {
  Table t{{"theta", "phi", "v_svetlichny", "v_A1", "v_A2", "v_A3"}, {}};
  t.rows = grid_rows(cfg, [&](double th, double ph) {
    const double a = std::sin(th) * std::cos(ph), b = std::sin(th) * std::sin(ph), g = std::cos(th);
    Row r{th, ph, svetlichny_w_visibility(a, b, g, cfg.resolution).visibility};
    const PureState w = w_state_angles(th, ph);
    for (std::size_t k = 0; k < 3; ++k) r.emplace_back(witness_visibility(reduction(w, k)));
    return r;
  });
  return t;
}

Table ghz_family(const SweepConfig& cfg) {
  Table t{{"n", "theta", "witness_density", "witness_literal", "reductions_separable", "particle_lose_separable"}, {}};
  std::vector<Row> rows(cfg.theta_steps * cfg.phi_steps);
  const auto total = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    const std::size_t n = 3 + u / cfg.theta_steps;
    const double th = axis(u % cfg.theta_steps, cfg.theta_steps);
    const PureState psi = ghz_theta(n, th);
    const DensityMatrix rho = psi.projector();
    bool separable = true;
    for (std::size_t k = 0; k < n; ++k)
      separable = separable && fully_separable_proxy(partial_trace(psi, {k})).status == Status::Separable;
    WitnessOptions opts;
    opts.optimize_frames = false;
    const PlsResult pls = particle_lose_separable(psi, Ownership::trivial(psi.dims()), opts);
    rows[u] = Row{n,
                  th,
                  multipartite_witness_lhs(rho, WitnessForm::Density),
                  multipartite_witness_lhs(rho, WitnessForm::PauliLiteral),
                  separable,
                  pls.status == Status::Separable};
  }
  t.rows = std::move(rows);
  return t;
}

Table dicke_family(const SweepConfig& cfg) {
  Table t{{"n", "d", "k", "loss_sets", "npt_every_cut", "worst_min_eig"}, {}};
  struct Case {
    std::size_t n, d, k;
  };
  std::vector<Case> cases;
  for (std::size_t n = 3; n <= 4; ++n)
    for (std::size_t d = 2; d <= 3; ++d)
      for (std::size_t k = 1; k <= std::min<std::size_t>(3, n * (d - 1) - 1); ++k) cases.push_back({n, d, k});
  std::vector<Row> rows(cases.size());
  const auto total = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const Case& c = cases[static_cast<std::size_t>(idx)];
    const PureState psi = dicke({c.n, c.d, c.k, std::nullopt});
    const Ownership own = Ownership::trivial(psi.dims());
    std::size_t count = 0;
    bool every = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m + 2 <= c.n; ++m) {
      for (const IndexSet& lost : admissible_loss_sets(own, LossMode::Party, m)) {
        ++count;
        const DensityMatrix red = partial_trace(psi, lost);
        for (const Bipartition& cut : all_bipartitions(red.num_subsystems())) {
          const PptResult p = ppt_verdict(red, cut);
          every = every && p.npt;
          worst = std::max(worst, p.min_eig);
        }
      }
    }
    rows[static_cast<std::size_t>(idx)] = Row{c.n, c.d, c.k, count, every, worst};
  }
  t.rows = std::move(rows);
  return t;
}

}  // namespace

void SweepConfig::validate() const {
  if (family != "w_nonlinear" && family != "chsh_planes" && family != "svetlichny_visibility" &&
      family != "ghz_family" && family != "dicke_family")
    throw InvalidInput("unknown sweep family '" + family + "'", "family");
  if (theta_steps < 2 || phi_steps < 2) throw InvalidInput("grid needs at least 2 steps per axis", "grid");
  if (family == "ghz_family" && phi_steps > 4) throw InvalidInput("ghz_family covers at most 4 system sizes", "grid");
  if (resolution < 2) throw InvalidInput("resolution must be at least 2", "resolution");
  if (chsh_grid < 4) throw InvalidInput("CHSH grid must be at least 4", "chsh_grid");
}

std::string run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  Table t;
  if (cfg.family == "w_nonlinear") {
    t = w_nonlinear(cfg);
  } else if (cfg.family == "chsh_planes") {
    t = chsh_planes(cfg);
  } else if (cfg.family == "svetlichny_visibility") {
    t = svetlichny_visibility(cfg);
  } else if (cfg.family == "ghz_family") {
    t = ghz_family(cfg);
  } else {
    t = dicke_family(cfg);
  }
  return render(t, cfg.format);
}

}  // namespace lossent
