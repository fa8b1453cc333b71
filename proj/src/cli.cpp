#include "twopiece/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "twopiece/errors.hpp"
#include "twopiece/momentum.hpp"
#include "twopiece/oracle.hpp"
#include "twopiece/spectral.hpp"

namespace twopiece::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kVerdictRule =
    "partial integrals 2*int_0^P p^(2j) I(p) dp at each cutoff P; r = ratio of the last two increments scaled to "
    "one decade of P; Converged if r < 0.5 or the last increment is below the quadrature noise floor, Diverging if "
    "the last increment is not smaller than the previous one, Marginal otherwise";

struct UsageError : Error {
  using Error::Error;
};

std::string well_name(const WellSpec& w) { return std::string(to_string(w.kind)); }

ordered_json well_json(const WellSpec& w) { return {{"well", well_name(w)}, {"v0", w.v0}, {"a", w.a}}; }

std::vector<EigenState> spectrum(const RunConfig& c, int count) {
  auto states = solve_spectrum(c.well, count);
  if (states.empty()) throw UsageError("the well has no bound states");
  return states;
}

const EigenState& pick(const std::vector<EigenState>& states, int index) {
  if (index >= static_cast<int>(states.size())) {
    throw UsageError(fmt::format("state {} requested but only {} bound state(s) found", index, states.size()));
  }
  return states[index];
}

// Writes to --out when given, otherwise to the supplied stream.
void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + c.out);
  f << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_solve(const RunConfig& c, std::ostream& out) {
  const auto states = spectrum(c, c.max_states);
  const EnergyWindow window = admissible_window(c.well, 40 * c.well.v0);
  ordered_json rows = ordered_json::array();
  std::string csv = "n,parity,E,C,E_oracle,abs_dE\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto ns = normalize(states[i]);
    const double e = ns.state.energy;
    double gap = std::numeric_limits<double>::infinity();
    if (i > 0) gap = std::min(gap, e - states[i - 1].energy);
    if (i + 1 < states.size()) gap = std::min(gap, states[i + 1].energy - e);
    if (!std::isfinite(gap)) gap = 0.2 * std::max(1.0, std::fabs(e));
    const oracle::Interval bracket{std::max(e - gap / 2, 0.5 * (window.lo + e)), std::min(e + gap / 2, 0.5 * (window.hi + e))};
    const auto grid = oracle::numerov_solve(c.well, ns.state.parity, bracket, 1e-3 * c.well.a, oracle::default_length(c.well, e));
    const double de = std::fabs(grid.energy - e);
    const std::string parity(to_string(ns.state.parity));
    csv += fmt::format("{},{},{:.10f},{:.10e},{:.10f},{:.3e}\n", i, parity, e, ns.state.norm_const, grid.energy, de);
    rows.push_back({{"n", i}, {"parity", parity}, {"E", e}, {"C", ns.state.norm_const}, {"E_oracle", grid.energy}, {"abs_dE", de}});
  }
  if (c.format == "json") {
    ordered_json j = well_json(c.well);
    j["states"] = rows;
    emit(c, dump(j), out);
  } else {
    emit(c, csv, out);
  }
  return ok;
}

ordered_json fit_json(const TailFit& f) {
  ordered_json windows = ordered_json::array();
  for (const auto& w : f.windows) {
    windows.push_back({{"p_lo", w.lo}, {"p_hi", w.hi}, {"exponent", w.exponent}, {"r_squared", w.r_squared}, {"samples", w.samples}});
  }
  return {{"exponent", f.exponent}, {"stability", f.stability}, {"r_squared", f.r_squared}, {"windows", windows}};
}

ordered_json report_json(const MomentReport& r) {
  ordered_json cut = ordered_json::array();
  for (const auto& p : r.cutoff_values) cut.push_back({p.cutoff, p.value});
  ordered_json j{{"j", r.j}, {"verdict", std::string(to_string(r.verdict))}};
  j["value"] = r.value ? ordered_json(*r.value) : ordered_json(nullptr);
  j["decade_ratio"] = r.decade_ratio;
  j["at_noise_floor"] = r.at_noise_floor;
  j["position_value"] = r.position_value ? ordered_json(*r.position_value) : ordered_json(nullptr);
  j["cutoffs"] = cut;
  return j;
}

ordered_json state_json(const NormalizedState& ns) {
  return {{"n", ns.state.index}, {"parity", std::string(to_string(ns.state.parity))}, {"E", ns.state.energy}, {"C", ns.state.norm_const}};
}

TailFit fit_tail(const MomentumTransform& t, const RunConfig& c) {
  const auto windows = default_tail_windows(c.well);
  const double top = std::max_element(windows.begin(), windows.end(), [](auto& x, auto& y) { return x.hi < y.hi; })->hi;
  const bool reuse = c.p_max >= top;
  return tail_fit(distribution(t, reuse ? c.p_max : top, reuse ? c.points : 200, 0, c.threads), windows);
}

int cmd_figure(const RunConfig& c, std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string());

  const auto states = spectrum(c, c.max_states);
  const std::string name = well_name(c.well);
  ordered_json sidecar = well_json(c.well);
  sidecar["verdict_rule"] = kVerdictRule;
  sidecar["states"] = ordered_json::array();
  for (const auto& s : states) {
    const auto ns = normalize(s);
    const MomentumTransform t(ns);
    const auto d = distribution(t, c.p_max, c.points, 0, c.threads);
    std::string csv = "p,I,p2I,p4I,p6I\n";
    for (std::size_t i = 0; i < d.p.size(); ++i) {
      const double p2 = d.p[i] * d.p[i], v = d.density[i];
      csv += fmt::format("{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}\n", d.p[i], v, p2 * v, p2 * p2 * v, p2 * p2 * p2 * v);
    }
    const fs::path file = dir / fmt::format("{}_n{}.csv", name, s.index);
    std::ofstream f(file, std::ios::binary);
    if (!f) throw UsageError("cannot write " + file.string());
    f << csv;

    ordered_json entry = state_json(ns);
    entry["csv"] = file.filename().string();
    entry["tail_fit"] = fit_json(fit_tail(t, c));
    ordered_json reports = ordered_json::array();
    for (const auto& r : moments(t, c.cutoffs, c.threads)) reports.push_back(report_json(r));
    entry["moments"] = reports;
    sidecar["states"].push_back(entry);
    out << file.string() << "\n";
  }
  const fs::path json_file = dir / fmt::format("{}_figure.json", name);
  std::ofstream f(json_file, std::ios::binary);
  if (!f) throw UsageError("cannot write " + json_file.string());
  f << dump(sidecar);
  out << json_file.string() << "\n";
  return ok;
}

int cmd_moments(const RunConfig& c, std::ostream& out) {
  const auto states = spectrum(c, c.state + 1);
  const auto ns = normalize(pick(states, c.state));
  const MomentumTransform t(ns);
  std::vector<MomentReport> reports;
  if (c.j == 0) {
    for (const auto& r : moments(t, c.cutoffs, c.threads)) reports.push_back(r);
  } else {
    reports.push_back(moment(t, c.j, c.cutoffs, c.threads));
  }
  if (c.format == "csv") {
    std::string csv = "j,verdict,value,decade_ratio,position_value\n";
    for (const auto& r : reports) {
      csv += fmt::format("{},{},{},{:.6e},{}\n", r.j, to_string(r.verdict), r.value ? fmt::format("{:.10e}", *r.value) : "",
                         r.decade_ratio, r.position_value ? fmt::format("{:.10e}", *r.position_value) : "");
    }
    emit(c, csv, out);
    return ok;
  }
  ordered_json j = well_json(c.well);
  j["state"] = state_json(ns);
  j["e_minus_mean_v"] = ns.state.energy - expectation_potential(ns);
  j["verdict_rule"] = kVerdictRule;
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  emit(c, dump(j), out);
  return ok;
}

int cmd_tails(const RunConfig& c, std::ostream& out) {
  const auto states = spectrum(c, c.state + 1);
  const auto ns = normalize(pick(states, c.state));
  const MomentumTransform t(ns);
  const auto fit = fit_tail(t, c);
  if (c.format == "csv") {
    std::string csv = "p_lo,p_hi,exponent,r_squared,samples\n";
    for (const auto& w : fit.windows) csv += fmt::format("{:.6g},{:.6g},{:.8f},{:.10f},{}\n", w.lo, w.hi, w.exponent, w.r_squared, w.samples);
    emit(c, csv, out);
    return ok;
  }
  ordered_json j = well_json(c.well);
  j["state"] = state_json(ns);
  j["tail_fit"] = fit_json(fit);
  emit(c, dump(j), out);
  return ok;
}

}  // namespace

double default_v0(WellKind kind) { return kind == WellKind::conv_exp ? 15.0 : 5.0; }

bool parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out) {
  CLI::App app{"Bound states and momentum distributions of two-piece symmetric wells", "twopiece"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  std::string well = "triangular";
  double v0 = 0, a = 1;
  app.add_option("--well", well, "triangular | convexp | divexp")->check(CLI::IsMember({"triangular", "convexp", "divexp"}));
  auto* v0_opt = app.add_option("--v0", v0, "well depth or slope scale (default: 5, 15, 5 by well)");
  app.add_option("--a", a, "length scale");
  app.add_option("--max-states", c.max_states, "number of states for solve and figure");
  app.add_option("--state", c.state, "state index for moments and tails");
  app.add_option("--j", c.j, "moment order 1, 2 or 3 (moments; default all)");
  app.add_option("--pmax", c.p_max, "largest momentum of the distribution grid (units of 1/a)");
  app.add_option("--points", c.points, "number of log-spaced momentum samples");
  app.add_option("--cutoffs", c.cutoffs, "momentum cutoffs of the moment ladder (units of 1/a)")->delimiter(',');
  app.add_option("--out", c.out, "output file (figure: output directory)");
  app.add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", c.threads, "worker threads for momentum sampling");

  app.add_subcommand("solve", "spectrum with normalization constants and Numerov cross-check");
  app.add_subcommand("figure", "distribution CSVs p, I, p^2 I, p^4 I, p^6 I plus JSON sidecar");
  auto* moments_cmd = app.add_subcommand("moments", "momentum moment cutoff study with verdicts (JSON)");
  auto* tails_cmd = app.add_subcommand("tails", "power-law tail fit (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  c.command = app.get_subcommands().front()->get_name();
  const WellKind kind = parse_well_kind(well);
  if (v0_opt->count() == 0) v0 = default_v0(kind);
  c.well = WellSpec::make(kind, v0, a);
  const bool format_given = app.get_option("--format")->count() > 0;
  if (!format_given && (moments_cmd->parsed() || tails_cmd->parsed())) c.format = "json";

  if (c.max_states < 1) throw UsageError("--max-states must be at least 1");
  if (c.state < 0) throw UsageError("--state must be nonnegative");
  if (c.j < 0 || c.j > 3) throw UsageError("--j must be 1, 2 or 3");
  if (!(c.p_max > 0) || !std::isfinite(c.p_max)) throw UsageError("--pmax must be positive");
  if (c.points < 2) throw UsageError("--points must be at least 2");
  if (c.threads < 1) throw UsageError("--threads must be at least 1");
  if (c.cutoffs.empty()) {
    c.cutoffs = default_cutoffs(c.well);
  } else {
    if (c.cutoffs.size() < 5) throw UsageError("--cutoffs needs at least 5 values");
    for (std::size_t i = 0; i < c.cutoffs.size(); ++i) {
      if (!(c.cutoffs[i] > 0) || (i > 0 && !(c.cutoffs[i] > c.cutoffs[i - 1]))) {
        throw UsageError("--cutoffs must be positive and increasing");
      }
    }
    if (c.cutoffs.back() < 100 * c.cutoffs.front()) throw UsageError("--cutoffs must span at least two decades");
    for (auto& p : c.cutoffs) p /= c.well.a;
  }
  return true;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    if (!parse(argc, argv, c, out)) return ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }
  try {
    if (c.command == "solve") return cmd_solve(c, out);
    if (c.command == "figure") return cmd_figure(c, out);
    if (c.command == "moments") return cmd_moments(c, out);
    return cmd_tails(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  }
}

}  // namespace twopiece::cli
