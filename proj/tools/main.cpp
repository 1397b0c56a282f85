#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptosc/chain.hpp"
#include "ptosc/dynamics.hpp"
#include "ptosc/errors.hpp"
#include "ptosc/hamiltonian.hpp"
#include "ptosc/impurity.hpp"
#include "ptosc/io_util.hpp"
#include "ptosc/region.hpp"
#include "ptosc/spectral.hpp"
#include "ptosc/trio.hpp"

using nlohmann::json;
using namespace ptosc;

namespace {

// Options shared by every subcommand.  A --config file supplies values that
// explicit flags override; --dump-config writes the merged effective
// configuration, which reloads to the identical run.
struct Common {
  std::string config_path, dump_path, output, format = "csv";
  long long seed = 0;
  double imag_tol = kDefaultImagTol, refine_tol = 1e-8, search_tol = 1e-4;
  CLI::Option *o_output = nullptr, *o_format = nullptr, *o_seed = nullptr;
  CLI::Option *o_imag = nullptr, *o_refine = nullptr, *o_search = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "run configuration JSON");
  cmd->add_option("--dump-config", c.dump_path, "write the effective configuration here");
  c.o_output = cmd->add_option("--output,-o", c.output, "write results to this path");
  c.o_format = cmd->add_option("--format", c.format, "output format")
                   ->check(CLI::IsMember({"csv", "json"}))
                   ->capture_default_str();
  c.o_seed = cmd->add_option("--seed", c.seed, "seed recorded for randomized checks")
                 ->capture_default_str();
  c.o_imag = cmd->add_option("--imag-tol", c.imag_tol, "realness tolerance on Im lambda")
                 ->capture_default_str();
  c.o_refine = cmd->add_option("--refine-tol", c.refine_tol, "boundary bisection tolerance")
                   ->capture_default_str();
  c.o_search = cmd->add_option("--search-tol", c.search_tol, "gamma bisection tolerance")
                   ->capture_default_str();
}

// Overlays the config file (when given) onto the per-command defaults.
// Unknown keys anywhere in the file are rejected.
json merge_config(Common& c, const std::string& command, json params,
                  const std::set<std::string>& allowed) {
  if (c.config_path.empty()) return params;
  json rc;
  try {
    rc = json::parse(read_file(c.config_path));
  } catch (const json::exception& e) {
    throw InvalidArgument("config parse error: " + std::string(e.what()));
  }
  if (!rc.is_object()) throw InvalidArgument("config root must be a JSON object");
  static const std::set<std::string> top = {"command", "params",     "output",
                                            "format",  "seed",       "tolerances"};
  for (const auto& [k, v] : rc.items())
    if (!top.count(k)) throw InvalidArgument("unknown config key: " + k);
  try {
    if (rc.contains("command") && rc["command"].get<std::string>() != command)
      throw InvalidArgument("config is for command '" +
                            rc["command"].get<std::string>() + "', not '" + command +
                            "'");
    if (rc.contains("params")) {
      if (!rc["params"].is_object())
        throw InvalidArgument("config params must be an object");
      for (const auto& [k, v] : rc["params"].items()) {
        if (!allowed.count(k)) throw InvalidArgument("unknown parameter key: " + k);
        params[k] = v;
      }
    }
    if (rc.contains("output") && !c.o_output->count())
      c.output = rc["output"].get<std::string>();
    if (rc.contains("format") && !c.o_format->count()) {
      c.format = rc["format"].get<std::string>();
      if (c.format != "csv" && c.format != "json")
        throw InvalidArgument("format must be csv or json");
    }
    if (rc.contains("seed") && !c.o_seed->count())
      c.seed = rc["seed"].get<long long>();
    if (rc.contains("tolerances")) {
      static const std::set<std::string> tol = {"imag_tol", "refine_tol", "search_tol"};
      const json& t = rc["tolerances"];
      for (const auto& [k, v] : t.items())
        if (!tol.count(k)) throw InvalidArgument("unknown tolerance key: " + k);
      if (t.contains("imag_tol") && !c.o_imag->count()) c.imag_tol = t["imag_tol"];
      if (t.contains("refine_tol") && !c.o_refine->count())
        c.refine_tol = t["refine_tol"];
      if (t.contains("search_tol") && !c.o_search->count())
        c.search_tol = t["search_tol"];
    }
  } catch (const json::exception& e) {
    throw InvalidArgument("config value error: " + std::string(e.what()));
  }
  return params;
}

void maybe_dump(const Common& c, const std::string& command, const json& params) {
  if (c.dump_path.empty()) return;
  const json rc = {{"command", command},
                   {"params", params},
                   {"output", c.output},
                   {"format", c.format},
                   {"seed", c.seed},
                   {"tolerances",
                    {{"imag_tol", c.imag_tol},
                     {"refine_tol", c.refine_tol},
                     {"search_tol", c.search_tol}}}};
  atomic_write(c.dump_path, rc.dump(2) + "\n");
}

void require_key(const json& p, const char* key, const char* flag) {
  if (!p.contains(key)) throw InvalidArgument(std::string("missing ") + flag);
}

Eigen::VectorXd vec_of(const json& v) {
  std::vector<double> s;
  try {
    if (v.is_number())
      s.push_back(v.get<double>());
    else
      s = v.get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InvalidArgument("expected a number or an array of numbers");
  }
  return Eigen::Map<const Eigen::VectorXd>(s.data(),
                                           static_cast<Eigen::Index>(s.size()));
}

Eigen::VectorXd broadcast(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() == n) return v;
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v[0]);
  throw InvalidArgument(std::string(what) + " takes one value or one per pair");
}

Parity parity_of(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw InvalidArgument("parity must be even or odd");
}

const char* phase_name(Phase p) { return p == Phase::Unbroken ? "unbroken" : "broken"; }

ChainSpec chain_from_params(const json& P) {
  const int n = P["n"].get<int>();
  const Parity parity = parity_of(P["parity"].get<std::string>());
  return make_chain(n, parity, broadcast(vec_of(P["omega"]), n, "omega"),
                    broadcast(vec_of(P["gamma"]), n, "gamma"),
                    broadcast(vec_of(P["epsilon"]), n, "epsilon"));
}

json intervals_json(const std::vector<PhaseInterval>& ivs) {
  json arr = json::array();
  for (const auto& iv : ivs)
    arr.push_back({{"lo", iv.lo},
                   {"hi", iv.hi},
                   {"phase", phase_name(iv.phase)},
                   {"lo_refined", iv.lo_refined},
                   {"hi_refined", iv.hi_refined}});
  return arr;
}

std::string intervals_csv(const std::vector<PhaseInterval>& ivs, const char* param) {
  std::string out = std::string(param) + "_lo," + param + "_hi,phase\n";
  for (const auto& iv : ivs)
    out += g17(iv.lo) + "," + g17(iv.hi) + "," + phase_name(iv.phase) + "\n";
  return out;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  Common c;
  int n = 1;
  std::string parity = "even", method = "auto";
  std::vector<double> omega, gamma, epsilon;
  CLI::Option *o_n, *o_parity, *o_method, *o_om, *o_ga, *o_ep;
};

void run_spectrum(SpectrumOpts& s) {
  json P = {{"n", 1}, {"parity", "even"}, {"method", "auto"}};
  static const std::set<std::string> allowed = {"n",     "parity",  "method",
                                                "omega", "gamma",   "epsilon"};
  P = merge_config(s.c, "spectrum", P, allowed);
  if (s.o_n->count()) P["n"] = s.n;
  if (s.o_parity->count()) P["parity"] = s.parity;
  if (s.o_method->count()) P["method"] = s.method;
  if (s.o_om->count()) P["omega"] = s.omega;
  if (s.o_ga->count()) P["gamma"] = s.gamma;
  if (s.o_ep->count()) P["epsilon"] = s.epsilon;
  maybe_dump(s.c, "spectrum", P);
  require_key(P, "omega", "--omega");
  require_key(P, "gamma", "--gamma");
  require_key(P, "epsilon", "--epsilon");

  const ChainSpec spec = chain_from_params(P);
  const bool uniform_even = spec.uniform && spec.parity == Parity::Even;
  const std::string method = P["method"].get<std::string>();
  Spectrum spect;
  if (method == "analytic" || (method == "auto" && uniform_even)) {
    if (!uniform_even)
      throw InvalidArgument("the analytic method needs a uniform even chain");
    spect = analytic_spectrum(spec.n_pairs, spec.omegas[0], spec.gammas[0],
                              spec.epsilons[0], s.c.imag_tol);
  } else if (method == "qep" || method == "auto") {
    spect = qep_spectrum(spec, s.c.imag_tol);
  } else {
    throw InvalidArgument("method must be auto, analytic or qep");
  }

  std::printf("frequencies: %d\n", static_cast<int>(spect.lambdas.size()));
  std::printf("phase: %s\n", phase_name(spect.phase));
  std::printf("max |Im lambda|: %s\n", g17(spect.max_abs_imag).c_str());
  if (uniform_even) {
    const auto w = unbroken_window(spec.n_pairs, spec.omegas[0], spec.gammas[0]);
    if (w)
      std::printf("unbroken window: (%s, %s)\n", g17(w->first).c_str(),
                  g17(w->second).c_str());
    else
      std::printf("unbroken window: empty\n");
  }
  if (!s.c.output.empty())
    emit_file(s.c.format == "json" ? spectrum_json(spect) : spectrum_csv(spect),
              s.c.output);
}

// -------------------------------------------------------------------- scan

struct ScanOpts {
  Common c;
  int n = 1, grid_points = 400;
  std::string parity = "even", profile = "uniform";
  std::vector<double> omega, gammas;
  double gamma = 0.0, eps_lo = 0.0, eps_hi = 0.0;
  CLI::Option *o_n, *o_parity, *o_profile, *o_om, *o_ga, *o_gs, *o_lo, *o_hi, *o_gp;
};

void run_scan(ScanOpts& s) {
  json P = {{"n", 1}, {"parity", "even"}, {"profile", "uniform"},
            {"eps_lo", 0.0}, {"grid_points", 400}};
  static const std::set<std::string> allowed = {
      "n", "parity", "profile", "omega", "gamma", "gammas",
      "eps_lo", "eps_hi", "grid_points"};
  P = merge_config(s.c, "scan", P, allowed);
  if (s.o_n->count()) P["n"] = s.n;
  if (s.o_parity->count()) P["parity"] = s.parity;
  if (s.o_profile->count()) P["profile"] = s.profile;
  if (s.o_om->count()) P["omega"] = s.omega;
  if (s.o_ga->count()) P["gamma"] = s.gamma;
  if (s.o_gs->count()) P["gammas"] = s.gammas;
  if (s.o_lo->count()) P["eps_lo"] = s.eps_lo;
  if (s.o_hi->count()) P["eps_hi"] = s.eps_hi;
  if (s.o_gp->count()) P["grid_points"] = s.grid_points;
  maybe_dump(s.c, "scan", P);
  require_key(P, "omega", "--omega");
  require_key(P, "eps_hi", "--eps-hi");

  const int n = P["n"].get<int>();
  const Parity parity = parity_of(P["parity"].get<std::string>());
  const ChainSpec tmpl =
      make_chain(n, parity, broadcast(vec_of(P["omega"]), n, "omega"),
                 Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n));

  GammaProfile profile;
  profile.kind = profile_kind_from_string(P["profile"].get<std::string>());
  if (profile.kind == GammaProfile::Kind::Custom) {
    require_key(P, "gammas", "--gammas");
    const Eigen::VectorXd gs = vec_of(P["gammas"]);
    profile = GammaProfile::custom_profile(
        std::vector<double>(gs.data(), gs.data() + gs.size()));
  } else {
    require_key(P, "gamma", "--gamma");
    profile.amplitude = P["gamma"].get<double>();
  }

  const RegionReport report =
      scan_epsilon(tmpl, profile, P["eps_lo"].get<double>(), P["eps_hi"].get<double>(),
                   P["grid_points"].get<int>(), s.c.refine_tol);
  std::printf("intervals: %d\n", static_cast<int>(report.intervals.size()));
  for (const auto& iv : report.intervals)
    std::printf("interval: %s %s %s\n", g17(iv.lo).c_str(), g17(iv.hi).c_str(),
                phase_name(iv.phase));
  if (!s.c.output.empty()) {
    if (s.c.format == "json") {
      json j = {{"param", report.param}, {"refine_tol", report.refine_tol}};
      j["grid"] = report.grid;
      j["max_im_lambda"] = report.max_im;
      json ph = json::array();
      for (Phase p : report.phases) ph.push_back(phase_name(p));
      j["phase"] = ph;
      j["intervals"] = intervals_json(report.intervals);
      emit_file(j.dump(2) + "\n", s.c.output);
    } else {
      emit_phase_table(report, s.c.output);
    }
  }
}

// -------------------------------------------------------------- gamma-crit

struct GammaCritOpts {
  Common c;
  int n = 0, n_max = 0, n_step = 1;
  std::string profile = "uniform";
  double omega = 1.0, upper = -1.0;
  CLI::Option *o_n, *o_nmax, *o_nstep, *o_profile, *o_om, *o_up;
};

void run_gamma_crit(GammaCritOpts& s) {
  json P = {{"profile", "uniform"}, {"omega", 1.0}, {"n_step", 1}, {"upper", -1.0}};
  static const std::set<std::string> allowed = {"profile", "omega", "n",
                                                "n_max",   "n_step", "upper"};
  P = merge_config(s.c, "gamma-crit", P, allowed);
  if (s.o_profile->count()) P["profile"] = s.profile;
  if (s.o_om->count()) P["omega"] = s.omega;
  if (s.o_n->count()) P["n"] = s.n;
  if (s.o_nmax->count()) P["n_max"] = s.n_max;
  if (s.o_nstep->count()) P["n_step"] = s.n_step;
  if (s.o_up->count()) P["upper"] = s.upper;
  maybe_dump(s.c, "gamma-crit", P);

  const auto kind = profile_kind_from_string(P["profile"].get<std::string>());
  const double omega = P["omega"].get<double>();
  std::vector<int> rows;
  if (P.contains("n")) {
    rows.push_back(P["n"].get<int>());
  } else {
    require_key(P, "n_max", "--n or --n-max");
    const int step = P["n_step"].get<int>();
    if (step < 1) throw InvalidArgument("--n-step must be positive");
    for (int N = 1; N <= P["n_max"].get<int>(); N += step) rows.push_back(N);
  }

  std::string table = "n,gamma_crit\n";
  for (int N : rows) {
    const double g = gamma_crit(N, omega, kind, s.c.search_tol, P["upper"].get<double>());
    table += std::to_string(N) + "," + g17(g) + "\n";
  }
  std::fputs(table.c_str(), stdout);
  if (!s.c.output.empty()) {
    if (s.c.format == "json") {
      json j = json::array();
      std::size_t pos = table.find('\n') + 1;
      for (int N : rows) {
        const std::size_t comma = table.find(',', pos);
        const std::size_t end = table.find('\n', pos);
        j.push_back({{"n", N},
                     {"gamma_crit",
                      std::stod(table.substr(comma + 1, end - comma - 1))}});
        pos = end + 1;
      }
      emit_file(j.dump(2) + "\n", s.c.output);
    } else {
      emit_file(table, s.c.output);
    }
  }
}

// ------------------------------------------------------------------ planar

struct PlanarOpts {
  Common c;
  std::string mode = "intervals";
  double omega = 0.0, gamma = 0.0, eps1 = 0.0;
  double eps2_min = 0.0, eps2_max = 0.0, eps1_min = 0.0, eps1_max = 0.0;
  int points = 1400, resolution = 64, trace_points = 256;
  CLI::Option *o_mode, *o_om, *o_ga, *o_e1, *o_e2lo, *o_e2hi, *o_e1lo, *o_e1hi;
  CLI::Option *o_pts, *o_res, *o_tpts;
};

void run_planar(PlanarOpts& s) {
  json P = {{"mode", "intervals"}, {"eps2_min", 0.0}, {"points", 1400},
            {"resolution", 64},    {"trace_points", 256}};
  static const std::set<std::string> allowed = {
      "mode",     "omega",    "gamma",      "eps1",       "eps2_min", "eps2_max",
      "eps1_min", "eps1_max", "points",     "resolution", "trace_points"};
  P = merge_config(s.c, "planar", P, allowed);
  if (s.o_mode->count()) P["mode"] = s.mode;
  if (s.o_om->count()) P["omega"] = s.omega;
  if (s.o_ga->count()) P["gamma"] = s.gamma;
  if (s.o_e1->count()) P["eps1"] = s.eps1;
  if (s.o_e2lo->count()) P["eps2_min"] = s.eps2_min;
  if (s.o_e2hi->count()) P["eps2_max"] = s.eps2_max;
  if (s.o_e1lo->count()) P["eps1_min"] = s.eps1_min;
  if (s.o_e1hi->count()) P["eps1_max"] = s.eps1_max;
  if (s.o_pts->count()) P["points"] = s.points;
  if (s.o_res->count()) P["resolution"] = s.resolution;
  if (s.o_tpts->count()) P["trace_points"] = s.trace_points;
  maybe_dump(s.c, "planar", P);
  require_key(P, "omega", "--omega");
  require_key(P, "gamma", "--gamma");
  require_key(P, "eps2_max", "--eps2-max");

  const std::string mode = P["mode"].get<std::string>();
  const double omega = P["omega"].get<double>(), gamma = P["gamma"].get<double>();
  const double e2lo = P["eps2_min"].get<double>(), e2hi = P["eps2_max"].get<double>();

  if (mode == "intervals") {
    require_key(P, "eps1", "--eps1");
    TrioParams base{omega, gamma, P["eps1"].get<double>(), 0.0};
    const auto ivs =
        trio_intervals(base, e2lo, e2hi, P["points"].get<int>(), s.c.refine_tol);
    std::printf("regions: %d\n", static_cast<int>(ivs.size()));
    for (const auto& iv : ivs)
      std::printf("region: %s %s %s\n", g17(iv.lo).c_str(), g17(iv.hi).c_str(),
                  phase_name(iv.phase));
    if (!s.c.output.empty()) {
      if (s.c.format == "json")
        emit_file(intervals_json(ivs).dump(2) + "\n", s.c.output);
      else
        emit_file(intervals_csv(ivs, "eps2"), s.c.output);
    }
  } else if (mode == "diagram") {
    require_key(P, "eps1_max", "--eps1-max");
    const auto d = trio_phase_diagram(omega, gamma, P["eps1_min"].get<double>(),
                                      P["eps1_max"].get<double>(), e2lo, e2hi,
                                      P["resolution"].get<int>());
    std::printf("unbroken cells: %d of %d\n", d.unbroken_count,
                static_cast<int>(d.unbroken.size()));
    if (!s.c.output.empty())
      emit_file(s.c.format == "json" ? phase_diagram_json(d) : phase_diagram_csv(d),
                s.c.output);
  } else if (mode == "trace") {
    require_key(P, "eps1", "--eps1");
    const auto t = trio_im_lambda_trace(omega, gamma, P["eps1"].get<double>(), e2lo,
                                        e2hi, P["trace_points"].get<int>());
    int zero_rows = 0;
    for (const auto& row : t.im)
      if (row[5] == 0.0 && row[0] == 0.0) ++zero_rows;
    std::printf("trace points: %d\n", static_cast<int>(t.eps2.size()));
    std::printf("all-real points: %d\n", zero_rows);
    if (!s.c.output.empty()) {
      if (s.c.format == "json") {
        json j = {{"eps2", t.eps2}};
        json rows = json::array();
        for (const auto& row : t.im) rows.push_back(row);
        j["im_lambda"] = rows;
        emit_file(j.dump(2) + "\n", s.c.output);
      } else {
        emit_file(im_trace_csv(t), s.c.output);
      }
    }
  } else {
    throw InvalidArgument("mode must be intervals, diagram or trace");
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  Common c;
  std::string system = "chain", parity = "even", rep = "sum";
  int n = 1, coord = 0;
  std::vector<double> omega, gamma, epsilon, x0, p0;
  double eps1 = 0.0, eps2 = 0.0, t_end = 100.0, dt = 1e-3;
  bool extract = true;
  CLI::Option *o_sys, *o_n, *o_parity, *o_rep, *o_om, *o_ga, *o_ep, *o_e1, *o_e2;
  CLI::Option *o_x0, *o_p0, *o_tend, *o_dt, *o_coord, *o_extract;
};

void run_simulate(SimulateOpts& s) {
  json P = {{"system", "chain"}, {"n", 1},          {"parity", "even"},
            {"rep", "sum"},      {"t_end", 100.0},  {"dt", 1e-3},
            {"coord", 0},        {"extract", true}};
  static const std::set<std::string> allowed = {
      "system", "n",  "parity", "rep",   "omega", "gamma", "epsilon", "eps1",
      "eps2",   "x0", "p0",     "t_end", "dt",    "coord", "extract"};
  P = merge_config(s.c, "simulate", P, allowed);
  if (s.o_sys->count()) P["system"] = s.system;
  if (s.o_n->count()) P["n"] = s.n;
  if (s.o_parity->count()) P["parity"] = s.parity;
  if (s.o_rep->count()) P["rep"] = s.rep;
  if (s.o_om->count()) P["omega"] = s.omega;
  if (s.o_ga->count()) P["gamma"] = s.gamma;
  if (s.o_ep->count()) P["epsilon"] = s.epsilon;
  if (s.o_e1->count()) P["eps1"] = s.eps1;
  if (s.o_e2->count()) P["eps2"] = s.eps2;
  if (s.o_x0->count()) P["x0"] = s.x0;
  if (s.o_p0->count()) P["p0"] = s.p0;
  if (s.o_tend->count()) P["t_end"] = s.t_end;
  if (s.o_dt->count()) P["dt"] = s.dt;
  if (s.o_coord->count()) P["coord"] = s.coord;
  if (s.o_extract->count()) P["extract"] = s.extract;
  maybe_dump(s.c, "simulate", P);

  const std::string system = P["system"].get<std::string>();
  const double t_end = P["t_end"].get<double>(), dt = P["dt"].get<double>();
  Trajectory traj;
  int dof = 0;
  if (system == "chain") {
    require_key(P, "omega", "--omega");
    require_key(P, "gamma", "--gamma");
    require_key(P, "epsilon", "--epsilon");
    const ChainSpec spec = chain_from_params(P);
    dof = spec.size();
    const std::string rep_name = P["rep"].get<std::string>();
    HamiltonianRep rep = HamiltonianRep::sum();
    if (rep_name == "product")
      rep = HamiltonianRep::product();
    else if (rep_name != "sum")
      throw InvalidArgument("rep must be sum or product");
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dof), p0 = Eigen::VectorXd::Zero(dof);
    x0[0] = 1.0;
    if (P.contains("x0")) x0 = vec_of(P["x0"]);
    if (P.contains("p0")) p0 = vec_of(P["p0"]);
    if (x0.size() != dof || p0.size() != dof)
      throw InvalidArgument("x0 and p0 need one value per oscillator");
    traj = integrate(spec, rep, make_state(x0, p0), t_end, dt);
  } else if (system == "trio") {
    require_key(P, "omega", "--omega");
    require_key(P, "gamma", "--gamma");
    const Eigen::VectorXd om = vec_of(P["omega"]);
    if (om.size() != 1) throw InvalidArgument("the trio takes a single omega");
    TrioParams trio{om[0], P["gamma"].get<double>(),
                    P.value("eps1", 0.0), P.value("eps2", 0.0)};
    dof = 3;
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3), p0 = Eigen::VectorXd::Zero(3);
    x0[0] = 1.0;
    if (P.contains("x0")) x0 = vec_of(P["x0"]);
    if (P.contains("p0")) p0 = vec_of(P["p0"]);
    if (x0.size() != 3 || p0.size() != 3)
      throw InvalidArgument("the trio takes three x0 and three p0 values");
    traj = integrate(trio, make_state(x0, p0), t_end, dt);
  } else {
    throw InvalidArgument("system must be chain or trio");
  }

  const DriftReport drift = conservation_report(traj);
  std::printf("samples: %d\n", traj.samples());
  std::printf("hamiltonian drift: %s\n", g17(drift.hamiltonian_drift).c_str());
  if (traj.has_energy)
    std::printf("energy drift: %s\n", g17(drift.energy_drift).c_str());
  if (P["extract"].get<bool>()) {
    const int coord = P["coord"].get<int>();
    if (coord < 0 || coord >= dof)
      throw InvalidArgument("coord must index an oscillator");
    const FrequencyReport freq = frequency_extract(traj, coord);
    if (freq.growth) {
      std::printf("growth: yes\n");
    } else {
      std::string line = "peaks:";
      for (double p : freq.peaks) line += " " + g17(p);
      std::printf("%s\n", line.c_str());
      std::printf("bin width: %s\n", g17(freq.bin_width).c_str());
    }
  }
  if (!s.c.output.empty()) {
    if (s.c.format == "json") {
      json j = {{"dt", traj.dt}, {"t", traj.t}};
      const int n = traj.dof();
      json xs = json::array(), ps = json::array();
      for (int i = 0; i < traj.samples(); ++i) {
        const auto row = traj.states.row(i);
        xs.push_back(std::vector<double>(row.data(), row.data() + n));
        ps.push_back(std::vector<double>(row.data() + n, row.data() + 2 * n));
      }
      j["x"] = xs;
      j["p"] = ps;
      if (traj.has_energy) j["energy"] = traj.energy;
      j["hamiltonian"] = traj.hamiltonian;
      emit_file(j.dump(2) + "\n", s.c.output);
    } else {
      emit_trajectory_csv(traj, s.c.output);
    }
  }
}

// ---------------------------------------------------------------- impurity

struct ImpurityOpts {
  Common c;
  double cspeed = 1.0, omega = 1.0, epsilon = 0.0, gamma = 0.0, Omega = 0.0;
  double half_width = -1.0;
  double rho = 0.0, stiffness = 0.0, Gamma_cap = 0.0;
  double mu1 = 0.0, nu1 = 0.0, mu2 = 0.0, nu2 = 0.0;
  int points = 4001;
  CLI::Option *o_c, *o_om, *o_ep, *o_ga, *o_Om, *o_hw, *o_pts;
  CLI::Option *o_rho, *o_k, *o_G, *o_mu1, *o_nu1, *o_mu2, *o_nu2;
};

void run_impurity(ImpurityOpts& s) {
  json P = {{"c", 1.0}, {"omega", 1.0}, {"points", 4001}, {"half_width", -1.0}};
  static const std::set<std::string> allowed = {
      "c",   "omega", "epsilon", "gamma", "Omega", "points", "half_width",
      "rho", "k",     "Gamma",   "mu1",   "nu1",   "mu2",    "nu2"};
  P = merge_config(s.c, "impurity", P, allowed);
  if (s.o_c->count()) P["c"] = s.cspeed;
  if (s.o_om->count()) P["omega"] = s.omega;
  if (s.o_ep->count()) P["epsilon"] = s.epsilon;
  if (s.o_ga->count()) P["gamma"] = s.gamma;
  if (s.o_Om->count()) P["Omega"] = s.Omega;
  if (s.o_hw->count()) P["half_width"] = s.half_width;
  if (s.o_pts->count()) P["points"] = s.points;
  if (s.o_rho->count()) P["rho"] = s.rho;
  if (s.o_k->count()) P["k"] = s.stiffness;
  if (s.o_G->count()) P["Gamma"] = s.Gamma_cap;
  if (s.o_mu1->count()) P["mu1"] = s.mu1;
  if (s.o_nu1->count()) P["nu1"] = s.nu1;
  if (s.o_mu2->count()) P["mu2"] = s.mu2;
  if (s.o_nu2->count()) P["nu2"] = s.nu2;
  maybe_dump(s.c, "impurity", P);

  ContinuumParams cp;
  const bool mapped = P.contains("rho") || P.contains("k") || P.contains("Gamma") ||
                      P.contains("mu1") || P.contains("nu1") || P.contains("mu2") ||
                      P.contains("nu2");
  if (mapped) {
    for (const char* key : {"rho", "k", "Gamma", "mu1", "nu1", "mu2", "nu2"})
      require_key(P, key, (std::string("--") + key).c_str());
    cp = continuum_parameters(P["rho"].get<double>(), P["k"].get<double>(),
                              P["Gamma"].get<double>(), P["mu1"].get<double>(),
                              P["nu1"].get<double>(), P["mu2"].get<double>(),
                              P["nu2"].get<double>());
  } else {
    require_key(P, "epsilon", "--epsilon");
    require_key(P, "gamma", "--gamma");
    cp.c = P["c"].get<double>();
    const double om = P["omega"].get<double>();
    if (!(om > 0.0)) throw InvalidArgument("omega must be positive");
    cp.omega2 = om * om;
    cp.epsilon = P["epsilon"].get<double>();
    cp.gamma = P["gamma"].get<double>();
  }
  std::printf("c: %s\n", g17(cp.c).c_str());
  std::printf("omega^2: %s\n", g17(cp.omega2).c_str());
  std::printf("epsilon: %s\n", g17(cp.epsilon).c_str());
  std::printf("gamma: %s\n", g17(cp.gamma).c_str());
  if (cp.epsilon > 0.0)
    std::printf("mode window Omega^2: (%s, %s)\n", g17(cp.omega2 - cp.epsilon).c_str(),
                g17(cp.omega2 + cp.epsilon).c_str());
  else
    std::printf("mode window Omega^2: empty\n");

  if (!P.contains("Omega")) return;
  const ImpurityMode mode = impurity_mode(cp, P["Omega"].get<double>(),
                                          P["half_width"].get<double>(),
                                          P["points"].get<int>());
  std::printf("a: %s\n", g17(mode.a).c_str());
  std::printf("b: %s\n", g17(mode.b).c_str());
  std::printf("bulk residuals: %s %s\n", g17(mode.bulk_residual_s).c_str(),
              g17(mode.bulk_residual_d).c_str());
  std::printf("jump residuals: %s %s\n", g17(mode.jump_residual_s).c_str(),
              g17(mode.jump_residual_d).c_str());
  if (!s.c.output.empty()) {
    if (s.c.format == "json") {
      json j = {{"Omega", mode.Omega},
                {"a", mode.a},
                {"b", mode.b},
                {"window_lo", mode.window_lo},
                {"window_hi", mode.window_hi},
                {"bulk_residual_s", mode.bulk_residual_s},
                {"bulk_residual_d", mode.bulk_residual_d},
                {"jump_residual_s", mode.jump_residual_s},
                {"jump_residual_d", mode.jump_residual_d}};
      std::vector<double> xs(mode.x.data(), mode.x.data() + mode.x.size());
      j["x"] = xs;
      json re_s = json::array(), im_s = json::array();
      json re_d = json::array(), im_d = json::array();
      for (Eigen::Index i = 0; i < mode.x.size(); ++i) {
        re_s.push_back(mode.s[i].real());
        im_s.push_back(mode.s[i].imag());
        re_d.push_back(mode.d[i].real());
        im_d.push_back(mode.d[i].imag());
      }
      j["re_s"] = re_s;
      j["im_s"] = im_s;
      j["re_d"] = re_d;
      j["im_d"] = im_d;
      emit_file(j.dump(2) + "\n", s.c.output);
    } else {
      std::string out = "x,re_s,im_s,re_d,im_d\n";
      for (Eigen::Index i = 0; i < mode.x.size(); ++i)
        out += g17(mode.x[i]) + "," + g17(mode.s[i].real()) + "," +
               g17(mode.s[i].imag()) + "," + g17(mode.d[i].real()) + "," +
               g17(mode.d[i].imag()) + "\n";
      emit_file(out, s.c.output);
    }
  }
}

// -------------------------------------------------------------------- poly

struct PolyOpts {
  Common c;
  int n = 0;
  double chi = 0.0, eps = 0.0;
  std::string form = "recursion";
  CLI::Option *o_n, *o_chi, *o_eps, *o_form;
};

void run_poly(PolyOpts& s) {
  json P = {{"form", "recursion"}};
  static const std::set<std::string> allowed = {"n", "chi", "eps", "form"};
  P = merge_config(s.c, "poly", P, allowed);
  if (s.o_n->count()) P["n"] = s.n;
  if (s.o_chi->count()) P["chi"] = s.chi;
  if (s.o_eps->count()) P["eps"] = s.eps;
  if (s.o_form->count()) P["form"] = s.form;
  maybe_dump(s.c, "poly", P);
  require_key(P, "n", "--n");

  const int n = P["n"].get<int>();
  const CharPoly pol = charpoly(n);
  std::printf("%s\n", pol.str().c_str());
  if (P.contains("chi") != P.contains("eps"))
    throw InvalidArgument("--chi and --eps go together");
  if (P.contains("chi")) {
    const double chi = P["chi"].get<double>(), eps = P["eps"].get<double>();
    const std::string form = P["form"].get<std::string>();
    double value = 0.0;
    if (form == "recursion")
      value = pol.evaluate(chi, eps);
    else if (form == "sum")
      value = charpoly_sum_form(n, chi, eps);
    else if (form == "product")
      value = charpoly_product_form(n, chi, eps);
    else
      throw InvalidArgument("form must be recursion, sum or product");
    std::printf("value: %s\n", g17(value).c_str());
  }
  if (!s.c.output.empty()) {
    if (s.c.format == "json") {
      json j = {{"n", pol.n_pairs}, {"coeffs", pol.coeffs}, {"str", pol.str()}};
      emit_file(j.dump(2) + "\n", s.c.output);
    } else {
      std::string out = "k,coeff\n";
      for (std::size_t k = 0; k < pol.coeffs.size(); ++k)
        out += std::to_string(k) + "," + std::to_string(pol.coeffs[k]) + "\n";
      emit_file(out, s.c.output);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric coupled-oscillator chain toolkit"};
  app.set_version_flag("--version", "1.0.0");
  app.require_subcommand(1);

  SpectrumOpts sp;
  {
    CLI::App* cmd = app.add_subcommand("spectrum", "frequencies of a chain");
    sp.o_n = cmd->add_option("--n", sp.n, "number of mirror pairs")->capture_default_str();
    sp.o_parity = cmd->add_option("--parity", sp.parity, "even or odd chain")
                      ->capture_default_str();
    sp.o_om = cmd->add_option("--omega", sp.omega, "natural frequency (one or per pair)");
    sp.o_ga = cmd->add_option("--gamma", sp.gamma, "loss/gain amplitude");
    sp.o_ep = cmd->add_option("--epsilon", sp.epsilon, "coupling");
    sp.o_method = cmd->add_option("--method", sp.method, "auto, analytic or qep")
                      ->capture_default_str();
    add_common(cmd, sp.c);
    cmd->callback([&sp] { run_spectrum(sp); });
  }

  ScanOpts sc;
  {
    CLI::App* cmd = app.add_subcommand("scan", "phase intervals along epsilon");
    sc.o_n = cmd->add_option("--n", sc.n, "number of mirror pairs")->capture_default_str();
    sc.o_parity = cmd->add_option("--parity", sc.parity)->capture_default_str();
    sc.o_om = cmd->add_option("--omega", sc.omega, "natural frequency");
    sc.o_profile = cmd->add_option("--profile", sc.profile,
                                   "uniform, inverse, inverse_square or custom")
                       ->capture_default_str();
    sc.o_ga = cmd->add_option("--gamma", sc.gamma, "profile amplitude");
    sc.o_gs = cmd->add_option("--gammas", sc.gammas, "custom per-pair amplitudes");
    sc.o_lo = cmd->add_option("--eps-lo", sc.eps_lo)->capture_default_str();
    sc.o_hi = cmd->add_option("--eps-hi", sc.eps_hi, "sweep upper bound");
    sc.o_gp = cmd->add_option("--grid-points", sc.grid_points)->capture_default_str();
    add_common(cmd, sc.c);
    cmd->callback([&sc] { run_scan(sc); });
  }

  GammaCritOpts gc;
  {
    CLI::App* cmd = app.add_subcommand("gamma-crit",
                                       "critical loss/gain amplitude per chain size");
    gc.o_profile = cmd->add_option("--profile", gc.profile)->capture_default_str();
    gc.o_om = cmd->add_option("--omega", gc.omega)->capture_default_str();
    gc.o_n = cmd->add_option("--n", gc.n, "single chain size");
    gc.o_nmax = cmd->add_option("--n-max", gc.n_max, "table up to this size");
    gc.o_nstep = cmd->add_option("--n-step", gc.n_step)->capture_default_str();
    gc.o_up = cmd->add_option("--upper", gc.upper, "gamma search upper bound");
    add_common(cmd, gc.c);
    cmd->callback([&gc] { run_gamma_crit(gc); });
  }

  PlanarOpts pl;
  {
    CLI::App* cmd = app.add_subcommand("planar", "three-oscillator phase structure");
    pl.o_mode = cmd->add_option("--mode", pl.mode, "intervals, diagram or trace")
                    ->capture_default_str();
    pl.o_om = cmd->add_option("--omega", pl.omega, "outer oscillator frequency");
    pl.o_ga = cmd->add_option("--gamma", pl.gamma, "loss/gain rate");
    pl.o_e1 = cmd->add_option("--eps1", pl.eps1, "outer-to-centre coupling");
    pl.o_e2lo = cmd->add_option("--eps2-min", pl.eps2_min)->capture_default_str();
    pl.o_e2hi = cmd->add_option("--eps2-max", pl.eps2_max, "sweep upper bound");
    pl.o_e1lo = cmd->add_option("--eps1-min", pl.eps1_min)->capture_default_str();
    pl.o_e1hi = cmd->add_option("--eps1-max", pl.eps1_max, "diagram upper bound");
    pl.o_pts = cmd->add_option("--points", pl.points)->capture_default_str();
    pl.o_res = cmd->add_option("--resolution", pl.resolution)->capture_default_str();
    pl.o_tpts = cmd->add_option("--trace-points", pl.trace_points)->capture_default_str();
    add_common(cmd, pl.c);
    cmd->callback([&pl] { run_planar(pl); });
  }

  SimulateOpts si;
  {
    CLI::App* cmd = app.add_subcommand("simulate", "integrate the equations of motion");
    si.o_sys = cmd->add_option("--system", si.system, "chain or trio")
                   ->capture_default_str();
    si.o_n = cmd->add_option("--n", si.n)->capture_default_str();
    si.o_parity = cmd->add_option("--parity", si.parity)->capture_default_str();
    si.o_rep = cmd->add_option("--rep", si.rep, "sum or product")->capture_default_str();
    si.o_om = cmd->add_option("--omega", si.omega);
    si.o_ga = cmd->add_option("--gamma", si.gamma);
    si.o_ep = cmd->add_option("--epsilon", si.epsilon);
    si.o_e1 = cmd->add_option("--eps1", si.eps1, "trio coupling to the centre");
    si.o_e2 = cmd->add_option("--eps2", si.eps2, "trio outer coupling");
    si.o_x0 = cmd->add_option("--x0", si.x0, "initial coordinates");
    si.o_p0 = cmd->add_option("--p0", si.p0, "initial momenta");
    si.o_tend = cmd->add_option("--t-end", si.t_end)->capture_default_str();
    si.o_dt = cmd->add_option("--dt", si.dt)->capture_default_str();
    si.o_coord = cmd->add_option("--coord", si.coord, "coordinate for peak extraction")
                     ->capture_default_str();
    si.o_extract = cmd->add_flag("--extract,!--no-extract", si.extract,
                                 "report peak frequencies");
    add_common(cmd, si.c);
    cmd->callback([&si] { run_simulate(si); });
  }

  ImpurityOpts im;
  {
    CLI::App* cmd = app.add_subcommand("impurity", "continuum fields and the localized mode");
    im.o_c = cmd->add_option("--c", im.cspeed, "wave speed")->capture_default_str();
    im.o_om = cmd->add_option("--omega", im.omega, "background frequency")
                  ->capture_default_str();
    im.o_ep = cmd->add_option("--epsilon", im.epsilon, "coupling (signed)");
    im.o_ga = cmd->add_option("--gamma", im.gamma, "impurity strength");
    im.o_Om = cmd->add_option("--Omega", im.Omega, "mode frequency");
    im.o_hw = cmd->add_option("--half-width", im.half_width, "grid half width")
                  ->capture_default_str();
    im.o_pts = cmd->add_option("--points", im.points)->capture_default_str();
    im.o_rho = cmd->add_option("--rho", im.rho, "mass density");
    im.o_k = cmd->add_option("--k", im.stiffness, "spring stiffness");
    im.o_G = cmd->add_option("--Gamma", im.Gamma_cap, "impurity strength before scaling");
    im.o_mu1 = cmd->add_option("--mu1", im.mu1, "anchor mass 1");
    im.o_nu1 = cmd->add_option("--nu1", im.nu1, "anchor frequency 1");
    im.o_mu2 = cmd->add_option("--mu2", im.mu2, "anchor mass 2");
    im.o_nu2 = cmd->add_option("--nu2", im.nu2, "anchor frequency 2");
    add_common(cmd, im.c);
    cmd->callback([&im] { run_impurity(im); });
  }

  PolyOpts po;
  {
    CLI::App* cmd = app.add_subcommand("poly", "characteristic polynomial table");
    po.o_n = cmd->add_option("--n", po.n, "number of mirror pairs");
    po.o_chi = cmd->add_option("--chi", po.chi, "evaluation point");
    po.o_eps = cmd->add_option("--eps", po.eps, "evaluation coupling");
    po.o_form = cmd->add_option("--form", po.form, "recursion, sum or product")
                    ->capture_default_str();
    add_common(cmd, po.c);
    cmd->callback([&po] { run_poly(po); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Unsupported& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const OverflowError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const RangeTooSmall& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NoPseudoBoundState& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
