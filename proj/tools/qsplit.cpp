// qsplit: command-line front end for the transmission/reflection split.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsplit/errors.hpp"
#include "qsplit/io.hpp"
#include "qsplit/observables.hpp"
#include "qsplit/oracle.hpp"
#include "qsplit/parallel.hpp"
#include "qsplit/scenario.hpp"
#include "qsplit/spectral.hpp"
#include "qsplit/stationary.hpp"
#include "qsplit/timing.hpp"
#include "qsplit/units.hpp"
#include "qsplit/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qsplit;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string scenario;
  std::string out = ".";
  std::string times;
  int threads = 0;
  double l1 = -1.0;
  double l2 = -1.0;
  double k = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t n = 400;
  bool no_oracle = false;
};

std::string time_tag(double ps) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t%gps", ps);
  return buf;
}

Scenario load(const Options& o) {
  Scenario s = load_scenario(o.scenario);
  if (!o.times.empty()) s.times_ps = parse_number_list(o.times);
  if (o.l1 >= 0.0) s.timing.L1 = o.l1;
  if (o.l2 >= 0.0) s.timing.L2 = o.l2;
  return s;
}

fs::path out_dir(const Options& o) {
  fs::path p(o.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorKind::Config, "cannot create output directory " + o.out);
  return p;
}

int cmd_params(const Options& o) {
  const Scenario sc = load(o);
  const Setup st = prepare(sc);
  const ParamTable& t = st.table;
  std::vector<std::string> head{"k", "T", "R", "J", "F", "dT", "dR", "dJ", "dF"};
  if (t.has_lambda) {
    head.push_back("Lambda");
    head.push_back("dLambda");
  }
  CsvWriter csv(out_dir(o) / "params.csv", head);
  for (std::size_t j = 0; j < t.grid.n; ++j) {
    std::vector<double> r{t.grid.at(j), t.T[j], t.R[j], t.J[j], t.F[j], t.dT[j], t.dR[j], t.dJ[j], t.dF[j]};
    if (t.has_lambda) {
      r.push_back(t.lambda[j]);
      r.push_back(t.dlambda[j]);
    }
    csv.row(r);
  }
  return 0;
}

int cmd_stationary(const Options& o) {
  const Scenario sc = load(o);
  const Potential& pot = sc.potential;
  const double k = o.k > 0.0 ? o.k : sc.k0();
  const TunnelingParams tp = tunneling_params(pot, k);
  std::vector<StationaryState> states{full_state(pot, tp)};
  if (pot.symmetric()) {
    const double lam = tp.R < kFullTransmissionR ? 0.0 : select_odd_root(pot, tp);
    states.push_back(ref_state(pot, tp, lam));
    states.push_back(tr_state(states[0], states[1]));
  }
  const fs::path dir = out_dir(o);
  const std::vector<double> xs = sc.xgrid.points();
  for (const StationaryState& s : states) {
    CsvWriter csv(dir / ("stationary_" + std::string(to_string(s.channel)) + ".csv"),
                  {"x", "re", "im", "abs2", "flux"});
    for (double x : xs) {
      const Complex v = s.value(x);
      csv.row({x, v.real(), v.imag(), std::norm(v), s.current(x)});
    }
  }
  return 0;
}

int cmd_evolve(const Options& o) {
  const Scenario sc = load(o);
  const Setup st = prepare(sc);
  Synthesizer syn(st.pot, st.packet, st.table);
  const fs::path dir = out_dir(o);
  const std::vector<double> xs = sc.xgrid.points();
  for (double tps : sc.times_ps) {
    const double t = tps * units::kFsPerPs;
    const auto f = syn.field(Channel::Full, t, xs);
    std::vector<Complex> tr, rf;
    if (syn.decomposed()) {
      tr = syn.field(Channel::Tr, t, xs);
      rf = syn.field(Channel::Ref, t, xs);
    }
    std::vector<std::string> head{"x", "abs2_full"};
    if (syn.decomposed()) {
      head.push_back("abs2_tr");
      head.push_back("abs2_ref");
    }
    CsvWriter csv(dir / ("evolve_" + time_tag(tps) + ".csv"), head);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<double> r{xs[i], std::norm(f[i])};
      if (syn.decomposed()) {
        r.push_back(std::norm(tr[i]));
        r.push_back(std::norm(rf[i]));
      }
      csv.row(r);
    }
  }
  return 0;
}

json moments_json(const Moments& m) {
  return {{"norm2", m.norm2}, {"mean_x_nm", m.mean_x}, {"var_x_nm2", m.var_x}, {"mean_k_inm", m.mean_k}};
}

int cmd_moments(const Options& o) {
  const Scenario sc = load(o);
  const Setup st = prepare(sc);
  Synthesizer syn(st.pot, st.packet, st.table);
  double t_max = 0.0;
  for (double t : sc.times_ps) t_max = std::max(t_max, t * units::kFsPerPs);
  const CmWindow win = auto_window(syn, st.l0, t_max);
  json doc;
  doc["scenario"] = sc.name;
  doc["k0_inm"] = st.k0;
  doc["T_in"] = weight_fraction(st.table, st.packet, Weight::T);
  doc["R_in"] = weight_fraction(st.table, st.packet, Weight::R);
  json frames = json::array();
  for (double tps : sc.times_ps) {
    const Frame fr = syn.frame(tps * units::kFsPerPs, win.x_lo, win.x_hi, win.dx_max);
    const auto xs = fr.xs();
    json e;
    e["t_ps"] = tps;
    e["full"] = moments_json(moments_x(xs, fr.full));
    if (syn.decomposed()) {
      e["tr"] = moments_json(moments_x(xs, fr.tr));
      e["ref"] = moments_json(moments_x(xs, fr.ref));
    }
    frames.push_back(e);
  }
  doc["frames"] = frames;
  write_json(out_dir(o) / "moments.json", doc);
  return 0;
}

json exact_json(const ExactTime& e) {
  json j{{"status", std::string(to_string(e.status))}};
  if (e.status == TimeStatus::Ok) {
    j["value_fs"] = e.value;
    j["t_first_fs"] = e.t_first;
    j["t_last_fs"] = e.t_last;
  } else {
    j["detail"] = e.detail;
  }
  return j;
}

int cmd_times(const Options& o) {
  const Scenario sc = load(o);
  const Setup st = prepare(sc);
  const double mass = st.pot.mass();
  Synthesizer syn(st.pot, st.packet, st.table);
  ExactTimeOptions eo;
  eo.t_lo = sc.timing.window_lo * units::kFsPerPs;
  eo.t_hi = sc.timing.window_hi * units::kFsPerPs;
  eo.scan_dt = sc.timing.scan_dt;
  eo.window = auto_window(syn, st.l0, eo.t_hi);

  TimingReport rep;
  rep.L1 = sc.timing.L1;
  rep.L2 = sc.timing.L2;
  rep.exact = exact_times(syn, rep.L1, rep.L2, eo);
  rep.asym = asymptotic_times(st.table, st.packet, mass);
  rep.tau_tr_L = asymptotic_tr_time(rep.asym, rep.L1, rep.L2, mass);
  rep.tau_ref_L = asymptotic_ref_time(rep.asym, rep.L1, mass);
  rep.swpa = swpa_times(st.table, st.packet, mass, rep.L1, rep.L2, st.pot.a());
  rep.shifts = momentum_shifts(st.table, st.packet, st.l0);

  json doc;
  doc["scenario"] = sc.name;
  doc["L1_nm"] = rep.L1;
  doc["L2_nm"] = rep.L2;
  doc["exact_tr"] = exact_json(rep.exact.tr);
  doc["exact_ref"] = exact_json(rep.exact.ref);
  doc["asym_tr_fs"] = rep.asym.tau_tr;
  doc["asym_ref_fs"] = rep.asym.tau_ref;
  doc["interval_tr_fs"] = rep.tau_tr_L;
  doc["interval_ref_fs"] = rep.tau_ref_L;
  doc["d_eff_tr_nm"] = rep.asym.d_eff_tr;
  doc["d_eff_ref_nm"] = rep.asym.d_eff_ref;
  doc["x_start_tr_nm"] = rep.asym.x_start_tr;
  doc["x_start_ref_nm"] = rep.asym.x_start_ref;
  doc["k_tr_inm"] = rep.asym.k_tr;
  doc["k_ref_inm"] = rep.asym.k_ref;
  doc["T_in"] = rep.asym.T_in;
  doc["R_in"] = rep.asym.R_in;
  doc["swpa"] = {{"tr_fs", rep.swpa.tr}, {"ref_fs", rep.swpa.ref}, {"L1_nm", rep.swpa.L1},
                 {"L2_nm", rep.swpa.L2}, {"a_nm", rep.swpa.a}, {"k_tr_out_inm", rep.swpa.k_tr_out},
                 {"k_ref_out_inm", rep.swpa.k_ref_out}, {"k0_inm", rep.swpa.k0}};
  doc["momentum_shifts"] = {{"dk_tr_inm", rep.shifts.dk_tr}, {"dk_ref_inm", rep.shifts.dk_ref},
                            {"T_in_dk_tr", rep.shifts.T_in * rep.shifts.dk_tr},
                            {"R_in_dk_ref", rep.shifts.R_in * rep.shifts.dk_ref},
                            {"dT_in_over_4l0sq", rep.shifts.predicted}};
  write_json(out_dir(o) / "times.json", doc);
  return 0;
}

int cmd_sweep(const Options& o) {
  const Scenario sc = load(o);
  const Potential& pot = sc.potential;
  const double k0 = sc.k0();
  const double lo = o.k_min > 0.0 ? o.k_min : 0.1 * k0;
  const double hi = o.k_max > 0.0 ? o.k_max : 3.0 * k0;
  if (!(hi > lo) || o.n < 2) throw Error(ErrorKind::Config, "sweep needs k_min < k_max and n >= 2");
  const bool rect = !pot.is_delta() && pot.segments().size() == 1;
  const bool closed = rect || pot.is_delta();
  std::vector<std::string> head{"k", "d_eff_fd", "x_start_fd"};
  if (closed) {
    head.push_back("d_eff");
    head.push_back("x_start");
  }
  CsvWriter csv(out_dir(o) / "sweep.csv", head);
  for (std::size_t i = 0; i < o.n; ++i) {
    const double k = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.n - 1);
    const ParamDerivatives d = params_derivatives(pot, k);
    const double dl = lambda_derivative(pot, k);
    std::vector<double> r{k, d.dJ - d.dF - dl, -dl};
    if (closed) {
      const Widths w = rect ? rect_deff_xstart(pot.segments()[0].height, pot.width(), pot.mass(), k)
                            : delta_deff_xstart(pot.delta()->strength, pot.mass(), k);
      r.push_back(w.d_eff);
      r.push_back(w.x_start);
    }
    csv.row(r);
  }
  return 0;
}

int cmd_oracle(const Options& o) {
  const Scenario sc = load(o);
  const Setup st = prepare(sc);
  ExtrapolationSettings es;
  es.x_min = sc.oracle.x_min;
  es.x_max = sc.oracle.x_max;
  es.dx = sc.oracle.dx;
  es.dt = sc.oracle.dt;
  es.levels = sc.oracle.levels;
  es.l0 = st.l0;
  es.k0 = st.k0;
  es.k_max = st.grid.k_max;
  es.leak_tol = sc.oracle.leak_tol;
  std::vector<double> times;
  for (double tps : sc.times_ps) times.push_back(tps * units::kFsPerPs);
  const auto fields = propagate_extrapolated(st.pot, es, times);
  const fs::path dir = out_dir(o);
  const std::vector<double> xs = sc.xgrid.points();
  for (std::size_t c = 0; c < fields.size(); ++c) {
    const GridField& g = fields[c];
    CsvWriter csv(dir / ("oracle_" + time_tag(sc.times_ps[c]) + ".csv"), {"x", "abs2_full"});
    for (double x : xs) {
      const double r = (x - g.x0) / g.dx;
      const auto i = static_cast<long>(std::floor(r));
      if (i < 0 || static_cast<std::size_t>(i) + 1 >= g.values.size()) continue;
      const double w = r - static_cast<double>(i);
      const double d0 = std::norm(g.values[static_cast<std::size_t>(i)]);
      const double d1 = std::norm(g.values[static_cast<std::size_t>(i) + 1]);
      csv.row({x, (1.0 - w) * d0 + w * d1});
    }
  }
  return 0;
}

int cmd_validate(const Options& o) {
  const Scenario sc = load(o);
  const Setup st = prepare(sc);
  SuiteOptions so;
  so.run_oracle = !o.no_oracle;
  const auto results = run_invariant_suite(sc, st, so);
  bool ok = true;
  json rows = json::array();
  std::printf("%-44s %-5s %-24s %-24s %s\n", "check", "pass", "value", "limit", "detail");
  for (const CheckResult& r : results) {
    ok = ok && r.pass;
    std::printf("%-44s %-5s %-24s %-24s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                fmt17(r.value).c_str(), fmt17(r.limit).c_str(), r.detail.c_str());
    rows.push_back({{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"limit", r.limit},
                    {"detail", r.detail}});
  }
  write_json(out_dir(o) / "validate.json", {{"scenario", sc.name}, {"checks", rows}, {"pass", ok}});
  return ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission/reflection decomposition of 1D wave-packet scattering"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (falls back to QSPLIT_THREADS)")
        ->check(CLI::PositiveNumber);
  };
  auto with_times = [&](CLI::App* sub) {
    sub->add_option("--times", o.times, "comma-separated times in ps");
  };
  auto with_l = [&](CLI::App* sub) {
    sub->add_option("--l1", o.l1, "L1 override (nm)")->check(CLI::NonNegativeNumber);
    sub->add_option("--l2", o.l2, "L2 override (nm)")->check(CLI::NonNegativeNumber);
  };

  struct Cmd {
    CLI::App* app;
    int (*run)(const Options&);
  };
  std::vector<Cmd> cmds;

  auto* params = app.add_subcommand("params", "k, T, R, J, F and derivatives as CSV");
  common(params);
  cmds.push_back({params, cmd_params});

  auto* stationary = app.add_subcommand("stationary", "stationary channel states at one k");
  common(stationary);
  stationary->add_option("--k", o.k, "wavenumber (nm^-1), default k0")->check(CLI::PositiveNumber);
  cmds.push_back({stationary, cmd_stationary});

  auto* evolve = app.add_subcommand("evolve", "channel densities at each time");
  common(evolve);
  with_times(evolve);
  cmds.push_back({evolve, cmd_evolve});

  auto* moments = app.add_subcommand("moments", "norms and moments per channel as JSON");
  common(moments);
  with_times(moments);
  cmds.push_back({moments, cmd_moments});

  auto* times = app.add_subcommand("times", "exact, asymptotic and legacy times as JSON");
  common(times);
  with_l(times);
  cmds.push_back({times, cmd_times});

  auto* sweep = app.add_subcommand("sweep", "d_eff(k) and x_start(k) as CSV");
  common(sweep);
  sweep->add_option("--k-min", o.k_min, "lower k (nm^-1)")->check(CLI::PositiveNumber);
  sweep->add_option("--k-max", o.k_max, "upper k (nm^-1)")->check(CLI::PositiveNumber);
  sweep->add_option("--n", o.n, "number of k values");
  cmds.push_back({sweep, cmd_sweep});

  auto* oracle = app.add_subcommand("oracle", "Crank-Nicolson densities at each time");
  common(oracle);
  with_times(oracle);
  cmds.push_back({oracle, cmd_oracle});

  auto* validate_cmd = app.add_subcommand("validate", "run the invariant suite");
  common(validate_cmd);
  with_times(validate_cmd);
  validate_cmd->add_flag("--no-oracle", o.no_oracle, "skip the Crank-Nicolson comparison");
  cmds.push_back({validate_cmd, cmd_validate});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (o.threads > 0) {
      set_thread_count(o.threads);
    } else if (const int env = threads_from_env(); env > 0) {
      set_thread_count(env);
    }
    for (const Cmd& c : cmds)
      if (c.app->parsed()) return c.run(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_config_error(e.kind()) ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
