#include "qsplit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsplit/errors.hpp"
#include "qsplit/observables.hpp"
#include "qsplit/oracle.hpp"
#include "qsplit/stationary.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

CheckResult below(std::string name, double value, double limit, std::string detail = "") {
  return {std::move(name), value < limit, value, limit, std::move(detail)};
}

CheckResult skipped(std::string name, std::string why) {
  return {std::move(name), true, 0.0, 0.0, "skipped: " + why};
}

std::vector<double> probe_points(const Potential& pot, std::size_t n) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(pot.a() - 25.0, pot.b() + 25.0);
  std::vector<double> xs(n);
  for (double& x : xs) x = u(rng);
  xs.push_back(pot.midpoint());
  xs.push_back(pot.a());
  return xs;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const Scenario& sc, const Setup& st,
                                             const SuiteOptions& opt) {
  std::vector<CheckResult> out;
  const Potential& pot = st.pot;
  const ParamTable& tab = st.table;

  double unimod = 0.0, sum_tr = 0.0;
  for (const TunnelingParams& tp : tab.params) {
    unimod = std::max(unimod, std::abs(std::norm(tp.q) - std::norm(tp.p) - 1.0));
    sum_tr = std::max(sum_tr, std::abs(tp.T + tp.R - 1.0));
  }
  out.push_back(below("transfer: |q|^2 - |p|^2 = 1", unimod, 1e-10));
  out.push_back(below("transfer: T + R = 1", sum_tr, 1e-12));
  const double t_in = weight_fraction(tab, st.packet, Weight::T);
  const double r_in = weight_fraction(tab, st.packet, Weight::R);
  out.push_back(below("spectral: <T>_in + <R>_in = 1", std::abs(t_in + r_in - 1.0), 1e-10,
                      "<T>_in = " + std::to_string(t_in)));

  if (!pot.symmetric()) {
    for (const char* n : {"stationary decomposition", "stationary ref flux", "stationary tr flux",
                          "synthesized decomposition", "channel norm drift", "orthogonality",
                          "midpoint nullity"})
      out.push_back(skipped(n, "asymmetric potential"));
  } else {
    const std::vector<double> probes = probe_points(pot, 64);
    double dec = 0.0, ref_flux = 0.0, tr_flux = 0.0, null_mid = 0.0;
    for (std::size_t j = 0; j < tab.grid.n; j += std::max<std::size_t>(1, opt.k_stride)) {
      const TunnelingParams& tp = tab.params[j];
      const StationaryState f = full_state(pot, tp);
      const StationaryState r = ref_state(pot, tp, tab.lambda[j]);
      const StationaryState t = tr_state(f, r);
      const double scale = std::max(1.0, std::abs(f.value(pot.a())));
      for (double x : probes) {
        dec = std::max(dec, std::abs(f.value(x) - t.value(x) - r.value(x)) / scale);
        ref_flux = std::max(ref_flux, std::abs(r.current(x)));
        if (f.flux > 0.0) tr_flux = std::max(tr_flux, std::abs(t.current(x) - f.flux) / f.flux);
        if (x >= pot.midpoint()) null_mid = std::max(null_mid, std::abs(r.value(x)));
      }
    }
    out.push_back(below("stationary decomposition full = tr + ref", dec, 1e-9));
    out.push_back(below("stationary ref flux", ref_flux, 1e-10, "nm/fs"));
    out.push_back(below("stationary tr flux x-variation", tr_flux, 1e-10, "relative"));
    out.push_back({"stationary ref = 0 for x >= x_mid", null_mid == 0.0, null_mid, 0.0, "exact"});

    Synthesizer syn(pot, st.packet, tab);
    const std::vector<double> xs = sc.xgrid.points();
    double dec_syn = 0.0;
    for (double tps : sc.times_ps) {
      const double t = tps * units::kFsPerPs;
      const auto f = syn.field(Channel::Full, t, xs);
      const auto tr = syn.field(Channel::Tr, t, xs);
      const auto rf = syn.field(Channel::Ref, t, xs);
      double peak = 0.0, diff = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        peak = std::max(peak, std::abs(f[i]));
        diff = std::max(diff, std::abs(f[i] - tr[i] - rf[i]));
      }
      dec_syn = std::max(dec_syn, diff / peak);
    }
    out.push_back(below("synthesized decomposition", dec_syn, 1e-6, "relative to max|Psi_full|"));

    std::vector<double> times{0.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0};
    for (double tps : sc.times_ps) times.push_back(tps * units::kFsPerPs);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const CmWindow win = auto_window(syn, st.l0, times.back());
    double n_tr0 = 0.0, n_ref0 = 0.0, drift_tr = 0.0, drift_ref = 0.0, ortho = 0.0, ortho_re = 0.0,
           mid = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Frame fr = syn.frame(times[i], win.x_lo, win.x_hi, win.dx_max);
      const auto x = fr.xs();
      const double nt = norm2(x, fr.tr), nr = norm2(x, fr.ref);
      if (i == 0) {
        n_tr0 = nt;
        n_ref0 = nr;
      }
      drift_tr = std::max(drift_tr, std::abs(nt - n_tr0) / n_tr0);
      drift_ref = std::max(drift_ref, std::abs(nr - n_ref0) / n_ref0);
      const Complex ip = inner_product(x, fr.tr, fr.ref) / std::sqrt(nt * nr);
      ortho = std::max(ortho, std::abs(ip));
      ortho_re = std::max(ortho_re, std::abs(ip.real()));
      const auto first = std::upper_bound(x.begin(), x.end(), pot.midpoint());
      if (first != x.end()) mid = std::max(mid, partial_norm2(x, fr.ref, *first, x.back()) / nr);
    }
    out.push_back(below("tr norm drift", drift_tr, 1e-4, "relative, t in [0, 0.6] ps"));
    out.push_back(below("ref norm drift", drift_ref, 1e-4, "relative"));
    out.push_back(below("||Psi_tr||^2 = <T>_in", std::abs(n_tr0 - t_in), 1e-3));
    out.push_back(below("orthogonality |<tr|ref>|", ortho, 1e-4,
                        "max |Re<tr|ref>| = " + std::to_string(ortho_re)));
    out.push_back(below("ref norm beyond x_mid", mid, 1e-6, "fraction of ||Psi_ref||^2"));
  }

  if (!opt.run_oracle) {
    out.push_back(skipped("oracle L2 distance", "disabled"));
    return out;
  }
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
  for (double tps : sc.times_ps)
    if (tps > 0.0) times.push_back(tps * units::kFsPerPs);
  std::sort(times.begin(), times.end());
  if (times.empty()) {
    out.push_back(skipped("oracle L2 distance", "no positive times"));
    return out;
  }
  const std::vector<GridField> cn = propagate_extrapolated(pot, es, times);
  Synthesizer syn(pot, st.packet, tab);
  double worst = 0.0;
  for (const GridField& g : cn) {
    const auto spec = syn.field(Channel::Full, g.t, g.xs());
    worst = std::max(worst, l2_distance(g, spec));
  }
  out.push_back(below("oracle L2 distance", worst, 1e-3, "Crank-Nicolson vs synthesis"));
  return out;
}

}  // namespace qsplit
