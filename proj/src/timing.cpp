#include "qsplit/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "qsplit/errors.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

// (sinh x - x)/x^3 and (x cosh x - sinh x)/x^3; `s` = -1 gives the
// trigonometric pair (x - sin x)/x^3 and (sin x - x cos x)/x^3.
double series_a(double x, double s) {
  const double x2 = x * x;
  return 1.0 / 6.0 + s * x2 / 120.0 + x2 * x2 / 5040.0 + s * x2 * x2 * x2 / 362880.0;
}

double series_b(double x, double s) {
  const double x2 = x * x;
  return 1.0 / 3.0 + s * x2 / 30.0 + x2 * x2 / 840.0 + s * x2 * x2 * x2 / 45360.0;
}

struct Root {
  bool found = false;
  double t = 0.0;
};

// Extreme crossing of cm(t) = level among the scanned samples, refined by
// bisection on fresh CM evaluations.
Root extreme_root(const Synthesizer& syn, Channel ch, const std::vector<CmSample>& s,
                  double level, bool largest, const ExactTimeOptions& opt) {
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double f0 = s[i].mean_x - level;
    const double f1 = s[i + 1].mean_x - level;
    if ((f0 <= 0.0 && f1 > 0.0) || (f0 >= 0.0 && f1 < 0.0)) {
      pick = i;
      if (!largest) break;
    }
  }
  if (!pick) return {};
  double lo = s[*pick].t, hi = s[*pick + 1].t;
  double flo = s[*pick].mean_x - level;
  while (hi - lo > opt.tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = cm_at(syn, ch, mid, opt.window).mean_x - level;
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {true, 0.5 * (lo + hi)};
}

bool empty_channel(const std::vector<CmSample>& s) {
  return std::any_of(s.begin(), s.end(), [](const CmSample& c) { return std::isnan(c.mean_x); });
}

void require_ballistic(const std::vector<CmSample>& s, const char* name) {
  if (s.size() < 20) throw Error(ErrorKind::WindowTooShort, "too few CM samples");
  const std::size_t i0 = s.size() - s.size() / 10 - 1;
  const std::size_t i1 = s.size() - 1;
  const double v0 = (s[i0 + 1].mean_x - s[i0].mean_x) / (s[i0 + 1].t - s[i0].t);
  const double v1 = (s[i1].mean_x - s[i1 - 1].mean_x) / (s[i1].t - s[i1 - 1].t);
  if (!(std::abs(v1 - v0) <= 0.01 * std::abs(v1)))
    throw Error(ErrorKind::WindowTooShort, std::string(name) +
                                               " CM speed still changes by more than 1% "
                                               "over the last tenth of the window");
}

}  // namespace

std::string_view to_string(TimeStatus s) { return s == TimeStatus::Ok ? "ok" : "NoRoot"; }

ExactTimes exact_times(const Synthesizer& syn, double L1, double L2, const ExactTimeOptions& opt) {
  if (!syn.decomposed())
    throw Error(ErrorKind::AsymmetricPotential, "exact times need the tr/ref split");
  if (!(opt.t_hi > opt.t_lo) || !(opt.scan_dt > 0.0))
    throw Error(ErrorKind::Config, "bad time window");
  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::floor((opt.t_hi - opt.t_lo) / opt.scan_dt));
  for (std::size_t i = 0; i <= steps; ++i) times.push_back(opt.t_lo + static_cast<double>(i) * opt.scan_dt);
  const Trajectories traj = cm_trajectories(syn, times, opt.window);
  const bool tr_empty = empty_channel(traj.tr);
  const bool ref_empty = empty_channel(traj.ref);
  if (opt.check_window) {
    if (!tr_empty) require_ballistic(traj.tr, "transmitted");
    if (!ref_empty) require_ballistic(traj.ref, "reflected");
  }

  const Potential& pot = syn.potential();
  ExactTimes out;
  const Root t1 = extreme_root(syn, Channel::Tr, traj.tr, pot.a() - L1, false, opt);
  const Root t2 = extreme_root(syn, Channel::Tr, traj.tr, pot.b() + L2, true, opt);
  if (tr_empty) {
    out.tr.detail = "transmitted channel carries no probability";
  } else if (t1.found && t2.found) {
    out.tr = {TimeStatus::Ok, t2.t - t1.t, t1.t, t2.t, ""};
  } else {
    out.tr.detail = t1.found ? "transmitted CM never reaches b + L2"
                             : "transmitted CM never reaches a - L1";
  }
  const Root r1 = extreme_root(syn, Channel::Ref, traj.ref, pot.a() - L1, false, opt);
  const Root r2 = extreme_root(syn, Channel::Ref, traj.ref, pot.a() - L1, true, opt);
  if (ref_empty) {
    out.ref.detail = "reflected channel carries no probability";
  } else if (r1.found && r2.found) {
    out.ref = {TimeStatus::Ok, r2.t - r1.t, r1.t, r2.t, ""};
  } else {
    out.ref.detail = "reflected CM never reaches a - L1";
  }
  return out;
}

AsymptoticTimes asymptotic_times(const ParamTable& table, const SpectralPacket& packet,
                                 double mass) {
  if (!table.has_lambda)
    throw Error(ErrorKind::AsymmetricPotential, "asymptotic times need Lambda(k)");
  AsymptoticTimes r;
  r.T_in = weight_fraction(table, packet, Weight::T);
  r.R_in = weight_fraction(table, packet, Weight::R);
  const double hm = units::hbar_over_m(mass);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.k_tr = r.k_ref = r.d_eff_tr = r.d_eff_ref = r.x_start_tr = r.x_start_ref = nan;
  r.tau_tr = r.tau_ref = nan;
  // A channel without weight (no reflection, say) keeps NaN entries.
  if (r.T_in > kMinNorm2) {
    r.k_tr = weighted_mean(table, packet, Weight::T, Quantity::K);
    const double lam = weighted_mean(table, packet, Weight::T, Quantity::dLambda);
    r.d_eff_tr = weighted_mean(table, packet, Weight::T, Quantity::dJ) - lam;
    r.x_start_tr = -lam;
    r.tau_tr = r.d_eff_tr / (hm * r.k_tr);
  }
  if (r.R_in > kMinNorm2) {
    r.k_ref = weighted_mean(table, packet, Weight::R, Quantity::K);
    const double lam = weighted_mean(table, packet, Weight::R, Quantity::dLambda);
    r.d_eff_ref = weighted_mean(table, packet, Weight::R, Quantity::dJminusdF) - lam;
    r.x_start_ref = -lam;
    r.tau_ref = r.d_eff_ref / (hm * r.k_ref);
  }
  if (!(r.T_in > kMinNorm2) && !(r.R_in > kMinNorm2))
    throw Error(ErrorKind::ZeroWeight, "packet carries no weight");
  return r;
}

double asymptotic_tr_time(const AsymptoticTimes& a, double L1, double L2, double mass) {
  return (a.d_eff_tr + L1 + L2) / (units::hbar_over_m(mass) * a.k_tr);
}

double asymptotic_ref_time(const AsymptoticTimes& a, double L1, double mass) {
  return (a.d_eff_ref + 2.0 * L1) / (units::hbar_over_m(mass) * a.k_ref);
}

Widths rect_deff_xstart(double V0, double d, double mass, double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::NonPositiveK, "k must be positive");
  if (V0 == 0.0 || d == 0.0) return {d, 0.0};
  const double k2 = k * k;
  const double kap0sq = std::abs(V0) * units::two_m_over_hbar2(mass);
  const double d3 = d * d * d;

  if (V0 > 0.0 && k2 < kap0sq) {
    const double kap = std::sqrt(kap0sq - k2);
    const double x = kap * d;
    const bool small = x < kSeriesThreshold;
    const double sinhc = small ? 1.0 + x * x * (1.0 / 6.0 + x * x * (1.0 / 120.0 + x * x / 5040.0)) : std::sinh(x) / x;
    const double sa = small ? series_a(x, 1.0) : (std::sinh(x) - x) / (x * x * x);
    const double sb = small ? series_b(x, 1.0) : (x * std::cosh(x) - std::sinh(x)) / (x * x * x);
    const double sh_over_k = d * sinhc;  // sinh(kappa d)/kappa
    const double half = std::sinh(0.5 * x);
    const double den = 4.0 * k2 + kap0sq * kap0sq * sh_over_k * sh_over_k;
    const double d_eff = 4.0 * (k2 + kap0sq * half * half) * (d + kap0sq * d3 * sa) / den;
    const double x_start = -2.0 * kap0sq * (sh_over_k + k2 * d3 * sb) / den;
    return {d_eff, x_start};
  }

  const double beta = V0 > 0.0 ? 1.0 : -1.0;
  const double kap = std::sqrt(k2 - beta * kap0sq);
  const double x = kap * d;
  const bool small = x < kSeriesThreshold;
  const double sinc = small ? 1.0 - x * x * (1.0 / 6.0 - x * x * (1.0 / 120.0 - x * x / 5040.0)) : std::sin(x) / x;
  const double sa = small ? series_a(x, -1.0) : (x - std::sin(x)) / (x * x * x);
  const double sb = small ? series_b(x, -1.0) : (std::sin(x) - x * std::cos(x)) / (x * x * x);
  const double s_over_k = d * sinc;
  const double half = std::sin(0.5 * x);
  const double den = 4.0 * k2 + kap0sq * kap0sq * s_over_k * s_over_k;
  const double d_eff = 4.0 * (k2 - beta * kap0sq * half * half) * (d + beta * kap0sq * d3 * sa) / den;
  const double x_start = -2.0 * beta * kap0sq * (s_over_k + k2 * d3 * sb) / den;
  return {d_eff, x_start};
}

Widths delta_deff_xstart(double W, double mass, double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::NonPositiveK, "k must be positive");
  const double g = 0.5 * W * units::two_m_over_hbar2(mass);
  return {0.0, -g / (k * k + g * g)};
}

double delta_xstart_printed(double W, double mass, double k) {
  const double hb2 = units::kHbar * units::kHbar;
  // m in eV fs^2 / nm^2: hbar^2/(2 m_e) = C  =>  m_e = hbar^2/(2C).
  const double m = mass * hb2 / (2.0 * units::kHbar2Over2Me);
  return -2.0 * m * hb2 * W / (hb2 * hb2 * k * k + m * m * W * W);
}

SwpaTimes swpa_times(const ParamTable& table, const SpectralPacket& packet, double mass, double L1,
                     double L2, double a) {
  SwpaTimes s;
  s.L1 = L1;
  s.L2 = L2;
  s.a = a;
  s.k0 = packet.mean_k();
  s.k_tr_out = weighted_mean(table, packet, Weight::T, Quantity::K);
  s.k_ref_out = weighted_mean(table, packet, Weight::R, Quantity::K);
  const double jt = weighted_mean(table, packet, Weight::T, Quantity::dJ);
  const double jr = weighted_mean(table, packet, Weight::R, Quantity::dJminusdF);
  const double inv = 1.0 / units::hbar_over_m(mass);
  s.tr = inv * ((jt + L2) / s.k_tr_out + L1 / s.k0 + a * (1.0 / s.k_tr_out - 1.0 / s.k0));
  s.ref = inv * ((jr + L1) / s.k_ref_out + L1 / s.k0 + a * (1.0 / s.k_ref_out - 1.0 / s.k0));
  return s;
}

MomentumShifts momentum_shifts(const ParamTable& table, const SpectralPacket& packet, double l0) {
  MomentumShifts m;
  m.k0 = packet.mean_k();
  m.T_in = weight_fraction(table, packet, Weight::T);
  m.R_in = weight_fraction(table, packet, Weight::R);
  m.dT_in = weighted_mean(table, packet, Weight::Unit, Quantity::dT);
  m.dk_tr = weighted_mean(table, packet, Weight::T, Quantity::K) - m.k0;
  m.dk_ref = weighted_mean(table, packet, Weight::R, Quantity::K) - m.k0;
  m.predicted = m.dT_in / (4.0 * l0 * l0);
  return m;
}

}  // namespace qsplit
