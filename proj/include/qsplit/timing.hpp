#pragma once

#include <string>

#include "qsplit/observables.hpp"
#include "qsplit/spectral.hpp"

namespace qsplit {

enum class TimeStatus { Ok, NoRoot };

std::string_view to_string(TimeStatus s);

/// Exact time from CM root-finding; `value` is meaningful only when Ok.
struct ExactTime {
  TimeStatus status = TimeStatus::NoRoot;
  double value = 0.0;    // fs
  double t_first = 0.0;  // fs, root that starts the interval
  double t_last = 0.0;   // fs, root that ends it
  std::string detail;
};

struct ExactTimes {
  ExactTime tr;
  ExactTime ref;
};

struct ExactTimeOptions {
  double t_lo = 0.0;     // fs
  double t_hi = 1200.0;  // fs
  double scan_dt = 1.0;  // fs
  double tol = 0.01;     // fs
  CmWindow window;
  /// Require ballistic CM motion over the last 10% of [t_lo, t_hi].
  bool check_window = true;
};

/// Transmission: largest root of CM_tr = b + L2 minus smallest root of
/// CM_tr = a - L1. Reflection: spread between the extreme roots of
/// CM_ref = a - L1.
ExactTimes exact_times(const Synthesizer& syn, double L1, double L2, const ExactTimeOptions& opt);

struct AsymptoticTimes {
  double tau_tr = 0.0;   // fs
  double tau_ref = 0.0;  // fs
  double d_eff_tr = 0.0;
  double d_eff_ref = 0.0;
  double x_start_tr = 0.0;
  double x_start_ref = 0.0;
  double k_tr = 0.0;   // <k>_in over T|A|^2
  double k_ref = 0.0;  // <k>_in over R|A|^2
  double T_in = 0.0;
  double R_in = 0.0;
};

AsymptoticTimes asymptotic_times(const ParamTable& table, const SpectralPacket& packet,
                                 double mass);

/// Interval times from the in/out asymptotes for given L1, L2.
double asymptotic_tr_time(const AsymptoticTimes& a, double L1, double L2, double mass);
double asymptotic_ref_time(const AsymptoticTimes& a, double L1, double mass);

struct Widths {
  double d_eff = 0.0;   // nm
  double x_start = 0.0; // nm
};

/// Effective width J' - Lambda' and starting point -Lambda' of a single
/// rectangular barrier (V0 > 0) or well (V0 < 0) of width d.
Widths rect_deff_xstart(double V0, double d, double mass, double k);

/// Below this |kappa d| the closed forms switch to their Taylor series.
inline constexpr double kSeriesThreshold = 0.1;

/// Delta spike of strength W: d_eff = 0, x_start = -g/(k^2 + g^2), g = mW/hbar^2.
Widths delta_deff_xstart(double W, double mass, double k);

/// x_start as printed for the delta spike: -2 m hbar^2 W / (hbar^4 k^2 + m^2 W^2).
double delta_xstart_printed(double W, double mass, double k);

struct SwpaTimes {
  double tr = 0.0;   // fs
  double ref = 0.0;  // fs
  double L1 = 0.0;
  double L2 = 0.0;
  double a = 0.0;
  double k_tr_out = 0.0;
  double k_ref_out = 0.0;  // <-k> of the reflected packet
  double k0 = 0.0;         // mean k of the incident packet
};

/// Legacy interval times of the standard wave-packet analysis.
SwpaTimes swpa_times(const ParamTable& table, const SpectralPacket& packet, double mass, double L1,
                     double L2, double a);

struct MomentumShifts {
  double k0 = 0.0;
  double T_in = 0.0;
  double R_in = 0.0;
  double dT_in = 0.0;   // <T'>_in
  double dk_tr = 0.0;   // <k>_tr - k0
  double dk_ref = 0.0;  // <-k>_ref - k0
  double predicted = 0.0;  // <T'>_in / (4 l0^2)
};

MomentumShifts momentum_shifts(const ParamTable& table, const SpectralPacket& packet, double l0);

struct TimingReport {
  double L1 = 0.0;
  double L2 = 0.0;
  ExactTimes exact;
  AsymptoticTimes asym;
  double tau_tr_L = 0.0;
  double tau_ref_L = 0.0;
  SwpaTimes swpa;
  MomentumShifts shifts;
};

}  // namespace qsplit
