#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "qsplit/potential.hpp"
#include "qsplit/units.hpp"

namespace testing_support {

using Complex = std::complex<double>;

/// Left-side plane-wave amplitudes of the solution that is e^{ikx} for x >= b,
/// found by RK4 integration of psi'' = (m/C)(V - E) psi from b down to a.
struct Rk4Result {
  Complex a_in;   // coefficient of e^{ikx} at x < a
  Complex b_out;  // coefficient of e^{-ikx} at x < a
  double T() const { return 1.0 / std::norm(a_in); }
  double R() const { return std::norm(b_out) / std::norm(a_in); }
};

struct State {
  Complex psi, dpsi;
};

inline State rk4_step(State s, double h, double coef) {
  auto f = [&](const State& y) { return State{y.dpsi, coef * y.psi}; };
  const State k1 = f(s);
  const State k2 = f({s.psi + 0.5 * h * k1.psi, s.dpsi + 0.5 * h * k1.dpsi});
  const State k3 = f({s.psi + 0.5 * h * k2.psi, s.dpsi + 0.5 * h * k2.dpsi});
  const State k4 = f({s.psi + h * k3.psi, s.dpsi + h * k3.dpsi});
  return {s.psi + h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
          s.dpsi + h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
}

/// Integrates from b down to `x_stop` (>= a is allowed) and returns the state there.
inline State rk4_state(const qsplit::Potential& pot, double k, double x_stop, int steps_per_nm = 4000) {
  const double m = pot.mass();
  const double E = qsplit::units::energy(k, m);
  const Complex I{0.0, 1.0};
  State s{std::polar(1.0, k * pot.b()), I * k * std::polar(1.0, k * pot.b())};
  if (pot.is_delta()) {
    if (x_stop < pot.a()) {
      s.dpsi -= qsplit::units::two_m_over_hbar2(m) * pot.delta()->strength * s.psi;
      const double h = x_stop - pot.a();
      s = {s.psi * std::cos(k * h) + s.dpsi * std::sin(k * h) / k,
           -k * s.psi * std::sin(k * h) + s.dpsi * std::cos(k * h)};
    }
    return s;
  }
  const auto edges = pot.edges();
  const auto segs = pot.segments();
  double x = pot.b();
  for (std::size_t i = segs.size(); i-- > 0;) {
    const double lo = std::max(edges[i], x_stop);
    if (lo >= x) break;
    const double coef = qsplit::units::two_m_over_hbar2(m) * (segs[i].height - E);
    const int n = std::max(8, static_cast<int>((x - lo) * steps_per_nm));
    const double h = (lo - x) / n;
    for (int j = 0; j < n; ++j) s = rk4_step(s, h, coef);
    x = lo;
  }
  if (x_stop < x) {
    const double h = x_stop - x;
    s = {s.psi * std::cos(k * h) + s.dpsi * std::sin(k * h) / k,
         -k * s.psi * std::sin(k * h) + s.dpsi * std::cos(k * h)};
  }
  return s;
}

inline Rk4Result rk4_scatter(const qsplit::Potential& pot, double k, int steps_per_nm = 4000) {
  const State s = rk4_state(pot, k, pot.a(), steps_per_nm);
  const Complex I{0.0, 1.0};
  const double a = pot.a();
  Rk4Result r;
  r.a_in = 0.5 * (s.psi + s.dpsi / (I * k)) * std::polar(1.0, -k * a);
  r.b_out = 0.5 * (s.psi - s.dpsi / (I * k)) * std::polar(1.0, k * a);
  return r;
}

/// Free Gaussian at time t: (2 pi l0^2)^{-1/4} (1 + i tau)^{-1/2}
/// exp(-(x - v t)^2 / (4 l0^2 (1 + i tau)) + i k0 (x - v t / 2)), tau = hbar t/(2 m l0^2).
inline Complex free_gaussian(double x, double t, double l0, double k0, double mass) {
  const double hm = qsplit::units::hbar_over_m(mass);
  const double tau = hm * t / (2.0 * l0 * l0);
  const double v = hm * k0;
  const Complex w{1.0, tau};
  const double pref = std::pow(2.0 * qsplit::units::kPi * l0 * l0, -0.25);
  const double y = x - v * t;
  return pref / std::sqrt(w) *
         std::exp(-y * y / (4.0 * l0 * l0 * w) + Complex{0.0, k0 * (x - 0.5 * v * t)});
}

/// Rectangular-barrier transmission, E != V0.
inline double rect_transmission(double V0, double d, double mass, double k) {
  const double E = qsplit::units::energy(k, mass);
  const double c = qsplit::units::two_m_over_hbar2(mass);
  if (E < V0) {
    const double kap = std::sqrt(c * (V0 - E));
    const double s = std::sinh(kap * d);
    return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (V0 - E)));
  }
  const double K = std::sqrt(c * (E - V0));
  const double s = std::sin(K * d);
  return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (E - V0)));
}

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

}  // namespace testing_support
