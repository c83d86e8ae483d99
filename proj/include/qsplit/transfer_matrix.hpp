#pragma once

#include <complex>

#include "qsplit/potential.hpp"

namespace qsplit {

using Complex = std::complex<double>;

struct Mat2 {
  Complex m00, m01, m10, m11;

  Complex det() const { return m00 * m11 - m01 * m10; }
  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

Mat2 operator*(const Mat2& x, const Mat2& y);

/// Local solution type of psi'' = (2m/hbar^2)(V - E) psi inside a segment.
struct LocalWave {
  enum class Kind { Evanescent, Oscillatory, Flat };
  Kind kind = Kind::Flat;
  double rate = 0.0;  // kappa (evanescent) or K (oscillatory), nm^-1
};

LocalWave local_wave(double k, double height, double mass);

/// Real 2x2 matrix carrying (psi, psi') across a constant-potential interval
/// of length `dx` (dx may be negative).
struct RealMat2 {
  double m00, m01, m10, m11;
};

RealMat2 segment_propagator(const LocalWave& w, double dx);

/// Transfer matrix Y: (A_in, B_out) = Y (A_out, B_in), with amplitudes of
/// e^{ikx} and e^{-ikx} referred to the absolute coordinate x.
Mat2 transfer_matrix(const Potential& pot, double k);

struct TunnelingParams {
  double k = 0.0;
  double T = 1.0;
  double R = 0.0;
  double J = 0.0;  // rad, principal value
  double F = 0.0;  // rad, principal value
  Complex q{1.0, 0.0};
  Complex p{0.0, 0.0};
};

/// Below this R the reflection phase F is undefined and reported as 0.
inline constexpr double kFullTransmissionR = 1e-14;

TunnelingParams tunneling_params(const Potential& pot, double k);

struct ParamDerivatives {
  double dT = 0.0;
  double dR = 0.0;
  double dJ = 0.0;
  double dF = 0.0;
};

/// Five-point central differences in k. J is unwrapped modulo 2pi; F modulo
/// pi, since F jumps by pi where the reflection amplitude passes through 0.
ParamDerivatives params_derivatives(const Potential& pot, double k, double h = 1e-4);

/// Default stencil step used by tables and timing.
inline constexpr double kDefaultDerivativeStep = 1e-4;

/// Reduce `x` into (-period/2, period/2].
double reduce_mod(double x, double period);

/// Five-point derivative of a phase-like function sampled at k-2h..k+2h.
/// Adjacent samples are unwrapped modulo `period`; a residual jump above
/// period/4 throws StepTooLarge.
double stencil_derivative(const double (&samples)[5], double h, double period);

}  // namespace qsplit
