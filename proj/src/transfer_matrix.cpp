#include "qsplit/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsplit/errors.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

constexpr Complex kI{0.0, 1.0};

// sinh(x)/x and sin(x)/x without cancellation near 0.
double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void require_positive_k(double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::NonPositiveK, "k must be positive, got " + std::to_string(k));
}

RealMat2 mul(const RealMat2& x, const RealMat2& y) {
  return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
          x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

}  // namespace

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
          x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

LocalWave local_wave(double k, double height, double mass) {
  const double diff = height - units::energy(k, mass);
  if (diff == 0.0) return {LocalWave::Kind::Flat, 0.0};
  const double rate = std::sqrt(std::abs(diff) * units::two_m_over_hbar2(mass));
  return {diff > 0.0 ? LocalWave::Kind::Evanescent : LocalWave::Kind::Oscillatory, rate};
}

RealMat2 segment_propagator(const LocalWave& w, double dx) {
  const double x = w.rate * dx;
  switch (w.kind) {
    case LocalWave::Kind::Evanescent: {
      const double c = std::cosh(x);
      const double s = std::sinh(x);
      return {c, dx * sinhc(x), w.rate * s, c};
    }
    case LocalWave::Kind::Oscillatory: {
      const double c = std::cos(x);
      const double s = std::sin(x);
      return {c, dx * sinc(x), -w.rate * s, c};
    }
    case LocalWave::Kind::Flat:
      break;
  }
  return {1.0, dx, 0.0, 1.0};
}

Mat2 transfer_matrix(const Potential& pot, double k) {
  require_positive_k(k);
  const double mass = pot.mass();

  // M carries (psi, psi') from x = a to x = b.
  RealMat2 m{1.0, 0.0, 0.0, 1.0};
  if (pot.is_delta()) {
    m.m10 = pot.delta()->strength * units::two_m_over_hbar2(mass);
  } else {
    for (const Segment& s : pot.segments())
      m = mul(segment_propagator(local_wave(k, s.height, mass), s.width), m);
  }
  // det M = 1, so the inverse is the adjugate.
  const RealMat2 minv{m.m11, -m.m01, -m.m10, m.m00};

  const Complex eb = std::polar(1.0, k * pot.b());
  const Complex ea = std::polar(1.0, k * pot.a());
  const Complex ik = kI * k;

  // Columns of P(b): (psi, psi') for unit e^{ikx} and e^{-ikx} at x = b.
  const Complex psi_p = eb, dpsi_p = ik * eb;
  const Complex psi_m = 1.0 / eb, dpsi_m = -ik / eb;

  auto to_left_amplitudes = [&](Complex psi, Complex dpsi) {
    const Complex pa = minv.m00 * psi + minv.m01 * dpsi;
    const Complex dpa = minv.m10 * psi + minv.m11 * dpsi;
    const Complex amp_plus = 0.5 * (pa + dpa / ik) / ea;
    const Complex amp_minus = 0.5 * (pa - dpa / ik) * ea;
    return std::pair{amp_plus, amp_minus};
  };

  const auto [y00, y10] = to_left_amplitudes(psi_p, dpsi_p);
  const auto [y01, y11] = to_left_amplitudes(psi_m, dpsi_m);
  return {y00, y01, y10, y11};
}

double reduce_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r > 0.5 * period) r -= period;
  if (r <= -0.5 * period) r += period;
  return r;
}

TunnelingParams tunneling_params(const Potential& pot, double k) {
  const Mat2 y = transfer_matrix(pot, k);
  TunnelingParams out;
  out.k = k;
  out.q = y.m00;
  out.p = y.m01;
  const double q2 = std::norm(out.q);
  out.T = 1.0 / q2;
  out.R = std::norm(out.p) / q2;
  out.J = reduce_mod(k * pot.width() - std::arg(out.q), 2.0 * units::kPi);
  out.F = out.R >= kFullTransmissionR
              ? reduce_mod(std::arg(out.p) - 0.5 * units::kPi + k * pot.sum(), 2.0 * units::kPi)
              : 0.0;
  return out;
}

double stencil_derivative(const double (&samples)[5], double h, double period) {
  double f[5];
  f[0] = samples[0];
  for (int i = 1; i < 5; ++i) {
    double step = samples[i] - samples[i - 1];
    if (period > 0.0) {
      const double reduced = reduce_mod(step, period);
      if (std::abs(reduced) > 0.25 * period)
        throw Error(ErrorKind::StepTooLarge,
                    "phase jump " + std::to_string(reduced) + " between stencil points");
      step = reduced;
    }
    f[i] = f[i - 1] + step;
  }
  return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}

ParamDerivatives params_derivatives(const Potential& pot, double k, double h) {
  require_positive_k(k);
  if (!(h > 0.0) || !(k - 2.0 * h > 0.0))
    throw Error(ErrorKind::StepTooLarge, "stencil k - 2h must stay positive");

  double T[5], R[5], J[5], F[5];
  for (int i = 0; i < 5; ++i) {
    const TunnelingParams tp = tunneling_params(pot, k + (i - 2) * h);
    T[i] = tp.T;
    R[i] = tp.R;
    J[i] = tp.J;
    F[i] = tp.F;
  }
  ParamDerivatives d;
  d.dT = stencil_derivative(T, h, 0.0);
  d.dR = stencil_derivative(R, h, 0.0);
  d.dJ = stencil_derivative(J, h, 2.0 * units::kPi);
  const bool defined = std::all_of(std::begin(R), std::end(R), [](double r) { return r >= kFullTransmissionR; });
  d.dF = defined ? stencil_derivative(F, h, units::kPi) : 0.0;
  return d;
}

}  // namespace qsplit
