#include "qsplit/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsplit/errors.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Slope {
  Complex psi, dpsi;
};

Slope carry(const LocalWave& w, double dx, Complex psi, Complex dpsi) {
  const RealMat2 m = segment_propagator(w, dx);
  return {m.m00 * psi + m.m01 * dpsi, m.m10 * psi + m.m11 * dpsi};
}

void require_symmetric(const Potential& pot) {
  if (!pot.symmetric())
    throw Error(ErrorKind::AsymmetricPotential,
                "transmission/reflection split needs a mirror-symmetric potential");
}

StationaryState skeleton(const Potential& pot, double k, Channel ch) {
  StationaryState s;
  s.k = k;
  s.mass = pot.mass();
  s.channel = ch;
  s.a = pot.a();
  s.b = pot.b();
  s.x_mid = pot.midpoint();
  s.pieces = interior_pieces(pot, k);
  return s;
}

struct OddFit {
  Complex scale;      // multiplies the odd solution u
  double mismatch;    // relative, dimensionless
  std::vector<Slope> centre;  // u at each piece centre left of x_mid
};

// u solves the stationary equation with u(x_mid) = 0, u'(x_mid) = 1 and is
// carried back to x = a; the reflected left-side wave must match c*u there.
OddFit fit_odd(const StationaryState& s, Complex a_plus, Complex a_minus) {
  OddFit fit;
  fit.centre.assign(s.pieces.size(), Slope{});
  Complex u = 0.0, du = 1.0;
  for (std::size_t i = s.pieces.size(); i-- > 0;) {
    const Piece& p = s.pieces[i];
    if (p.x_lo >= s.x_mid) continue;
    const Slope c = carry(p.wave, p.xc - p.x_hi, u, du);
    fit.centre[i] = c;
    const Slope lo = carry(p.wave, p.x_lo - p.x_hi, u, du);
    u = lo.psi;
    du = lo.dpsi;
  }
  const double k = s.k;
  const Complex e = std::polar(1.0, k * s.a);
  const Complex psi = a_plus * e + a_minus / e;
  const Complex dpsi = kI * k * (a_plus * e - a_minus / e);
  const double norm = std::abs(a_plus) + std::abs(a_minus);
  if (norm == 0.0) {
    fit.scale = 0.0;
    fit.mismatch = 0.0;
    return fit;
  }
  if (k * std::abs(u) >= std::abs(du)) {
    fit.scale = psi / u;
    fit.mismatch = std::abs(fit.scale * du - dpsi) / (k * norm);
  } else {
    fit.scale = dpsi / du;
    fit.mismatch = std::abs(fit.scale * u - psi) / norm;
  }
  return fit;
}

StationaryState zero_ref(const Potential& pot, double k) {
  StationaryState s = skeleton(pot, k, Channel::Ref);
  for (Piece& p : s.pieces) p.psi = p.dpsi = 0.0;
  return s;
}

}  // namespace

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Full: return "full";
    case Channel::Tr: return "tr";
    case Channel::Ref: return "ref";
  }
  return "?";
}

Complex StationaryState::value(double x) const {
  if (x < a) {
    const Complex e = std::polar(1.0, k * x);
    return left_plus * e + left_minus / e;
  }
  if (x >= b) {
    if (right_plus == 0.0 && right_minus == 0.0) return 0.0;
    const Complex e = std::polar(1.0, k * x);
    return right_plus * e + right_minus / e;
  }
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](double v, const Piece& p) { return v < p.x_lo; });
  const Piece& p = *(it - 1);
  return carry(p.wave, x - p.xc, p.psi, p.dpsi).psi;
}

Complex StationaryState::slope(double x) const {
  const Complex ik = kI * k;
  if (x < a) {
    const Complex e = std::polar(1.0, k * x);
    return ik * (left_plus * e - left_minus / e);
  }
  if (x >= b) {
    const Complex e = std::polar(1.0, k * x);
    return ik * (right_plus * e - right_minus / e);
  }
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](double v, const Piece& p) { return v < p.x_lo; });
  const Piece& p = *(it - 1);
  return carry(p.wave, x - p.xc, p.psi, p.dpsi).dpsi;
}

double StationaryState::current(double x) const {
  return units::hbar_over_m(mass) * std::imag(std::conj(value(x)) * slope(x));
}

std::vector<Piece> interior_pieces(const Potential& pot, double k) {
  std::vector<Piece> out;
  if (pot.is_delta()) return out;
  const auto edges = pot.edges();
  const auto segs = pot.segments();
  const double xm = pot.midpoint();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const LocalWave w = local_wave(k, segs[i].height, pot.mass());
    const double lo = edges[i];
    const double hi = edges[i + 1];
    auto push = [&](double l, double h) {
      Piece p;
      p.x_lo = l;
      p.x_hi = h;
      p.xc = 0.5 * (l + h);
      p.wave = w;
      out.push_back(p);
    };
    if (lo < xm && xm < hi) {
      push(lo, xm);
      push(xm, hi);
    } else {
      push(lo, hi);
    }
  }
  return out;
}

StationaryState full_state(const Potential& pot, const TunnelingParams& tp) {
  const double k = tp.k;
  StationaryState s = skeleton(pot, k, Channel::Full);
  s.left_plus = 1.0;
  s.left_minus = std::conj(tp.p) / tp.q;
  s.right_plus = 1.0 / tp.q;
  s.right_minus = 0.0;
  s.flux = units::hbar_over_m(pot.mass()) * k * tp.T;

  // Backward from b: the transmitted side fixes the solution uniquely.
  Complex psi = s.right_plus * std::polar(1.0, k * s.b);
  Complex dpsi = kI * k * psi;
  for (std::size_t i = s.pieces.size(); i-- > 0;) {
    Piece& p = s.pieces[i];
    const Slope c = carry(p.wave, p.xc - p.x_hi, psi, dpsi);
    p.psi = c.psi;
    p.dpsi = c.dpsi;
    const Slope lo = carry(p.wave, p.x_lo - p.x_hi, psi, dpsi);
    psi = lo.psi;
    dpsi = lo.dpsi;
  }
  return s;
}

LambdaRoots lambda_roots(const TunnelingParams& tp) {
  if (tp.R < kFullTransmissionR)
    throw Error(ErrorKind::FullTransmission,
                "R = " + std::to_string(tp.R) + " at k = " + std::to_string(tp.k));
  const double lam = std::atan2(std::sqrt(tp.T), std::sqrt(tp.R));
  return {lam, -lam};
}

double parity_mismatch(const Potential& pot, const TunnelingParams& tp, double lambda) {
  const StationaryState s = skeleton(pot, tp.k, Channel::Ref);
  return fit_odd(s, std::polar(std::sqrt(tp.R), lambda), std::conj(tp.p) / tp.q).mismatch;
}

double odd_root_by_probe(const Potential& pot, const TunnelingParams& tp) {
  require_symmetric(pot);
  const LambdaRoots r = lambda_roots(tp);
  return parity_mismatch(pot, tp, r.plus) <= parity_mismatch(pot, tp, r.minus) ? r.plus : r.minus;
}

double select_odd_root(const Potential& pot, const TunnelingParams& tp) {
  require_symmetric(pot);
  const LambdaRoots r = lambda_roots(tp);
  const double f = reduce_mod(tp.F, 2.0 * units::kPi);
  double chosen;
  if (std::abs(f) < 1e-6) {
    chosen = r.plus;
  } else if (std::abs(f) > units::kPi - 1e-6) {
    chosen = r.minus;
  } else {
    throw Error(ErrorKind::ParityMismatch,
                "F = " + std::to_string(f) + " is neither 0 nor pi at k = " + std::to_string(tp.k));
  }
  const double mis = parity_mismatch(pot, tp, chosen);
  if (!(mis <= kParityTolerance))
    throw Error(ErrorKind::ParityMismatch, "F-rule root fails the odd-parity probe (mismatch " +
                                               std::to_string(mis) + ") at k = " +
                                               std::to_string(tp.k));
  return chosen;
}

StationaryState ref_state(const Potential& pot, const TunnelingParams& tp, double lambda) {
  require_symmetric(pot);
  if (tp.R < kFullTransmissionR) return zero_ref(pot, tp.k);

  StationaryState s = skeleton(pot, tp.k, Channel::Ref);
  s.lambda = lambda;
  s.left_plus = std::polar(std::sqrt(tp.R), lambda);
  s.left_minus = std::conj(tp.p) / tp.q;
  s.right_plus = s.right_minus = 0.0;
  s.flux = 0.0;

  const OddFit fit = fit_odd(s, s.left_plus, s.left_minus);
  if (!(fit.mismatch <= kParityTolerance))
    throw Error(ErrorKind::ParityMismatch, "reflected wave is not odd about x_mid (mismatch " +
                                               std::to_string(fit.mismatch) + ")");
  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    Piece& p = s.pieces[i];
    if (p.x_lo >= s.x_mid) {
      p.psi = p.dpsi = 0.0;
    } else {
      p.psi = fit.scale * fit.centre[i].psi;
      p.dpsi = fit.scale * fit.centre[i].dpsi;
    }
  }
  return s;
}

StationaryState tr_state(const StationaryState& full, const StationaryState& ref) {
  StationaryState s = full;
  s.channel = Channel::Tr;
  s.lambda = ref.lambda;
  s.left_plus -= ref.left_plus;
  s.left_minus -= ref.left_minus;
  s.right_plus -= ref.right_plus;
  s.right_minus -= ref.right_minus;
  for (std::size_t i = 0; i < s.pieces.size(); ++i) {
    s.pieces[i].psi -= ref.pieces[i].psi;
    s.pieces[i].dpsi -= ref.pieces[i].dpsi;
  }
  return s;
}

StationaryState tr_state(const Potential& pot, const TunnelingParams& tp, double lambda) {
  return tr_state(full_state(pot, tp), ref_state(pot, tp, lambda));
}

double lambda_at(const Potential& pot, double k) {
  const TunnelingParams tp = tunneling_params(pot, k);
  // At R = 0 both roots sit at +-pi/2, which coincide modulo pi.
  if (tp.R < kFullTransmissionR) return 0.5 * units::kPi;
  return select_odd_root(pot, tp);
}

double lambda_derivative(const Potential& pot, double k, double h) {
  if (!(h > 0.0) || !(k - 2.0 * h > 0.0))
    throw Error(ErrorKind::StepTooLarge, "stencil k - 2h must stay positive");
  double v[5];
  for (int i = 0; i < 5; ++i) v[i] = lambda_at(pot, k + (i - 2) * h);
  return stencil_derivative(v, h, units::kPi);
}

AmplitudeSet problem_amplitudes(const TunnelingParams& tp) {
  return {1.0, std::conj(tp.p) / tp.q, 1.0 / tp.q, 0.0};
}

AmplitudeSet auxiliary_ref_amplitudes(const TunnelingParams& tp) {
  const double q2 = std::norm(tp.q);
  return {std::norm(tp.p) / q2, std::conj(tp.p) / tp.q, 0.0, std::conj(tp.p) / q2};
}

AmplitudeSet auxiliary_tr_amplitudes(const TunnelingParams& tp) {
  const double q2 = std::norm(tp.q);
  return {1.0 / q2, 0.0, 1.0 / tp.q, -std::conj(tp.p) / q2};
}

Mat2 scattering_matrix(const TunnelingParams& tp) {
  return {1.0 / tp.q, -tp.p / tp.q, std::conj(tp.p) / tp.q, 1.0 / tp.q};
}

int matching_mu(double lambda) { return lambda >= 0.0 ? 1 : -1; }

EigenSolution smatrix_eigensolutions(const TunnelingParams& tp, int mu) {
  if (tp.R < kFullTransmissionR)
    throw Error(ErrorKind::FullTransmission, "eigenvector direction i mu p/|p| undefined for p = 0");
  const double ap = std::abs(tp.p);
  const Complex imp = kI * static_cast<double>(mu) * ap;
  const Complex denom = 1.0 + imp;
  const Complex phase = imp / tp.p;  // i mu |p| / p

  EigenSolution out;
  out.mu = mu;
  out.eigenvalue = denom / tp.q;
  out.reflection = {imp / denom, std::conj(tp.p) / tp.q, imp / tp.q, std::conj(tp.p) / denom};
  out.transmission = {1.0 / denom, -phase / tp.q, 1.0 / tp.q, -phase / denom};

  const Mat2 s = scattering_matrix(tp);
  auto residual = [&](const AmplitudeSet& v) {
    const Complex o0 = s.m00 * v.a_in + s.m01 * v.b_in;
    const Complex o1 = s.m10 * v.a_in + s.m11 * v.b_in;
    const double scale = std::hypot(std::abs(v.a_in), std::abs(v.b_in));
    const double eig = std::hypot(std::abs(o0 - out.eigenvalue * v.a_in),
                                  std::abs(o1 - out.eigenvalue * v.b_in));
    const double outs = std::hypot(std::abs(o0 - v.a_out), std::abs(o1 - v.b_out));
    return std::max(eig, outs) / scale;
  };
  out.residual = std::max(residual(out.reflection), residual(out.transmission));
  return out;
}

}  // namespace qsplit
