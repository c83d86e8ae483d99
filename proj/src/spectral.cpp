#include "qsplit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "qsplit/errors.hpp"
#include "qsplit/parallel.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

constexpr double kTwoPi = 2.0 * units::kPi;

void unwrap(std::vector<double>& v, double period) {
  for (std::size_t j = 1; j < v.size(); ++j)
    v[j] = v[j - 1] + reduce_mod(v[j] - v[j - 1], period);
}

std::mutex& fftw_planner_lock() {
  static std::mutex m;
  return m;
}

// In-place length-N transform of `data` (already zero-padded).
void fft_inplace(std::vector<Complex>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_lock());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_lock());
  fftw_destroy_plan(plan);
}

// sum_j amp_j e^{s i k_j x_m} on x_m = x0 + m dx, dx = 2 pi / (N dk).
std::vector<Complex> plane_wave_sum(const KGrid& g, std::span<const Complex> amp, double sign,
                                    double x0, std::size_t big_n, std::size_t m_count) {
  std::vector<Complex> buf(big_n, Complex{});
  const double dk = g.dk();
  for (std::size_t j = 0; j < amp.size(); ++j)
    buf[j] = amp[j] * std::polar(1.0, sign * static_cast<double>(j) * dk * x0);
  fft_inplace(buf, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD);
  const double dx = kTwoPi / (static_cast<double>(big_n) * dk);
  std::vector<Complex> out(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double x = x0 + static_cast<double>(m) * dx;
    out[m] = buf[m] * std::polar(1.0, sign * g.k_min * x);
  }
  return out;
}

}  // namespace

std::vector<double> KGrid::points() const {
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) k[j] = at(j);
  return k;
}

KGrid make_kgrid(double k0, double l0, std::size_t n, double span_sigmas) {
  if (n < 2) throw Error(ErrorKind::Config, "k-grid needs at least 2 points");
  if (!(l0 > 0.0)) throw Error(ErrorKind::Config, "l0 must be positive");
  const double half = span_sigmas / (std::sqrt(2.0) * l0);
  KGrid g{k0 - half, k0 + half, n};
  if (!(g.k_min > 0.0))
    throw Error(ErrorKind::SpectrumLeaksNegativeK,
                "k-grid lower edge " + std::to_string(g.k_min) + " is not positive");
  return g;
}

double SpectralPacket::norm2() const {
  double s = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) s += grid.weight(j) * std::norm(amps[j]);
  return s;
}

double SpectralPacket::mean_k() const {
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) {
    const double p = grid.weight(j) * std::norm(amps[j]);
    s += p * grid.at(j);
    w += p;
  }
  if (!(w > 0.0)) throw Error(ErrorKind::ZeroNorm, "packet has zero norm");
  return s / w;
}

double gaussian_prefactor(double l0) { return std::pow(2.0 * l0 * l0 / units::kPi, 0.25); }

SpectralPacket gaussian_spectrum(double l0, double k0, const KGrid& grid) {
  if (!(k0 > 0.0)) throw Error(ErrorKind::SpectrumLeaksNegativeK, "k0 must be positive");
  if (!(grid.k_min > 0.0))
    throw Error(ErrorKind::SpectrumLeaksNegativeK, "k-grid reaches k <= 0");
  const double leak = 0.5 * std::erfc(std::sqrt(2.0) * l0 * k0);
  if (leak > kNegativeKMass)
    throw Error(ErrorKind::SpectrumLeaksNegativeK,
                "Gaussian weight at k <= 0 is " + std::to_string(leak));
  auto rel = [&](double k) { return std::exp(-l0 * l0 * (k - k0) * (k - k0)); };
  const double peak = (k0 >= grid.k_min && k0 <= grid.k_max)
                          ? 1.0
                          : std::max(rel(grid.k_min), rel(grid.k_max));
  if (rel(grid.k_min) >= kEdgeCutoff * peak || rel(grid.k_max) >= kEdgeCutoff * peak)
    throw Error(ErrorKind::GridTruncated, "Gaussian not negligible at the k-grid edges");

  SpectralPacket p;
  p.grid = grid;
  p.kind = PacketKind::FullIn;
  p.amps.resize(grid.n);
  const double amp = gaussian_prefactor(l0);
  for (std::size_t j = 0; j < grid.n; ++j) p.amps[j] = amp * rel(grid.at(j));
  return p;
}

ParamTable build_param_table(const Potential& pot, const KGrid& grid, double h) {
  ParamTable t;
  t.grid = grid;
  const std::size_t n = grid.n;
  t.params.resize(n);
  t.T.resize(n);
  t.R.resize(n);
  t.J.resize(n);
  t.F.resize(n);
  t.dT.resize(n);
  t.dR.resize(n);
  t.dJ.resize(n);
  t.dF.resize(n);
  t.has_lambda = pot.symmetric();
  if (t.has_lambda) {
    t.lambda.resize(n);
    t.dlambda.resize(n);
  }
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const double k = grid.at(j);
      const TunnelingParams tp = tunneling_params(pot, k);
      const ParamDerivatives d = params_derivatives(pot, k, h);
      t.params[j] = tp;
      t.T[j] = tp.T;
      t.R[j] = tp.R;
      t.J[j] = tp.J;
      t.F[j] = tp.F;
      t.dT[j] = d.dT;
      t.dR[j] = d.dR;
      t.dJ[j] = d.dJ;
      t.dF[j] = d.dF;
      if (t.has_lambda) {
        t.lambda[j] = lambda_at(pot, k);
        t.dlambda[j] = lambda_derivative(pot, k, h);
      }
    }
  });
  unwrap(t.J, kTwoPi);
  unwrap(t.F, kTwoPi);
  return t;
}

void check_nyquist(const KGrid& grid, double x_abs_max) {
  if (grid.dk() * x_abs_max > units::kPi)
    throw Error(ErrorKind::GridTooCoarse, "dk * max|x| = " +
                                              std::to_string(grid.dk() * x_abs_max) + " > pi");
}

SpectralPacket asymptote(const SpectralPacket& incident, Asymptote which, const ParamTable& table,
                         const Potential& pot, double t) {
  if ((which == Asymptote::InTr || which == Asymptote::InRef) && !table.has_lambda)
    throw Error(ErrorKind::AsymmetricPotential, "in-asymptote split needs Lambda(k)");
  SpectralPacket out;
  out.grid = incident.grid;
  out.t0 = t;
  out.amps.resize(incident.amps.size());
  const double mass = pot.mass();
  for (std::size_t j = 0; j < out.amps.size(); ++j) {
    const double k = incident.grid.at(j);
    const double wt = units::energy(k, mass) * t / units::kHbar;
    const Complex a = incident.amps[j];
    const double sT = std::sqrt(table.T[j]);
    const double sR = std::sqrt(std::max(0.0, table.R[j]));
    double mod = 1.0, phase = -wt;
    switch (which) {
      case Asymptote::InFull:
        break;
      case Asymptote::OutTr:
        mod = sT;
        phase += table.J[j] - k * pot.width();
        break;
      case Asymptote::OutRef:
        mod = sR;
        phase += table.J[j] - table.F[j] - 0.5 * units::kPi + 2.0 * k * pot.a();
        break;
      case Asymptote::InTr: {
        const double lam = table.lambda[j];
        const double alpha = lam >= 0.0 ? 1.0 : -1.0;
        mod = sT;
        phase += lam - alpha * 0.5 * units::kPi;
        break;
      }
      case Asymptote::InRef:
        mod = sR;
        phase += table.lambda[j];
        break;
    }
    out.amps[j] = a * std::polar(mod, phase);
  }
  switch (which) {
    case Asymptote::InFull: out.kind = PacketKind::FullIn; break;
    case Asymptote::OutTr:
    case Asymptote::InTr: out.kind = PacketKind::Tr; break;
    case Asymptote::OutRef:
    case Asymptote::InRef: out.kind = PacketKind::Ref; break;
  }
  out.reflected = which == Asymptote::OutRef;
  return out;
}

std::vector<Complex> free_field(const SpectralPacket& packet, std::span<const double> xs) {
  double xmax = 0.0;
  for (double x : xs) xmax = std::max(xmax, std::abs(x));
  check_nyquist(packet.grid, xmax);
  const double sign = packet.reflected ? -1.0 : 1.0;
  const double norm = 1.0 / std::sqrt(kTwoPi);
  std::vector<Complex> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      Complex s{};
      for (std::size_t j = 0; j < packet.amps.size(); ++j)
        s += packet.grid.weight(j) * packet.amps[j] *
             std::polar(1.0, sign * packet.grid.at(j) * xs[i]);
      out[i] = norm * s;
    }
  });
  return out;
}

std::vector<double> Frame::xs() const {
  std::vector<double> x(full.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0 + static_cast<double>(i) * dx;
  return x;
}

const std::vector<Complex>& Frame::channel(Channel c) const {
  switch (c) {
    case Channel::Tr: return tr;
    case Channel::Ref: return ref;
    case Channel::Full: break;
  }
  return full;
}

Synthesizer::Synthesizer(const Potential& pot, const SpectralPacket& incident,
                         const ParamTable& table)
    : pot_(pot), grid_(incident.grid), incident_(incident), decomposed_(pot.symmetric()) {
  if (table.grid.n != grid_.n || table.grid.k_min != grid_.k_min || table.grid.k_max != grid_.k_max)
    throw Error(ErrorKind::Config, "parameter table and packet use different k-grids");
  const std::size_t n = grid_.n;
  full_.resize(n);
  if (decomposed_) {
    tr_.resize(n);
    ref_.resize(n);
  }
  parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const TunnelingParams& tp = table.params[j];
      full_[j] = full_state(pot_, tp);
      if (!decomposed_) continue;
      ref_[j] = ref_state(pot_, tp, table.lambda[j]);
      tr_[j] = tr_state(full_[j], ref_[j]);
    }
  });
}

const StationaryState& Synthesizer::state(Channel c, std::size_t j) const {
  if (c != Channel::Full && !decomposed_)
    throw Error(ErrorKind::AsymmetricPotential, "tr/ref channels need a symmetric potential");
  switch (c) {
    case Channel::Tr: return tr_[j];
    case Channel::Ref: return ref_[j];
    case Channel::Full: break;
  }
  return full_[j];
}

std::vector<Complex> Synthesizer::coefficients(double t) const {
  std::vector<Complex> c(grid_.n);
  const double norm = 1.0 / std::sqrt(kTwoPi);
  for (std::size_t j = 0; j < grid_.n; ++j) {
    const double k = grid_.at(j);
    const double phase = -units::energy(k, pot_.mass()) * t / units::kHbar;
    c[j] = norm * grid_.weight(j) * incident_.amps[j] * std::polar(1.0, phase);
  }
  return c;
}

std::vector<Complex> Synthesizer::field(Channel ch, double t, std::span<const double> xs) const {
  if (ch != Channel::Full && !decomposed_)
    throw Error(ErrorKind::AsymmetricPotential, "tr/ref channels need a symmetric potential");
  double xmax = 0.0;
  for (double x : xs) xmax = std::max(xmax, std::abs(x));
  check_nyquist(grid_, xmax);

  const std::size_t n = grid_.n;
  const std::vector<Complex> c = coefficients(t);
  std::vector<Complex> lp(n), lm(n), rp(n), rm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const StationaryState& s = state(ch, j);
    lp[j] = c[j] * s.left_plus;
    lm[j] = c[j] * s.left_minus;
    rp[j] = c[j] * s.right_plus;
    rm[j] = c[j] * s.right_minus;
  }
  const double a = pot_.a(), b = pot_.b(), dk = grid_.dk();

  std::vector<Complex> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = xs[i];
      if (x >= a && x < b) {
        Complex s{};
        for (std::size_t j = 0; j < n; ++j) s += c[j] * state(ch, j).value(x);
        out[i] = s;
        continue;
      }
      const auto& ap = x < a ? lp : rp;
      const auto& am = x < a ? lm : rm;
      const Complex step = std::polar(1.0, dk * x);
      Complex z;
      Complex s{};
      for (std::size_t j = 0; j < n; ++j) {
        // Refresh the phasor periodically to bound recurrence drift.
        if (j % 64 == 0) z = std::polar(1.0, grid_.at(j) * x);
        s += ap[j] * z + am[j] * std::conj(z);
        z *= step;
      }
      out[i] = s;
    }
  });
  return out;
}

Frame Synthesizer::frame(double t, double x_lo, double x_hi, double dx_max) const {
  if (!(x_hi > x_lo) || !(dx_max > 0.0)) throw Error(ErrorKind::Config, "bad frame window");
  check_nyquist(grid_, std::max(std::abs(x_lo), std::abs(x_hi)));
  const std::size_t n = grid_.n;
  const double dk = grid_.dk();
  const double period = kTwoPi / dk;
  std::size_t big_n = 1;
  while (big_n < n || period / static_cast<double>(big_n) > dx_max) big_n <<= 1;
  const double dx = period / static_cast<double>(big_n);
  const auto m_count = static_cast<std::size_t>(std::floor((x_hi - x_lo) / dx)) + 1;
  if (m_count > big_n) throw Error(ErrorKind::GridTooCoarse, "frame wider than the k-grid period");

  const std::vector<Complex> c = coefficients(t);
  std::vector<Complex> lm(n), rp(n);
  for (std::size_t j = 0; j < n; ++j) {
    lm[j] = c[j] * full_[j].left_minus;
    rp[j] = c[j] * full_[j].right_plus;
  }
  const auto f_lp = plane_wave_sum(grid_, c, 1.0, x_lo, big_n, m_count);
  const auto f_lm = plane_wave_sum(grid_, lm, -1.0, x_lo, big_n, m_count);
  const auto f_rp = plane_wave_sum(grid_, rp, 1.0, x_lo, big_n, m_count);
  std::vector<Complex> r_lp, r_lm;
  if (decomposed_) {
    std::vector<Complex> ap(n), am(n);
    for (std::size_t j = 0; j < n; ++j) {
      ap[j] = c[j] * ref_[j].left_plus;
      am[j] = c[j] * ref_[j].left_minus;
    }
    r_lp = plane_wave_sum(grid_, ap, 1.0, x_lo, big_n, m_count);
    r_lm = plane_wave_sum(grid_, am, -1.0, x_lo, big_n, m_count);
  }

  Frame fr;
  fr.t = t;
  fr.x0 = x_lo;
  fr.dx = dx;
  fr.full.resize(m_count);
  if (decomposed_) {
    fr.tr.resize(m_count);
    fr.ref.resize(m_count);
  }
  const double a = pot_.a(), b = pot_.b();
  std::vector<std::size_t> interior;
  for (std::size_t m = 0; m < m_count; ++m) {
    const double x = x_lo + static_cast<double>(m) * dx;
    if (x >= a && x < b) {
      interior.push_back(m);
      continue;
    }
    if (x < a) {
      fr.full[m] = f_lp[m] + f_lm[m];
      if (decomposed_) {
        fr.ref[m] = r_lp[m] + r_lm[m];
        fr.tr[m] = fr.full[m] - fr.ref[m];
      }
    } else {
      fr.full[m] = f_rp[m];
      if (decomposed_) fr.tr[m] = fr.full[m];
    }
  }
  parallel_for(interior.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t m = interior[i];
      const double x = x_lo + static_cast<double>(m) * dx;
      Complex sf{}, sr{};
      for (std::size_t j = 0; j < n; ++j) {
        sf += c[j] * full_[j].value(x);
        if (decomposed_) sr += c[j] * ref_[j].value(x);
      }
      fr.full[m] = sf;
      if (decomposed_) {
        fr.ref[m] = sr;
        fr.tr[m] = sf - sr;
      }
    }
  });
  return fr;
}

}  // namespace qsplit
