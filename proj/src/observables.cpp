#include "qsplit/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qsplit/errors.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorKind::Config, "grid and field sizes differ");
}

double quantity_at(const ParamTable& t, std::size_t j, Quantity q) {
  switch (q) {
    case Quantity::One: return 1.0;
    case Quantity::K: return t.grid.at(j);
    case Quantity::T: return t.T[j];
    case Quantity::dT: return t.dT[j];
    case Quantity::dJ: return t.dJ[j];
    case Quantity::dF: return t.dF[j];
    case Quantity::dJminusdF: return t.dJ[j] - t.dF[j];
    case Quantity::dLambda:
      if (!t.has_lambda) throw Error(ErrorKind::AsymmetricPotential, "Lambda' needs symmetry");
      return t.dlambda[j];
  }
  return 0.0;
}

double weight_at(const ParamTable& t, std::size_t j, Weight w) {
  switch (w) {
    case Weight::Unit: return 1.0;
    case Weight::T: return t.T[j];
    case Weight::R: return t.R[j];
  }
  return 1.0;
}

}  // namespace

Complex inner_product(std::span<const double> xs, std::span<const Complex> f,
                      std::span<const Complex> g) {
  require_same_size(xs.size(), f.size());
  require_same_size(xs.size(), g.size());
  Complex s{};
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    s += 0.5 * (xs[i + 1] - xs[i]) * (std::conj(f[i]) * g[i] + std::conj(f[i + 1]) * g[i + 1]);
  return s;
}

double norm2(std::span<const double> xs, std::span<const Complex> f) {
  return inner_product(xs, f, f).real();
}

double partial_norm2(std::span<const double> xs, std::span<const Complex> f, double x_lo,
                     double x_hi) {
  require_same_size(xs.size(), f.size());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double l = std::max(xs[i], x_lo);
    const double r = std::min(xs[i + 1], x_hi);
    if (!(r > l)) continue;
    const double h = xs[i + 1] - xs[i];
    const double d0 = std::norm(f[i]), d1 = std::norm(f[i + 1]);
    auto dens = [&](double x) { return d0 + (d1 - d0) * (x - xs[i]) / h; };
    s += 0.5 * (r - l) * (dens(l) + dens(r));
  }
  return s;
}

Moments moments_x(std::span<const double> xs, std::span<const Complex> field) {
  require_same_size(xs.size(), field.size());
  const std::size_t n = xs.size();
  if (n < 3) throw Error(ErrorKind::ZeroNorm, "need at least three samples");
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, sk = 0.0;
  auto deriv = [&](std::size_t i) {
    if (i == 0) return (field[1] - field[0]) / (xs[1] - xs[0]);
    if (i + 1 == n) return (field[n - 1] - field[n - 2]) / (xs[n - 1] - xs[n - 2]);
    return (field[i + 1] - field[i - 1]) / (xs[i + 1] - xs[i - 1]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? xs[i] - xs[i - 1] : 0.0;
    const double right = i + 1 < n ? xs[i + 1] - xs[i] : 0.0;
    const double w = 0.5 * (left + right);
    const double d = std::norm(field[i]);
    s0 += w * d;
    s1 += w * d * xs[i];
    s2 += w * d * xs[i] * xs[i];
    sk += w * std::imag(std::conj(field[i]) * deriv(i));
  }
  if (!(s0 > kMinNorm2)) throw Error(ErrorKind::ZeroNorm, "field norm^2 " + std::to_string(s0));
  Moments m;
  m.norm2 = s0;
  m.mean_x = s1 / s0;
  m.var_x = std::max(0.0, s2 / s0 - m.mean_x * m.mean_x);
  m.mean_k = sk / s0;
  return m;
}

std::vector<double> flux_profile(std::span<const double> xs, std::span<const Complex> f,
                                 double mass) {
  require_same_size(xs.size(), f.size());
  const std::size_t n = xs.size();
  std::vector<double> j(n, 0.0);
  if (n < 2) return j;
  const double hm = units::hbar_over_m(mass);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = i == 0 ? 0 : i - 1;
    const std::size_t r = i + 1 == n ? n - 1 : i + 1;
    const Complex d = (f[r] - f[l]) / (xs[r] - xs[l]);
    j[i] = hm * std::imag(std::conj(f[i]) * d);
  }
  return j;
}

double weighted_mean(const ParamTable& table, const SpectralPacket& packet, Weight w, Quantity q) {
  require_same_size(table.grid.n, packet.amps.size());
  double num = 0.0, den = 0.0, all = 0.0;
  for (std::size_t j = 0; j < packet.amps.size(); ++j) {
    const double base = packet.grid.weight(j) * std::norm(packet.amps[j]);
    const double ww = base * weight_at(table, j, w);
    all += base;
    den += ww;
    num += ww * quantity_at(table, j, q);
  }
  if (!(den > kMinNorm2 * all))
    throw Error(ErrorKind::ZeroWeight, "channel weight vanishes over the packet");
  return num / den;
}

double weight_fraction(const ParamTable& table, const SpectralPacket& packet, Weight w) {
  require_same_size(table.grid.n, packet.amps.size());
  double den = 0.0, all = 0.0;
  for (std::size_t j = 0; j < packet.amps.size(); ++j) {
    const double base = packet.grid.weight(j) * std::norm(packet.amps[j]);
    all += base;
    den += base * weight_at(table, j, w);
  }
  if (!(all > 0.0)) throw Error(ErrorKind::ZeroNorm, "packet has zero norm");
  return den / all;
}

CmWindow auto_window(const Synthesizer& syn, double l0, double t_max) {
  const Potential& pot = syn.potential();
  const double reach = units::hbar_over_m(pot.mass()) * syn.grid().k_max * std::max(0.0, t_max);
  const double margin = 12.0 * l0 + 20.0;
  CmWindow w;
  w.x_lo = std::min(0.0, 2.0 * pot.a() - reach) - margin;
  w.x_hi = std::max(pot.b(), reach) + margin;
  w.dx_max = 0.5;
  return w;
}

namespace {

// An empty channel (no reflection, say) gets a NaN centre instead of ZeroNorm.
CmSample sample(double t, std::span<const double> xs, std::span<const Complex> f) {
  const double n2 = norm2(xs, f);
  if (!(n2 > kMinNorm2)) return {t, n2, std::numeric_limits<double>::quiet_NaN()};
  const Moments m = moments_x(xs, f);
  return {t, m.norm2, m.mean_x};
}

}  // namespace

CmSample cm_at(const Synthesizer& syn, Channel c, double t, const CmWindow& window) {
  const Frame fr = syn.frame(t, window.x_lo, window.x_hi, window.dx_max);
  const auto xs = fr.xs();
  const Moments m = moments_x(xs, fr.channel(c));
  return {t, m.norm2, m.mean_x};
}

Trajectories cm_trajectories(const Synthesizer& syn, std::span<const double> times,
                             const CmWindow& window) {
  Trajectories out;
  for (double t : times) {
    const Frame fr = syn.frame(t, window.x_lo, window.x_hi, window.dx_max);
    const auto xs = fr.xs();
    const Moments mf = moments_x(xs, fr.full);
    out.full.push_back({t, mf.norm2, mf.mean_x});
    if (!syn.decomposed()) continue;
    out.tr.push_back(sample(t, xs, fr.tr));
    out.ref.push_back(sample(t, xs, fr.ref));
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size());
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) throw Error(ErrorKind::Config, "line fit needs two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace qsplit
