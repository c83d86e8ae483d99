#include "qsplit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsplit/errors.hpp"
#include "qsplit/observables.hpp"
#include "qsplit/units.hpp"

namespace qsplit {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t node_count(double x_min, double x_max, double dx) {
  if (!(dx > 0.0) || !(x_max > x_min)) throw Error(ErrorKind::Config, "bad oracle grid");
  return static_cast<std::size_t>(std::llround((x_max - x_min) / dx)) + 1;
}

// Constant tridiagonal system (1 + i tau H) with its Thomas factorisation.
class CrankNicolson {
 public:
  CrankNicolson(std::vector<double> v, double dx, double dt, double mass)
      : v_(std::move(v)), tau_(0.5 * dt / units::kHbar) {
    const std::size_t n = v_.size();
    c_ = units::kHbar2Over2Me / (mass * dx * dx);
    off_ = -kI * tau_ * c_;
    cp_.resize(n);
    inv_den_.resize(n);
    Complex den = 1.0 + kI * tau_ * (2.0 * c_ + v_[0]);
    inv_den_[0] = 1.0 / den;
    cp_[0] = off_ * inv_den_[0];
    for (std::size_t i = 1; i < n; ++i) {
      den = 1.0 + kI * tau_ * (2.0 * c_ + v_[i]) - off_ * cp_[i - 1];
      inv_den_[i] = 1.0 / den;
      cp_[i] = off_ * inv_den_[i];
    }
    rhs_.resize(n);
  }

  void step(std::vector<Complex>& psi) {
    const std::size_t n = psi.size();
    const Complex side = kI * tau_ * c_;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex l = i > 0 ? psi[i - 1] : Complex{};
      const Complex r = i + 1 < n ? psi[i + 1] : Complex{};
      rhs_[i] = (1.0 - kI * tau_ * (2.0 * c_ + v_[i])) * psi[i] + side * (l + r);
    }
    psi[0] = rhs_[0] * inv_den_[0];
    for (std::size_t i = 1; i < n; ++i) psi[i] = (rhs_[i] - off_ * psi[i - 1]) * inv_den_[i];
    for (std::size_t i = n - 1; i-- > 0;) psi[i] -= cp_[i] * psi[i + 1];
  }

 private:
  std::vector<double> v_;
  double tau_;
  double c_ = 0.0;
  Complex off_;
  std::vector<Complex> cp_, inv_den_, rhs_;
};

}  // namespace

std::vector<double> GridField::xs() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x(i);
  return out;
}

GridField gaussian_field(double x_min, double x_max, double dx, double l0, double k0) {
  GridField f;
  f.x0 = x_min;
  f.dx = dx;
  const std::size_t n = node_count(x_min, x_max, dx);
  f.values.resize(n);
  const double amp = std::pow(2.0 * units::kPi * l0 * l0, -0.25);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.x(i);
    f.values[i] = amp * std::exp(-x * x / (4.0 * l0 * l0)) * std::polar(1.0, k0 * x);
  }
  return f;
}

std::vector<double> node_potential(const Potential& pot, double x0, double dx, std::size_t n) {
  std::vector<double> v(n, 0.0);
  if (pot.is_delta()) {
    const long i = std::lround((pot.delta()->position - x0) / dx);
    if (i >= 0 && static_cast<std::size_t>(i) < n) v[static_cast<std::size_t>(i)] += pot.delta()->strength / dx;
    return v;
  }
  const auto edges = pot.edges();
  const auto segs = pot.segments();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const long first = std::max(0L, static_cast<long>(std::floor((lo - x0) / dx - 0.5)));
    const long last = std::min(static_cast<long>(n) - 1, static_cast<long>(std::ceil((hi - x0) / dx + 0.5)));
    for (long i = first; i <= last; ++i) {
      const double xc = x0 + static_cast<double>(i) * dx;
      const double overlap = std::min(hi, xc + 0.5 * dx) - std::max(lo, xc - 0.5 * dx);
      if (overlap > 0.0) v[static_cast<std::size_t>(i)] += segs[s].height * overlap / dx;
    }
  }
  return v;
}

double mean_energy(const GridField& f, const Potential& pot) {
  const std::size_t n = f.values.size();
  const std::vector<double> v = node_potential(pot, f.x0, f.dx, n);
  const double c = units::kHbar2Over2Me / (pot.mass() * f.dx * f.dx);
  Complex num{};
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex l = i > 0 ? f.values[i - 1] : Complex{};
    const Complex r = i + 1 < n ? f.values[i + 1] : Complex{};
    const Complex h = -c * (l - 2.0 * f.values[i] + r) + v[i] * f.values[i];
    num += std::conj(f.values[i]) * h;
    den += std::norm(f.values[i]);
  }
  if (!(den > 0.0)) throw Error(ErrorKind::ZeroNorm, "oracle field is zero");
  return num.real() / den;
}

std::vector<GridField> propagate_checkpoints(const GridField& initial, const Potential& pot,
                                             const CNSettings& s, std::span<const long> steps) {
  const std::size_t n = initial.values.size();
  if (n < 3) throw Error(ErrorKind::Config, "oracle grid too small");
  const double e_scale = s.e_max > 0.0 ? s.e_max : std::abs(mean_energy(initial, pot));
  if (!(s.dt * e_scale / units::kHbar < 0.1))
    throw Error(ErrorKind::CFLAccuracyViolation,
                "dt E/hbar = " + std::to_string(s.dt * e_scale / units::kHbar) + " >= 0.1");
  if (s.k_max > 0.0 && initial.dx > 2.0 * units::kPi / (8.0 * s.k_max))
    throw Error(ErrorKind::CFLAccuracyViolation, "dx resolves 2 pi/k_max by fewer than 8 points");

  CrankNicolson cn(node_potential(pot, initial.x0, initial.dx, n), initial.dx, s.dt, pot.mass());
  std::vector<Complex> psi = initial.values;
  std::vector<GridField> out;
  long done = 0;
  for (long target : steps) {
    if (target < done) throw Error(ErrorKind::Config, "checkpoints must ascend");
    for (; done < target; ++done) {
      cn.step(psi);
      if (std::norm(psi.front()) > s.leak_tol || std::norm(psi.back()) > s.leak_tol)
        throw Error(ErrorKind::BoundaryLeak,
                    "density at the wall exceeds " + std::to_string(s.leak_tol) + " at t = " +
                        std::to_string(initial.t + static_cast<double>(done + 1) * s.dt) + " fs");
    }
    GridField g;
    g.x0 = initial.x0;
    g.dx = initial.dx;
    g.values = psi;
    g.t = initial.t + static_cast<double>(target) * s.dt;
    out.push_back(std::move(g));
  }
  return out;
}

GridField propagate(const GridField& initial, const Potential& pot, const CNSettings& s,
                    long steps) {
  const long st[] = {steps};
  return propagate_checkpoints(initial, pot, s, st).front();
}

std::vector<GridField> propagate_extrapolated(const Potential& pot,
                                              const ExtrapolationSettings& s,
                                              std::span<const double> times) {
  if (s.levels < 1) throw Error(ErrorKind::Config, "need at least one level");
  std::vector<long> base_steps;
  for (double t : times) {
    const double r = t / s.dt;
    const long st = std::lround(r);
    if (std::abs(r - static_cast<double>(st)) > 1e-9 || st < 0)
      throw Error(ErrorKind::Config, "time " + std::to_string(t) + " fs is not a multiple of dt");
    base_steps.push_back(st);
  }

  // table[level][checkpoint] on the coarse nodes.
  std::vector<std::vector<GridField>> table;
  for (int lvl = 0; lvl < s.levels; ++lvl) {
    const long f = 1L << lvl;
    const double dx = s.dx / static_cast<double>(f);
    GridField init = gaussian_field(s.x_min, s.x_max, dx, s.l0, s.k0);
    CNSettings cn;
    cn.dt = s.dt / static_cast<double>(f);
    cn.k_max = s.k_max;
    cn.leak_tol = s.leak_tol;
    std::vector<long> st;
    for (long b : base_steps) st.push_back(b * f);
    std::vector<GridField> fine = propagate_checkpoints(init, pot, cn, st);
    std::vector<GridField> coarse;
    for (GridField& g : fine) {
      GridField c;
      c.x0 = g.x0;
      c.dx = s.dx;
      c.t = g.t;
      for (std::size_t i = 0; i < g.values.size(); i += static_cast<std::size_t>(f))
        c.values.push_back(g.values[i]);
      coarse.push_back(std::move(c));
    }
    table.push_back(std::move(coarse));
  }

  // Richardson: errors expand in even powers of the common step.
  for (int j = 1; j < s.levels; ++j) {
    const double fac = std::pow(4.0, j) - 1.0;
    for (int lvl = s.levels - 1; lvl >= j; --lvl)
      for (std::size_t c = 0; c < times.size(); ++c) {
        auto& hi = table[lvl][c].values;
        const auto& lo = table[lvl - 1][c].values;
        for (std::size_t i = 0; i < hi.size(); ++i) hi[i] += (hi[i] - lo[i]) / fac;
      }
  }
  return table.back();
}

RegionNorms split_by_region(const GridField& f, double x_cut) {
  const auto xs = f.xs();
  const double lo = xs.front(), hi = xs.back();
  return {partial_norm2(xs, f.values, lo, x_cut), partial_norm2(xs, f.values, x_cut, hi)};
}

double l2_distance(const GridField& f, std::span<const Complex> g) {
  if (g.size() != f.values.size()) throw Error(ErrorKind::Config, "field sizes differ");
  std::vector<Complex> diff(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) diff[i] = f.values[i] - g[i];
  return std::sqrt(norm2(f.xs(), diff));
}

}  // namespace qsplit
