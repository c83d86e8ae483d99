#include <cmath>
#include <numeric>

#include "doctest.h"
#include "qsplit/errors.hpp"
#include "qsplit/observables.hpp"
#include "qsplit/oracle.hpp"
#include "qsplit/units.hpp"
#include "support.hpp"

using namespace qsplit;
namespace ts = testing_support;

namespace {

constexpr double kMass = 0.067;
constexpr double kL0 = 7.5;
const double kK0 = units::wavenumber(0.25, kMass);

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("free packet follows the analytic dispersion") {
  const Potential free = free_potential(1000.0, kMass);
  const GridField g0 = gaussian_field(-200.0, 600.0, 0.05, kL0, kK0);
  CNSettings s;
  s.dt = 0.05;
  const GridField g = propagate(g0, free, s, 4000);
  const double t = 200.0;
  CHECK(g.t == doctest::Approx(t));
  const Moments m = moments_x(g.xs(), g.values);
  const double hm = units::hbar_over_m(kMass);
  const double tau = hm * t / (2.0 * kL0 * kL0);
  CHECK(m.mean_x == doctest::Approx(hm * kK0 * t).epsilon(0.005));
  CHECK(m.var_x == doctest::Approx(kL0 * kL0 * (1.0 + tau * tau)).epsilon(0.005));
}

TEST_CASE("propagation is unitary") {
  const Potential pot = rectangular(100.0, 5.0, 0.3, kMass);
  const GridField g0 = gaussian_field(-400.0, 600.0, 0.05, kL0, kK0);
  const double n0 = norm2(g0.xs(), g0.values);
  const GridField g = propagate(g0, pot, CNSettings{}, 1000);
  double sum0 = 0.0, sum1 = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    sum0 += std::norm(g0.values[i]);
    sum1 += std::norm(g.values[i]);
  }
  CHECK(std::abs(sum1 - sum0) / sum0 < 1e-8);
  CHECK(norm2(g.xs(), g.values) == doctest::Approx(n0).epsilon(1e-8));
}

TEST_CASE("Richardson levels converge towards the analytic free packet") {
  const Potential free = free_potential(1000.0, kMass);
  ExtrapolationSettings e;
  e.x_min = -150.0;
  e.x_max = 400.0;
  e.dx = 0.1;
  e.dt = 0.25;
  e.l0 = kL0;
  e.k0 = kK0;
  const std::vector<double> times{100.0};
  double prev = 1.0;
  for (int levels = 1; levels <= 3; ++levels) {
    e.levels = levels;
    const GridField g = propagate_extrapolated(free, e, times).front();
    std::vector<Complex> exact(g.values.size());
    for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = ts::free_gaussian(g.x(i), 100.0, kL0, kK0, kMass);
    const double err = l2_distance(g, exact);
    CHECK(err < 0.5 * prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("accuracy and boundary guards") {
  const Potential free = free_potential(1000.0, kMass);
  const GridField g0 = gaussian_field(-100.0, 100.0, 0.05, kL0, kK0);
  CNSettings coarse_t;
  coarse_t.dt = 5.0;
  CHECK(kind_of([&] { propagate(g0, free, coarse_t, 1); }) == ErrorKind::CFLAccuracyViolation);
  const GridField rough = gaussian_field(-100.0, 100.0, 1.0, kL0, kK0);
  CNSettings with_k;
  with_k.k_max = kK0 + 0.6;
  CHECK(kind_of([&] { propagate(rough, free, with_k, 1); }) == ErrorKind::CFLAccuracyViolation);
  const GridField cramped = gaussian_field(-60.0, 60.0, 0.05, kL0, kK0);
  CHECK(kind_of([&] { propagate(cramped, free, CNSettings{}, 400); }) == ErrorKind::BoundaryLeak);
  CHECK(kind_of([&] {
          ExtrapolationSettings e;
          e.k0 = kK0;
          const std::vector<double> t{0.3};
          propagate_extrapolated(free, e, t);
        }) == ErrorKind::Config);
}

TEST_CASE("node potential preserves the integral") {
  const Potential pot = validate({10.03, 15.03, {{1.0, 0.2}, {3.0, -0.1}, {1.0, 0.2}}, std::nullopt, kMass});
  const std::vector<double> v = node_potential(pot, 0.0, 0.07, 400);
  const double integral = std::accumulate(v.begin(), v.end(), 0.0) * 0.07;
  CHECK(integral == doctest::Approx(0.2 * 2.0 - 0.1 * 3.0).epsilon(1e-12));
  CHECK(v[0] == 0.0);
  CHECK(v[150] == doctest::Approx(0.2));
  const std::vector<double> d = node_potential(delta_potential(10.0, 0.04, kMass), 0.0, 0.05, 400);
  CHECK(d[200] == doctest::Approx(0.04 / 0.05));
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(0.04 / 0.05));
}

TEST_CASE("split by region") {
  const GridField g = gaussian_field(-80.0, 80.0, 0.05, kL0, kK0);
  const RegionNorms all = split_by_region(g, 200.0);
  CHECK(all.left == doctest::Approx(norm2(g.xs(), g.values)).epsilon(1e-14));
  CHECK(all.right == 0.0);
  const RegionNorms half = split_by_region(g, 0.0);
  CHECK(half.left == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(half.right == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("transmitted fraction through the barrier agrees with the spectral average") {
  const Potential pot = rectangular(200.0, 5.0, 0.3, kMass);
  const GridField g0 = gaussian_field(-300.0, 700.0, 0.05, kL0, kK0);
  const GridField g = propagate(g0, pot, CNSettings{}, 1200);
  const KGrid grid = make_kgrid(kK0, kL0, 2048);
  const SpectralPacket p = gaussian_spectrum(kL0, kK0, grid);
  const double T = weight_fraction(build_param_table(pot, grid), p, Weight::T);
  CHECK(split_by_region(g, 205.0).right == doctest::Approx(T).epsilon(0.01));
}
