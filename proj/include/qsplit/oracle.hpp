#pragma once

#include <span>
#include <vector>

#include "qsplit/potential.hpp"
#include "qsplit/transfer_matrix.hpp"

namespace qsplit {

/// Field on the uniform grid x_i = x0 + i dx.
struct GridField {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<Complex> values;
  double t = 0.0;  // fs

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  std::vector<double> xs() const;
};

/// Normalised Gaussian (2 pi l0^2)^{-1/4} exp(ik0 x - x^2/(4 l0^2)) on
/// [x_min, x_max], the position image of gaussian_spectrum.
GridField gaussian_field(double x_min, double x_max, double dx, double l0, double k0);

/// Cell average of V over [x_i - dx/2, x_i + dx/2]; a delta spike becomes
/// W/dx on the node whose cell holds it.
std::vector<double> node_potential(const Potential& pot, double x0, double dx, std::size_t n);

struct CNSettings {
  double dt = 0.25;          // fs
  double e_max = 0.0;        // eV, energy scale for the accuracy check
  double k_max = 0.0;        // nm^-1, for the resolution check; 0 skips it
  double leak_tol = 1e-10;   // boundary density limit
};

/// Discrete <H> of a field (eV).
double mean_energy(const GridField& f, const Potential& pot);

/// Crank-Nicolson with zero Dirichlet walls; returns the field after each
/// requested step count (ascending). Throws CFLAccuracyViolation when
/// dt e_max/hbar >= 0.1 or dx > 2 pi/(8 k_max), BoundaryLeak when the
/// density next to either wall exceeds leak_tol.
std::vector<GridField> propagate_checkpoints(const GridField& initial, const Potential& pot,
                                             const CNSettings& s, std::span<const long> steps);

GridField propagate(const GridField& initial, const Potential& pot, const CNSettings& s,
                    long steps);

struct ExtrapolationSettings {
  double x_min = -400.0;
  double x_max = 1200.0;
  double dx = 0.05;   // nm, coarsest level
  double dt = 0.25;   // fs, coarsest level
  int levels = 3;     // dx and dt halved together per level
  double l0 = 7.5;
  double k0 = 0.0;
  double k_max = 0.0;
  double leak_tol = 1e-10;
};

/// Richardson extrapolation in (dx, dt) across `levels` CN runs started from
/// gaussian_field; results live on the coarsest grid. Times must be
/// multiples of the coarsest dt.
std::vector<GridField> propagate_extrapolated(const Potential& pot,
                                              const ExtrapolationSettings& s,
                                              std::span<const double> times);

struct RegionNorms {
  double left = 0.0;
  double right = 0.0;
};

RegionNorms split_by_region(const GridField& f, double x_cut);

/// Trapezoid L2 distance ||f - g|| between two fields on the same grid.
double l2_distance(const GridField& f, std::span<const Complex> g);

}  // namespace qsplit
