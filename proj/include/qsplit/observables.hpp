#pragma once

#include <span>
#include <vector>

#include "qsplit/spectral.hpp"

namespace qsplit {

struct Moments {
  double norm2 = 0.0;
  double mean_x = 0.0;  // nm
  double var_x = 0.0;   // nm^2
  double mean_k = 0.0;  // nm^-1
};

/// Trapezoid moments of a field sampled on increasing xs. Throws ZeroNorm
/// when norm^2 <= 1e-12.
Moments moments_x(std::span<const double> xs, std::span<const Complex> field);

inline constexpr double kMinNorm2 = 1e-12;

/// Trapezoid <f|g>.
Complex inner_product(std::span<const double> xs, std::span<const Complex> f,
                      std::span<const Complex> g);
double norm2(std::span<const double> xs, std::span<const Complex> f);

/// Trapezoid norm^2 restricted to [x_lo, x_hi], linear in |f|^2 at the cuts.
double partial_norm2(std::span<const double> xs, std::span<const Complex> f, double x_lo,
                     double x_hi);

/// Current (hbar/m) Im(f* f') with central differences.
std::vector<double> flux_profile(std::span<const double> xs, std::span<const Complex> f,
                                 double mass);

enum class Weight { Unit, T, R };
enum class Quantity { One, K, T, dT, dJ, dF, dJminusdF, dLambda };

/// sum q w |A|^2 dk / sum w |A|^2 dk over the table grid. Throws ZeroWeight
/// when the weight total falls below 1e-12.
double weighted_mean(const ParamTable& table, const SpectralPacket& packet, Weight w, Quantity q);

/// <T>_in or <R>_in: the weight total relative to the packet norm.
double weight_fraction(const ParamTable& table, const SpectralPacket& packet, Weight w);

struct CmSample {
  double t = 0.0;
  double norm2 = 0.0;
  double mean_x = 0.0;
};

struct CmWindow {
  double x_lo = -1000.0;
  double x_hi = 2000.0;
  double dx_max = 0.5;
};

/// Window wide enough to hold every channel up to t_max.
CmWindow auto_window(const Synthesizer& syn, double l0, double t_max);

struct Trajectories {
  std::vector<CmSample> full, tr, ref;
};

Trajectories cm_trajectories(const Synthesizer& syn, std::span<const double> times,
                             const CmWindow& window);

/// CM of one channel at one time.
CmSample cm_at(const Synthesizer& syn, Channel c, double t, const CmWindow& window);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace qsplit
