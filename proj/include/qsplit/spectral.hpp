#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsplit/potential.hpp"
#include "qsplit/stationary.hpp"
#include "qsplit/transfer_matrix.hpp"

namespace qsplit {

/// Uniform wavenumber grid, k_min > 0.
struct KGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t n = 0;

  double dk() const { return (k_max - k_min) / static_cast<double>(n - 1); }
  double at(std::size_t j) const { return k_min + static_cast<double>(j) * dk(); }
  /// Trapezoid weight of node j.
  double weight(std::size_t j) const { return (j == 0 || j + 1 == n) ? 0.5 * dk() : dk(); }
  std::vector<double> points() const;
};

inline constexpr std::size_t kDefaultKPoints = 4096;
/// Half-span in units of 1/(sqrt(2) l0), the width of A_in(k).
inline constexpr double kDefaultSpanSigmas = 6.5;

/// k0 +- span_sigmas/(sqrt(2) l0). Throws SpectrumLeaksNegativeK if the
/// lower edge is not positive.
KGrid make_kgrid(double k0, double l0, std::size_t n = kDefaultKPoints,
                 double span_sigmas = kDefaultSpanSigmas);

enum class PacketKind { FullIn, FullOut, Tr, Ref };

/// Amplitudes on a k-grid. `reflected` packets multiply e^{-ikx} instead of
/// e^{ikx}. Any e^{-iEt/hbar} factor is already folded into `amps`.
struct SpectralPacket {
  KGrid grid;
  std::vector<Complex> amps;
  PacketKind kind = PacketKind::FullIn;
  double t0 = 0.0;
  bool reflected = false;

  double norm2() const;
  /// Quadrature mean of k over |amps|^2.
  double mean_k() const;
};

/// Normalised Gaussian A(k) = (2 l0^2/pi)^{1/4} exp(-l0^2 (k-k0)^2).
double gaussian_prefactor(double l0);

/// Checks the negative-k tail and the edge cutoff of the grid.
SpectralPacket gaussian_spectrum(double l0, double k0, const KGrid& grid);

inline constexpr double kEdgeCutoff = 1e-8;
inline constexpr double kNegativeKMass = 1e-8;

/// T, R, J, F, Lambda and their k-derivatives on a grid. J and F are made
/// continuous by unwrapping from the smallest k upward.
struct ParamTable {
  KGrid grid;
  std::vector<TunnelingParams> params;
  std::vector<double> T, R, J, F;
  std::vector<double> dT, dR, dJ, dF;
  bool has_lambda = false;
  std::vector<double> lambda, dlambda;
};

ParamTable build_param_table(const Potential& pot, const KGrid& grid,
                             double h = kDefaultDerivativeStep);

/// Throws GridTooCoarse when dk * max|x| > pi.
void check_nyquist(const KGrid& grid, double x_abs_max);

enum class Asymptote { InFull, OutTr, OutRef, InTr, InRef };

/// In/out asymptote amplitudes at time t for the incident spectrum `incident`.
/// OutRef is returned in positive-k form with e^{-ikx} dependence.
SpectralPacket asymptote(const SpectralPacket& incident, Asymptote which, const ParamTable& table,
                         const Potential& pot, double t);

/// Free-space field (2 pi)^{-1/2} sum_j w_j amps_j e^{+-ik_j x}.
std::vector<Complex> free_field(const SpectralPacket& packet, std::span<const double> xs);

/// Fields of all three channels on one uniform x-grid.
struct Frame {
  double t = 0.0;
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<Complex> full, tr, ref;

  std::vector<double> xs() const;
  const std::vector<Complex>& channel(Channel c) const;
};

/// Superposes stationary channel states over the incident spectrum:
/// Psi_ch(x, t) = (2 pi)^{-1/2} sum_j w_j A_j Psi_ch(x; k_j) e^{-iE_j t/hbar}.
class Synthesizer {
 public:
  Synthesizer(const Potential& pot, const SpectralPacket& incident, const ParamTable& table);

  /// tr/ref channels exist only for symmetric potentials.
  bool decomposed() const { return decomposed_; }
  const Potential& potential() const { return pot_; }
  const KGrid& grid() const { return grid_; }
  const SpectralPacket& incident() const { return incident_; }
  const StationaryState& state(Channel c, std::size_t j) const;

  /// Direct evaluation at arbitrary points.
  std::vector<Complex> field(Channel c, double t, std::span<const double> xs) const;

  /// All channels on [x_lo, x_hi] with spacing <= dx_max. Points outside the
  /// barrier use FFTs over the k-grid; interior points are summed directly.
  Frame frame(double t, double x_lo, double x_hi, double dx_max) const;

 private:
  std::vector<Complex> coefficients(double t) const;

  Potential pot_;
  KGrid grid_;
  SpectralPacket incident_;
  bool decomposed_ = false;
  std::vector<StationaryState> full_, tr_, ref_;
};

}  // namespace qsplit
