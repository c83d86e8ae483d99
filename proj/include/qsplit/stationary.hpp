#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qsplit/potential.hpp"
#include "qsplit/transfer_matrix.hpp"

namespace qsplit {

enum class Channel { Full, Tr, Ref };

std::string_view to_string(Channel c);

/// Interior piece on [x_lo, x_hi): the solution is stored as its value and
/// slope at the piece centre and carried to x by segment_propagator.
struct Piece {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double xc = 0.0;
  LocalWave wave;
  Complex psi{};
  Complex dpsi{};
};

/// Stationary scattering state at fixed k, per unit incident amplitude.
/// Outside [a, b] it is a pair of plane waves e^{+ikx}, e^{-ikx}.
struct StationaryState {
  double k = 0.0;
  double mass = 1.0;
  Channel channel = Channel::Full;
  std::optional<double> lambda;
  double flux = 0.0;  // nm/fs

  double a = 0.0;
  double b = 0.0;
  double x_mid = 0.0;
  Complex left_plus{}, left_minus{};
  Complex right_plus{}, right_minus{};
  std::vector<Piece> pieces;

  Complex value(double x) const;
  Complex slope(double x) const;
  /// Probability current (hbar/m) Im(psi* psi').
  double current(double x) const;
};

/// Breakpoints shared by every channel: segment edges plus x_mid.
std::vector<Piece> interior_pieces(const Potential& pot, double k);

StationaryState full_state(const Potential& pot, const TunnelingParams& tp);

struct LambdaRoots {
  double plus = 0.0;
  double minus = 0.0;
};

/// lambda = +-arctan(sqrt(T/R)). Throws FullTransmission when R < 1e-14.
LambdaRoots lambda_roots(const TunnelingParams& tp);


/// Relative mismatch between the left-side reflected solution built with
/// `lambda` and the interior solution that vanishes at x_mid.
double parity_mismatch(const Potential& pot, const TunnelingParams& tp, double lambda);

/// Root choice from the value of F (F = 0 selects lambda+, F = pi selects
/// lambda-), confirmed by parity_mismatch. Disagreement is a ParityMismatch.
double select_odd_root(const Potential& pot, const TunnelingParams& tp);

/// Root with the smaller parity mismatch, without consulting F.
double odd_root_by_probe(const Potential& pot, const TunnelingParams& tp);

inline constexpr double kParityTolerance = 1e-7;

StationaryState ref_state(const Potential& pot, const TunnelingParams& tp, double lambda);
StationaryState tr_state(const StationaryState& full, const StationaryState& ref);
StationaryState tr_state(const Potential& pot, const TunnelingParams& tp, double lambda);

/// Lambda(k) and its k-derivative (unwrapped modulo pi).
double lambda_at(const Potential& pot, double k);
double lambda_derivative(const Potential& pot, double k, double h = kDefaultDerivativeStep);

struct AmplitudeSet {
  Complex a_in{}, b_out{}, a_out{}, b_in{};
};

/// One-source problem and the two auxiliary two-source problems.
AmplitudeSet problem_amplitudes(const TunnelingParams& tp);
AmplitudeSet auxiliary_ref_amplitudes(const TunnelingParams& tp);
AmplitudeSet auxiliary_tr_amplitudes(const TunnelingParams& tp);

/// Scattering matrix mapping (a_in, b_in) to (a_out, b_out).
Mat2 scattering_matrix(const TunnelingParams& tp);

struct EigenSolution {
  int mu = 1;
  Complex eigenvalue{};
  AmplitudeSet reflection;
  AmplitudeSet transmission;
  /// max |S v - s v| over both sets, relative to |v|.
  double residual = 0.0;
};

EigenSolution smatrix_eigensolutions(const TunnelingParams& tp, int mu);

/// mu consistent with the odd root: sign(lambda).
int matching_mu(double lambda);

}  // namespace qsplit
