#pragma once

#include <optional>
#include <span>
#include <vector>

namespace qsplit {

struct Segment {
  double width = 0.0;   // nm
  double height = 0.0;  // eV
};

struct DeltaSpike {
  double position = 0.0;  // nm
  double strength = 0.0;  // eV nm
};

/// Raw, unvalidated description of the scattering potential.
struct PotentialSpec {
  double a = 0.0;  // nm
  double b = 0.0;  // nm
  std::vector<Segment> segments;
  std::optional<DeltaSpike> delta;
  double mass = 1.0;  // m_e
};

/// Validated potential: piecewise-constant segments tiling [a, b], or a
/// single delta spike at a = b. Immutable after construction.
class Potential {
 public:
  double a() const { return a_; }
  double b() const { return b_; }
  double width() const { return b_ - a_; }
  double sum() const { return a_ + b_; }
  double midpoint() const { return 0.5 * (a_ + b_); }
  double mass() const { return mass_; }
  bool symmetric() const { return symmetric_; }
  bool is_delta() const { return delta_.has_value(); }
  const std::optional<DeltaSpike>& delta() const { return delta_; }
  std::span<const Segment> segments() const { return segments_; }

  /// Left edges of the segments, plus b as the final entry.
  std::span<const double> edges() const { return edges_; }

  /// V(x) with left-closed segments [x_i, x_{i+1}); zero outside [a, b).
  double evaluate(double x) const;

  /// Largest |V| over segments (0 for a delta spike).
  double max_abs_height() const;

  /// Same potential rigidly shifted by `dx`.
  Potential shifted(double dx) const;

 private:
  friend Potential validate(const PotentialSpec& spec);

  double a_ = 0.0;
  double b_ = 0.0;
  double mass_ = 1.0;
  bool symmetric_ = true;
  std::vector<Segment> segments_;
  std::vector<double> edges_;
  std::optional<DeltaSpike> delta_;
};

Potential validate(const PotentialSpec& spec);

// Convenience constructors used throughout tests and scenarios.
Potential rectangular(double a, double width, double height, double mass);
Potential delta_potential(double position, double strength, double mass);
Potential free_potential(double a, double mass);

}  // namespace qsplit
