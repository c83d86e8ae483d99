#include "qsplit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsplit/errors.hpp"

namespace qsplit {

namespace {

bool nearly_equal(double x, double y, double scale) {
  return std::abs(x - y) <= 1e-12 * std::max(1.0, scale);
}

bool mirror_symmetric(std::span<const Segment> segs) {
  const std::size_t n = segs.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const Segment& l = segs[i];
    const Segment& r = segs[n - 1 - i];
    if (!nearly_equal(l.width, r.width, std::abs(l.width)) ||
        !nearly_equal(l.height, r.height, std::abs(l.height)))
      return false;
  }
  return true;
}

}  // namespace

Potential validate(const PotentialSpec& spec) {
  if (!(spec.mass > 0.0))
    throw Error(ErrorKind::NonPositiveMass, "mass must be positive, got " + std::to_string(spec.mass));

  Potential pot;
  pot.mass_ = spec.mass;

  if (spec.delta) {
    if (!spec.segments.empty())
      throw Error(ErrorKind::Config, "potential has both segments and a delta spike");
    const DeltaSpike& d = *spec.delta;
    if (!(d.position > 0.0))
      throw Error(ErrorKind::NonPositiveA, "delta position must be positive");
    pot.a_ = pot.b_ = d.position;
    pot.delta_ = d;
    pot.symmetric_ = true;
    pot.edges_ = {d.position};
    return pot;
  }

  if (!(spec.a > 0.0))
    throw Error(ErrorKind::NonPositiveA, "a must be positive, got " + std::to_string(spec.a));
  if (spec.b < spec.a) throw Error(ErrorKind::GapError, "b < a");

  double total = 0.0;
  for (const Segment& s : spec.segments) {
    if (!(s.width >= 0.0)) throw Error(ErrorKind::GapError, "negative segment width");
    total += s.width;
  }
  const double d = spec.b - spec.a;
  if (std::abs(total - d) > 1e-12 * std::max({1.0, d, spec.b}))
    throw Error(ErrorKind::GapError, "segment widths sum to " + std::to_string(total) +
                                         " but b - a = " + std::to_string(d));

  pot.a_ = spec.a;
  pot.b_ = spec.b;
  for (const Segment& s : spec.segments)
    if (s.width > 0.0) pot.segments_.push_back(s);
  pot.symmetric_ = mirror_symmetric(pot.segments_);

  double x = pot.a_;
  for (const Segment& s : pot.segments_) {
    pot.edges_.push_back(x);
    x += s.width;
  }
  pot.edges_.push_back(pot.b_);
  return pot;
}

double Potential::evaluate(double x) const {
  if (delta_) throw Error(ErrorKind::DeltaNotPointwise, "delta potential has no pointwise value");
  if (x < a_ || x >= b_) return 0.0;
  // edges_ holds n+1 entries; find the segment whose [left, right) contains x.
  auto it = std::upper_bound(edges_.begin(), edges_.end() - 1, x);
  const auto idx = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
  return segments_[std::min(idx, segments_.size() - 1)].height;
}

double Potential::max_abs_height() const {
  double v = 0.0;
  for (const Segment& s : segments_) v = std::max(v, std::abs(s.height));
  return v;
}

Potential Potential::shifted(double dx) const {
  PotentialSpec spec;
  spec.mass = mass_;
  if (delta_) {
    spec.delta = DeltaSpike{delta_->position + dx, delta_->strength};
  } else {
    spec.a = a_ + dx;
    spec.b = b_ + dx;
    spec.segments = segments_;
  }
  return validate(spec);
}

Potential rectangular(double a, double width, double height, double mass) {
  return validate(PotentialSpec{a, a + width, {Segment{width, height}}, std::nullopt, mass});
}

Potential delta_potential(double position, double strength, double mass) {
  PotentialSpec spec;
  spec.delta = DeltaSpike{position, strength};
  spec.mass = mass;
  return validate(spec);
}

Potential free_potential(double a, double mass) {
  return validate(PotentialSpec{a, a, {}, std::nullopt, mass});
}

}  // namespace qsplit
