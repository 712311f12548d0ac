#ifndef RETROBELL_ANGLE_HPP
#define RETROBELL_ANGLE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace retrobell {

inline constexpr double kPi = std::numbers::pi;

// Orientation modulo pi.  The value is always kept canonical in [0, pi);
// doubling (2a, 2*lambda, ...) happens inside formulas, never in storage.
class Angle {
 public:
  constexpr Angle() = default;

  explicit Angle(double radians) : value_(canonicalize(radians)) {}

  double radians() const { return value_; }

  // Rotation by an arbitrary (finite) offset, re-reduced.
  Angle rotated(double delta) const { return Angle(value_ + delta); }

  friend bool operator==(Angle lhs, Angle rhs) { return lhs.value_ == rhs.value_; }
  friend bool operator<(Angle lhs, Angle rhs) { return lhs.value_ < rhs.value_; }

 private:
  static double canonicalize(double x) {
    if (!std::isfinite(x)) {
      throw std::domain_error("Angle: non-finite value");
    }
    double r = std::fmod(x, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0;  // fmod rounding can land exactly on pi
    return r;
  }

  double value_ = 0.0;
};

// Reduction of an arbitrary real angle to its canonical representative.
// reduce_angle(x + pi) == reduce_angle(x), and the map is idempotent.
inline Angle reduce_angle(double radians) { return Angle(radians); }

// Distance on the mod-pi circle, in [0, pi/2].
inline double angular_distance(Angle a, Angle b) {
  const double d = std::fabs(a.radians() - b.radians());
  return std::min(d, kPi - d);
}

// Equality on the mod-pi circle within an absolute tolerance.  0 and
// pi - eps are close; a plain |a-b| test would miss that.
inline bool circle_close(Angle a, Angle b, double tol) {
  return angular_distance(a, b) <= tol;
}

}  // namespace retrobell

#endif  // RETROBELL_ANGLE_HPP
