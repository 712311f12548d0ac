#ifndef RETROBELL_JOINT_HPP
#define RETROBELL_JOINT_HPP

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace retrobell {

// Dichotomic measurement result.
enum class Outcome : int { plus = +1, minus = -1 };

constexpr int outcome_sign(Outcome o) { return static_cast<int>(o); }

constexpr Outcome outcome_from_sign(int s) {
  return s >= 0 ? Outcome::plus : Outcome::minus;
}

inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::plus, Outcome::minus};

// Joint distribution over the four outcome pairs (A,B).
struct JointDist {
  double pp = 0.0;  // (+1,+1)
  double pm = 0.0;  // (+1,-1)
  double mp = 0.0;  // (-1,+1)
  double mm = 0.0;  // (-1,-1)

  double sum() const { return pp + pm + mp + mm; }

  double cell(Outcome a, Outcome b) const {
    if (a == Outcome::plus) return b == Outcome::plus ? pp : pm;
    return b == Outcome::plus ? mp : mm;
  }

  double& cell(Outcome a, Outcome b) {
    if (a == Outcome::plus) return b == Outcome::plus ? pp : pm;
    return b == Outcome::plus ? mp : mm;
  }
};

inline bool joint_is_valid(const JointDist& j, double tol = 1e-12) {
  for (Outcome a : kOutcomes) {
    for (Outcome b : kOutcomes) {
      const double p = j.cell(a, b);
      if (!(p >= 0.0 && p <= 1.0)) return false;
    }
  }
  return std::fabs(j.sum() - 1.0) <= tol;
}

// Rounding in the exact evaluator can leave entries a hair below zero.
// Entries in [-1e-14, 0) are clamped to 0 and the distribution renormalized;
// anything more negative is a genuine defect and is rejected.
inline JointDist clamp_and_normalize(JointDist j) {
  for (Outcome a : kOutcomes) {
    for (Outcome b : kOutcomes) {
      double& p = j.cell(a, b);
      if (p < 0.0) {
        if (p < -1e-14) {
          throw std::invalid_argument("JointDist: negative probability beyond rounding noise");
        }
        p = 0.0;
      }
    }
  }
  const double s = j.sum();
  if (s <= 0.0) {
    throw std::invalid_argument("JointDist: vanishing total mass");
  }
  j.pp /= s;
  j.pm /= s;
  j.mp /= s;
  j.mm /= s;
  return j;
}

}  // namespace retrobell

#endif  // RETROBELL_JOINT_HPP
