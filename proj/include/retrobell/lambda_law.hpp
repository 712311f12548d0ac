#ifndef RETROBELL_LAMBDA_LAW_HPP
#define RETROBELL_LAMBDA_LAW_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "retrobell/angle.hpp"

namespace retrobell {

// Point mass of a purely atomic lambda distribution.
struct Atom {
  Angle position;
  double weight = 0.0;
};

// Constant-density piece of a piecewise distribution.  [left, right) is a
// plain subinterval of [0, pi); arcs that wrap past pi are stored as two
// pieces.  density is probability per radian.
struct Segment {
  double left = 0.0;
  double right = 0.0;
  double density = 0.0;

  double length() const { return right - left; }
  double mass() const { return density * length(); }
};

// Setting-conditioned distribution of the hidden variable: either purely
// atomic (weighted point masses) or a purely piecewise-constant density
// partitioning [0, pi).  Exactly one representation is populated.
class LambdaLaw {
 public:
  enum class Kind { atomic, piecewise_density };

  static constexpr double kAtomMergeTol = 1e-12;
  static constexpr double kWeightSumTol = 1e-12;
  static constexpr double kMassTol = 1e-10;
  static constexpr double kBoundaryTol = 1e-14;

  static LambdaLaw atomic(std::vector<Atom> atoms) {
    if (atoms.empty()) {
      throw std::invalid_argument("LambdaLaw: atomic law needs at least one atom");
    }
    for (const Atom& atom : atoms) {
      if (!(atom.weight >= 0.0)) {
        throw std::invalid_argument("LambdaLaw: negative atom weight");
      }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.position < y.position; });

    // Coinciding positions merge by weight summation; the tolerance is
    // circle-aware so near-0 and near-pi atoms still merge.
    std::vector<Atom> merged;
    for (const Atom& atom : atoms) {
      if (!merged.empty() && circle_close(merged.back().position, atom.position, kAtomMergeTol)) {
        merged.back().weight += atom.weight;
      } else {
        merged.push_back(atom);
      }
    }
    if (merged.size() >= 2 &&
        circle_close(merged.front().position, merged.back().position, kAtomMergeTol)) {
      merged.front().weight += merged.back().weight;
      merged.pop_back();
    }

    double total = 0.0;
    for (const Atom& atom : merged) total += atom.weight;
    if (std::fabs(total - 1.0) > kWeightSumTol) {
      throw std::invalid_argument("LambdaLaw: atomic weights do not sum to 1");
    }
    LambdaLaw law;
    law.kind_ = Kind::atomic;
    law.atoms_ = std::move(merged);
    return law;
  }

  static LambdaLaw piecewise(std::vector<Segment> segments) {
    if (segments.empty()) {
      throw std::invalid_argument("LambdaLaw: piecewise law needs at least one segment");
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& x, const Segment& y) { return x.left < y.left; });
    double cursor = 0.0;
    double mass = 0.0;
    for (const Segment& seg : segments) {
      if (!(seg.density >= 0.0)) {
        throw std::invalid_argument("LambdaLaw: negative density");
      }
      if (std::fabs(seg.left - cursor) > kBoundaryTol || seg.right <= seg.left - kBoundaryTol) {
        throw std::invalid_argument("LambdaLaw: segments do not partition [0, pi)");
      }
      cursor = seg.right;
      mass += seg.mass();
    }
    if (std::fabs(cursor - kPi) > kBoundaryTol) {
      throw std::invalid_argument("LambdaLaw: segments do not cover [0, pi)");
    }
    if (std::fabs(mass - 1.0) > kMassTol) {
      throw std::invalid_argument("LambdaLaw: piecewise mass differs from 1");
    }
    LambdaLaw law;
    law.kind_ = Kind::piecewise_density;
    law.segments_ = std::move(segments);
    return law;
  }

  Kind kind() const { return kind_; }
  bool is_atomic() const { return kind_ == Kind::atomic; }

  const std::vector<Atom>& atoms() const {
    if (kind_ != Kind::atomic) throw std::logic_error("LambdaLaw: not atomic");
    return atoms_;
  }

  const std::vector<Segment>& segments() const {
    if (kind_ != Kind::piecewise_density) throw std::logic_error("LambdaLaw: not piecewise");
    return segments_;
  }

  // Density at a canonical point (piecewise laws only).
  double density_at(Angle lambda) const {
    const double x = lambda.radians();
    for (const Segment& seg : segments()) {
      if (x >= seg.left && x < seg.right) return seg.density;
    }
    return segments().back().density;  // x == pi boundary rounding
  }

  double mass() const {
    double total = 0.0;
    if (kind_ == Kind::atomic) {
      for (const Atom& atom : atoms_) total += atom.weight;
    } else {
      for (const Segment& seg : segments_) total += seg.mass();
    }
    return total;
  }

 private:
  LambdaLaw() = default;

  Kind kind_ = Kind::atomic;
  std::vector<Atom> atoms_;
  std::vector<Segment> segments_;
};

}  // namespace retrobell

#endif  // RETROBELL_LAMBDA_LAW_HPP
