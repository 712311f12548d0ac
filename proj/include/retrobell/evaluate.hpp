#ifndef RETROBELL_EVALUATE_HPP
#define RETROBELL_EVALUATE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "retrobell/angle.hpp"
#include "retrobell/joint.hpp"
#include "retrobell/lambda_law.hpp"
#include "retrobell/models.hpp"

namespace retrobell {

enum class Wing { A, B };

// Sorted cut points partitioning [0, pi] into maximal intervals on which
// every factor of the combination integrand is smooth: the lambda-law
// segment boundaries plus the deterministic response sign boundaries at
// setting +- pi/4.  Duplicates collapse within 1e-14.
struct Breakpoints {
  std::vector<double> cuts;  // ascending, cuts.front() == 0, cuts.back() == pi

  static Breakpoints collect(const HiddenVariableModel& model, const LambdaLaw& law,
                             Angle a, Angle b) {
    std::vector<double> cuts{0.0, kPi};
    for (const Segment& seg : law.segments()) {
      cuts.push_back(seg.left);
      cuts.push_back(seg.right);
    }
    if (model.response_kind_a == ResponseKind::deterministic) {
      cuts.push_back(a.rotated(kPi / 4.0).radians());
      cuts.push_back(a.rotated(-kPi / 4.0).radians());
    }
    if (model.response_kind_b == ResponseKind::deterministic) {
      cuts.push_back(b.rotated(kPi / 4.0).radians());
      cuts.push_back(b.rotated(-kPi / 4.0).radians());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return y - x <= 1e-14; }),
               cuts.end());
    if (kPi - cuts.back() <= 1e-14) cuts.back() = kPi;
    return {std::move(cuts)};
  }
};

namespace detail {

// One wing's response to a fixed outcome, on an interval where its sign is
// constant: f(lambda) = offset + amplitude * cos(2*lambda - 2*center).
// Malus gives (1/2, +-1/2); deterministic gives (0 or 1, 0).
struct ResponseFactor {
  double offset = 0.0;
  double amplitude = 0.0;
  double center = 0.0;
};

inline ResponseFactor response_factor(ResponseKind kind, Angle setting, Outcome outcome,
                                      Angle interval_mid) {
  if (kind == ResponseKind::malus) {
    return {0.5, outcome == Outcome::plus ? 0.5 : -0.5, setting.radians()};
  }
  return {hall_response(setting, interval_mid, outcome), 0.0, 0.0};
}

// Exact integral over [l, r] of the product of two response factors:
// a sum of a constant, two cos(2*lambda - .) terms and one
// cos(4*lambda - .) term, each with an elementary antiderivative.
inline double integrate_product(const ResponseFactor& fa, const ResponseFactor& fb, double l,
                                double r) {
  const double len = r - l;
  double total = fa.offset * fb.offset * len;
  if (fb.amplitude != 0.0) {
    total += fa.offset * fb.amplitude *
             (std::sin(2.0 * r - 2.0 * fb.center) - std::sin(2.0 * l - 2.0 * fb.center)) / 2.0;
  }
  if (fa.amplitude != 0.0) {
    total += fb.offset * fa.amplitude *
             (std::sin(2.0 * r - 2.0 * fa.center) - std::sin(2.0 * l - 2.0 * fa.center)) / 2.0;
  }
  if (fa.amplitude != 0.0 && fb.amplitude != 0.0) {
    const double cross = fa.amplitude * fb.amplitude;
    const double phase = 2.0 * fa.center + 2.0 * fb.center;
    total += cross * (len * std::cos(2.0 * fa.center - 2.0 * fb.center) / 2.0 +
                      (std::sin(4.0 * r - phase) - std::sin(4.0 * l - phase)) / 8.0);
  }
  return total;
}

}  // namespace detail

// Closed-form evaluation of p(A,B) = integral d(lambda) of
// law(lambda) * response_A(A|a,lambda) * response_B(B|b,lambda).
// Atomic laws reduce to a weighted sum over atoms; piecewise laws to exact
// trigonometric antiderivatives per breakpoint interval.
inline JointDist combine(const HiddenVariableModel& model, Angle a, Angle b) {
  const LambdaLaw law = model.lambda_law(a, b);
  JointDist j;

  switch (law.kind()) {
    case LambdaLaw::Kind::atomic: {
      for (const Atom& atom : law.atoms()) {
        for (Outcome oa : kOutcomes) {
          for (Outcome ob : kOutcomes) {
            j.cell(oa, ob) += atom.weight * model.response_A(a, atom.position, oa) *
                              model.response_B(b, atom.position, ob);
          }
        }
      }
      break;
    }
    case LambdaLaw::Kind::piecewise_density: {
      const Breakpoints bp = Breakpoints::collect(model, law, a, b);
      for (std::size_t i = 0; i + 1 < bp.cuts.size(); ++i) {
        const double l = bp.cuts[i];
        const double r = bp.cuts[i + 1];
        const Angle mid(0.5 * (l + r));
        const double density = law.density_at(mid);
        if (density == 0.0) continue;
        for (Outcome oa : kOutcomes) {
          const auto fa = detail::response_factor(model.response_kind_a, a, oa, mid);
          if (fa.offset == 0.0 && fa.amplitude == 0.0) continue;
          for (Outcome ob : kOutcomes) {
            const auto fb = detail::response_factor(model.response_kind_b, b, ob, mid);
            if (fb.offset == 0.0 && fb.amplitude == 0.0) continue;
            j.cell(oa, ob) += density * detail::integrate_product(fa, fb, l, r);
          }
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("combine: unsupported lambda-law kind");
  }

  if (std::fabs(j.sum() - 1.0) > 1e-10) {
    throw std::logic_error("combine: probabilities do not sum to 1");
  }
  return clamp_and_normalize(j);
}

// E = sum over outcomes of A*B*p(A,B).
inline double correlator(const JointDist& j) { return j.pp - j.pm - j.mp + j.mm; }

// Probability of +1 on one wing.
inline double marginal(const JointDist& j, Wing wing) {
  return wing == Wing::A ? j.pp + j.pm : j.pp + j.mp;
}

// Total variation distance between two joint distributions.
inline double tv_distance(const JointDist& j1, const JointDist& j2) {
  double sum = 0.0;
  for (Outcome a : kOutcomes) {
    for (Outcome b : kOutcomes) {
      sum += std::fabs(j1.cell(a, b) - j2.cell(a, b));
    }
  }
  return 0.5 * sum;
}

}  // namespace retrobell

#endif  // RETROBELL_EVALUATE_HPP
