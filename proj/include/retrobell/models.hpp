#ifndef RETROBELL_MODELS_HPP
#define RETROBELL_MODELS_HPP

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "retrobell/angle.hpp"
#include "retrobell/joint.hpp"
#include "retrobell/lambda_law.hpp"

namespace retrobell {

// Singlet photon-pair statistics: p(A,B) = (1/4)[1 + A*B*cos(2a - 2b)].
inline JointDist qm_joint(Angle a, Angle b) {
  const double c = std::cos(2.0 * (a.radians() - b.radians()));
  JointDist j;
  for (Outcome oa : kOutcomes) {
    for (Outcome ob : kOutcomes) {
      j.cell(oa, ob) = 0.25 * (1.0 + outcome_sign(oa) * outcome_sign(ob) * c);
    }
  }
  return j;
}

// Malus response: P(+1) = cos^2(lambda - setting).  The -1 branch is the
// exact complement, so the two branches sum to 1 exactly.
inline double malus_prob(Angle setting, Angle lambda, Outcome outcome) {
  const double c = std::cos(lambda.radians() - setting.radians());
  const double p_plus = c * c;
  return outcome == Outcome::plus ? p_plus : 1.0 - p_plus;
}

// Deterministic outcome sign[cos(2*setting - 2*lambda)], evaluated through
// the circle distance so the boundary convention sign(0) = +1 is exact:
// +1 on the closed arc within pi/4 of the setting, -1 outside.
inline Outcome hall_Ahat(Angle setting, Angle lambda) {
  return angular_distance(setting, lambda) <= kPi / 4.0 ? Outcome::plus : Outcome::minus;
}

// z = (2/pi)|2a - 2b| with |2a - 2b| the reduced distance of 2a - 2b on the
// mod-2pi circle, i.e. twice the mod-pi setting distance.  Ranges over [0, 2].
inline double hall_z(Angle a, Angle b) {
  return (4.0 / kPi) * angular_distance(a, b);
}

// Deterministic response: probability delta_{outcome, Ahat}.
inline double hall_response(Angle setting, Angle lambda, Outcome outcome) {
  return outcome == hall_Ahat(setting, lambda) ? 1.0 : 0.0;
}

// Four point masses of weight 1/4 at a, a + pi/2, b, b + pi/2 (reduced);
// coinciding positions merge by weight summation.
inline LambdaLaw simplistic_lambda_law(Angle a, Angle b) {
  return LambdaLaw::atomic({{a, 0.25},
                            {a.rotated(kPi / 2.0), 0.25},
                            {b, 0.25},
                            {b.rotated(kPi / 2.0), 0.25}});
}

// Piecewise-constant density (1/pi)[1 + AB*cos(2a-2b)] / [1 + AB*(1-z)] on
// each maximal interval of constant AhatBhat sign.  Breakpoints sit at
// a +- pi/4 and b +- pi/4; the denominator is evaluated only on populated
// segments, where it never vanishes.
inline LambdaLaw hall_lambda_law(Angle a, Angle b) {
  const double z = hall_z(a, b);
  const double c = std::cos(2.0 * (a.radians() - b.radians()));

  std::vector<double> cuts{0.0, kPi};
  for (Angle s : {a, b}) {
    cuts.push_back(s.rotated(kPi / 4.0).radians());
    cuts.push_back(s.rotated(-kPi / 4.0).radians());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x <= LambdaLaw::kBoundaryTol; }),
             cuts.end());
  if (kPi - cuts.back() <= LambdaLaw::kBoundaryTol) cuts.back() = kPi;

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double left = cuts[i];
    const double right = cuts[i + 1];
    const Angle mid(0.5 * (left + right));
    const int sign = outcome_sign(hall_Ahat(a, mid)) * outcome_sign(hall_Ahat(b, mid));
    const double density = (1.0 / kPi) * (1.0 + sign * c) / (1.0 + sign * (1.0 - z));
    segments.push_back({left, right, density});
  }
  return LambdaLaw::piecewise(std::move(segments));
}

// Uniform density 1/pi on [0, pi).
inline LambdaLaw uniform_lambda_law() {
  return LambdaLaw::piecewise({{0.0, kPi, 1.0 / kPi}});
}

// Which response family a wing uses; the exact evaluator integrates each in
// closed form.
enum class ResponseKind { malus, deterministic };

inline double response_prob(ResponseKind kind, Angle setting, Angle lambda, Outcome outcome) {
  return kind == ResponseKind::malus ? malus_prob(setting, lambda, outcome)
                                     : hall_response(setting, lambda, outcome);
}

// A Bell-factorized hidden-variable model: a setting-conditioned lambda law
// plus per-wing response rules.  measurement_independent marks models whose
// lambda law is the same for every setting pair.
struct HiddenVariableModel {
  std::string name;
  std::function<LambdaLaw(Angle, Angle)> lambda_law;
  ResponseKind response_kind_a = ResponseKind::malus;
  ResponseKind response_kind_b = ResponseKind::malus;
  bool measurement_independent = false;

  double response_A(Angle a, Angle lambda, Outcome outcome) const {
    return response_prob(response_kind_a, a, lambda, outcome);
  }
  double response_B(Angle b, Angle lambda, Outcome outcome) const {
    return response_prob(response_kind_b, b, lambda, outcome);
  }
};

inline HiddenVariableModel simplistic_model() {
  return {"simplistic",
          [](Angle a, Angle b) { return simplistic_lambda_law(a, b); },
          ResponseKind::malus,
          ResponseKind::malus,
          false};
}

inline HiddenVariableModel hall_model() {
  return {"hall",
          [](Angle a, Angle b) { return hall_lambda_law(a, b); },
          ResponseKind::deterministic,
          ResponseKind::deterministic,
          false};
}

// Measurement-independent local contrast model: uniform lambda with the
// deterministic responses.  Bell-local, yet fails QM equivalence (its
// correlator is the sawtooth 1 - 4d/pi).
inline HiddenVariableModel baseline_local_model() {
  return {"baseline",
          [](Angle, Angle) { return uniform_lambda_law(); },
          ResponseKind::deterministic,
          ResponseKind::deterministic,
          true};
}

// Deliberately signaling counterexample used to validate the no-signaling
// detector: lambda is pinned to the remote setting b, so wing A's marginal
// cos^2(b - a) tracks b.
inline HiddenVariableModel signaling_test_model() {
  return {"signaling",
          [](Angle, Angle b) { return LambdaLaw::atomic({{b, 1.0}}); },
          ResponseKind::malus,
          ResponseKind::malus,
          false};
}

}  // namespace retrobell

#endif  // RETROBELL_MODELS_HPP
