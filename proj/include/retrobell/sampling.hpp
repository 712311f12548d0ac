#ifndef RETROBELL_SAMPLING_HPP
#define RETROBELL_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "retrobell/angle.hpp"
#include "retrobell/joint.hpp"
#include "retrobell/lambda_law.hpp"
#include "retrobell/registry.hpp"
#include "retrobell/rng.hpp"

namespace retrobell {

// One realized trial.  lambda is absent for the QM reference model, which
// assigns no hidden variable.
struct TrialRecord {
  Angle a;
  Angle b;
  std::optional<Angle> lambda;
  Outcome A = Outcome::plus;
  Outcome B = Outcome::plus;
};

// Outcome counts for the four (A,B) cells.
struct EmpiricalJoint {
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;

  std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }

  std::uint64_t count(Outcome a, Outcome b) const {
    if (a == Outcome::plus) return b == Outcome::plus ? n_pp : n_pm;
    return b == Outcome::plus ? n_mp : n_mm;
  }

  void add(Outcome a, Outcome b) {
    if (a == Outcome::plus) {
      (b == Outcome::plus ? n_pp : n_pm) += 1;
    } else {
      (b == Outcome::plus ? n_mp : n_mm) += 1;
    }
  }

  EmpiricalJoint& operator+=(const EmpiricalJoint& other) {
    n_pp += other.n_pp;
    n_pm += other.n_pm;
    n_mp += other.n_mp;
    n_mm += other.n_mm;
    return *this;
  }

  double freq(Outcome a, Outcome b) const {
    return static_cast<double>(count(a, b)) / static_cast<double>(total());
  }

  // sqrt(p_hat(1 - p_hat)/n) for one cell.
  double std_error(Outcome a, Outcome b) const {
    const double p = freq(a, b);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(total()));
  }

  friend bool operator==(const EmpiricalJoint&, const EmpiricalJoint&) = default;
};

// One draw from a lambda law.  Atomic: categorical over atoms.  Piecewise:
// inverse CDF over segments, uniform within a segment.  Consumes exactly
// one uniform variate.
inline Angle sample_lambda(const LambdaLaw& law, Xoshiro256pp& rng) {
  const double u = rng.next_unit();
  if (law.is_atomic()) {
    double cum = 0.0;
    const auto& atoms = law.atoms();
    for (const Atom& atom : atoms) {
      cum += atom.weight;
      if (u < cum) return atom.position;
    }
    return atoms.back().position;
  }
  double cum = 0.0;
  const auto& segments = law.segments();
  for (const Segment& seg : segments) {
    const double mass = seg.mass();
    if (u < cum + mass) {
      return Angle(seg.left + (u - cum) / seg.density);
    }
    cum += mass;
  }
  return Angle(segments.back().right);  // u == 1 - ulp against accumulated rounding
}

namespace detail {

inline Outcome sample_response(ResponseKind kind, Angle setting, Angle lambda,
                               Xoshiro256pp& rng) {
  if (kind == ResponseKind::deterministic) {
    return hall_Ahat(setting, lambda);  // no randomness consumed
  }
  return rng.next_unit() < malus_prob(setting, lambda, Outcome::plus) ? Outcome::plus
                                                                      : Outcome::minus;
}

// Per-trial core with a prebuilt law.  Variate consumption order: lambda,
// then wing A, then wing B (Malus wings take one uniform each).
inline TrialRecord sample_trial(const HiddenVariableModel& model, Angle a, Angle b,
                                const LambdaLaw& law, Xoshiro256pp& rng) {
  const Angle lambda = sample_lambda(law, rng);
  const Outcome A = sample_response(model.response_kind_a, a, lambda, rng);
  const Outcome B = sample_response(model.response_kind_b, b, lambda, rng);
  return {a, b, lambda, A, B};
}

// QM reference trial: one uniform, categorical over the four cells in the
// fixed order (+,+), (+,-), (-,+), (-,-).
inline TrialRecord sample_reference_trial(const JointDist& joint, Angle a, Angle b,
                                          Xoshiro256pp& rng) {
  const double u = rng.next_unit();
  TrialRecord rec{a, b, std::nullopt, Outcome::plus, Outcome::plus};
  double cum = joint.pp;
  if (u < cum) return rec;
  cum += joint.pm;
  if (u < cum) {
    rec.B = Outcome::minus;
    return rec;
  }
  cum += joint.mp;
  rec.A = Outcome::minus;
  rec.B = u < cum ? Outcome::plus : Outcome::minus;
  return rec;
}

}  // namespace detail

// One trial under the model's own law.
inline TrialRecord sample_outcomes(const Model& model, Angle a, Angle b, Xoshiro256pp& rng) {
  if (model.has_hidden_variable()) {
    const LambdaLaw law = model.hv().lambda_law(a, b);
    return detail::sample_trial(model.hv(), a, b, law, rng);
  }
  return detail::sample_reference_trial(model.joint(a, b), a, b, rng);
}

inline constexpr std::uint64_t kDefaultBatchSize = 1u << 16;

using TrialSink = std::function<void(const TrialRecord&)>;

// n trials at fixed settings, partitioned into batches of batch_size; batch
// k consumes the substream Xoshiro256pp::substream(seed, k).  For a fixed
// partition the result is a pure function of (model, a, b, n, seed), and
// batches can be regenerated independently; counts merge by addition.
inline EmpiricalJoint run_trials(const Model& model, Angle a, Angle b, std::uint64_t n,
                                 std::uint64_t seed, std::uint64_t batch_size = kDefaultBatchSize,
                                 const TrialSink& sink = nullptr) {
  if (n == 0) throw std::invalid_argument("run_trials: trial count must be >= 1");
  if (batch_size == 0) throw std::invalid_argument("run_trials: batch size must be >= 1");

  const bool hv = model.has_hidden_variable();
  const LambdaLaw law = hv ? model.hv().lambda_law(a, b) : uniform_lambda_law();
  const JointDist joint = hv ? JointDist{} : model.joint(a, b);

  EmpiricalJoint counts;
  const std::uint64_t n_batches = (n + batch_size - 1) / batch_size;
  for (std::uint64_t k = 0; k < n_batches; ++k) {
    Xoshiro256pp rng = Xoshiro256pp::substream(seed, k);
    const std::uint64_t begin = k * batch_size;
    const std::uint64_t end = begin + std::min(batch_size, n - begin);
    for (std::uint64_t t = begin; t < end; ++t) {
      const TrialRecord rec = hv ? detail::sample_trial(model.hv(), a, b, law, rng)
                                 : detail::sample_reference_trial(joint, a, b, rng);
      counts.add(rec.A, rec.B);
      if (sink) sink(rec);
    }
  }
  return counts;
}

// --- trial-log emission: one record per line, "a,b,lambda,A,B" ---

inline std::string format_full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_trial_csv(std::ostream& out, const TrialRecord& rec) {
  out << format_full_precision(rec.a.radians()) << ','
      << format_full_precision(rec.b.radians()) << ','
      << (rec.lambda ? format_full_precision(rec.lambda->radians()) : std::string("nan")) << ','
      << outcome_sign(rec.A) << ',' << outcome_sign(rec.B) << '\n';
}

inline std::vector<TrialRecord> read_trial_csv(std::istream& in) {
  std::vector<TrialRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a = 0.0, b = 0.0, lambda = 0.0;
    int sa = 0, sb = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d,%d", &a, &b, &lambda, &sa, &sb) != 5 ||
        (sa != 1 && sa != -1) || (sb != 1 && sb != -1)) {
      throw std::invalid_argument("trial log: malformed record '" + line + "'");
    }
    TrialRecord rec;
    rec.a = Angle(a);
    rec.b = Angle(b);
    rec.lambda = std::isnan(lambda) ? std::nullopt : std::optional<Angle>(Angle(lambda));
    rec.A = outcome_from_sign(sa);
    rec.B = outcome_from_sign(sb);
    records.push_back(rec);
  }
  return records;
}

inline EmpiricalJoint tally_trials(std::span<const TrialRecord> records) {
  EmpiricalJoint counts;
  for (const TrialRecord& rec : records) counts.add(rec.A, rec.B);
  return counts;
}

}  // namespace retrobell

#endif  // RETROBELL_SAMPLING_HPP
