#ifndef RETROBELL_REGISTRY_HPP
#define RETROBELL_REGISTRY_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "retrobell/evaluate.hpp"
#include "retrobell/models.hpp"

namespace retrobell {

// A runnable model: either the QM reference (closed-form joint, no hidden
// variable) or a hidden-variable model evaluated through combine().
class Model {
 public:
  static Model reference_qm() { return Model("qm", std::nullopt, true); }

  static Model hidden_variable(HiddenVariableModel hv) {
    const std::string name = hv.name;
    const bool mi = hv.measurement_independent;
    return Model(name, std::move(hv), mi);
  }

  const std::string& name() const { return name_; }
  bool has_hidden_variable() const { return hv_.has_value(); }
  bool measurement_independent() const { return measurement_independent_; }

  const HiddenVariableModel& hv() const {
    if (!hv_) throw std::logic_error("Model: '" + name_ + "' has no hidden-variable form");
    return *hv_;
  }

  // Exact joint distribution at the given settings.
  JointDist joint(Angle a, Angle b) const {
    return hv_ ? combine(*hv_, a, b) : qm_joint(a, b);
  }

 private:
  Model(std::string name, std::optional<HiddenVariableModel> hv, bool mi)
      : name_(std::move(name)), hv_(std::move(hv)), measurement_independent_(mi) {}

  std::string name_;
  std::optional<HiddenVariableModel> hv_;
  bool measurement_independent_;
};

// The four built-in models, in canonical order.
inline std::vector<Model> builtin_models() {
  return {Model::reference_qm(), Model::hidden_variable(simplistic_model()),
          Model::hidden_variable(hall_model()), Model::hidden_variable(baseline_local_model())};
}

// Registered model lookup; includes the signaling counterexample under the
// name "signaling".  Throws std::invalid_argument for unknown names.
inline Model find_model(const std::string& name) {
  if (name == "qm") return Model::reference_qm();
  if (name == "simplistic") return Model::hidden_variable(simplistic_model());
  if (name == "hall") return Model::hidden_variable(hall_model());
  if (name == "baseline") return Model::hidden_variable(baseline_local_model());
  if (name == "signaling") return Model::hidden_variable(signaling_test_model());
  throw std::invalid_argument("unknown model '" + name + "'");
}

inline const std::vector<std::string>& known_model_names() {
  static const std::vector<std::string> names{"qm", "simplistic", "hall", "baseline", "signaling"};
  return names;
}

}  // namespace retrobell

#endif  // RETROBELL_REGISTRY_HPP
