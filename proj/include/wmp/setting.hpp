#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "wmp/errors.hpp"
#include "wmp/modes.hpp"
#include "wmp/qubit.hpp"

namespace wmp {

/// One point of the experiment: coupling, pointer mode, observable class and
/// the selection that fixes the weak value.
///
/// A setting built from a Selection derives the weak value from the qubit
/// states. A setting built from a weak value carries the angles of
/// w = e^{i phi} tan(theta/2), which is also what fixes the cos^2(theta/2)
/// probability convention for it, for either operator class.
struct MeasurementSetting {
  double s = 0.0;      // g / sigma
  double sigma = 1.0;  // beam width
  PointerMode mode{};
  OperatorClass op_class = OperatorClass::involutory;
  cdouble weak_value{};
  Selection selection{};
  bool angle_specified = false;  // built from (theta, phi) rather than a weak value

  [[nodiscard]] double coupling() const { return s * sigma; }
  [[nodiscard]] double ps_paper() const { return postselection_probability(selection); }

  static MeasurementSetting from_weak_value(const PointerMode& mode, OperatorClass cls, cdouble w, double s, double sigma = 1.0) {
    MeasurementSetting out{s, sigma, mode, cls, w, selection_for_sigma_weak_value(w), false};
    out.validate();
    return out;
  }

  static MeasurementSetting from_selection(const PointerMode& mode, OperatorClass cls, const Selection& sel, double s,
                                           double sigma = 1.0) {
    const Selection checked = Selection::checked(sel.theta, sel.phi);
    const cdouble w = wmp::weak_value(pre_selected_state(checked), post_selected_state(), SystemOperator::for_class(cls));
    MeasurementSetting out{s, sigma, mode, cls, w, checked, true};
    out.validate();
    return out;
  }

  void validate() const {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("coupling strength s must be finite and non-negative");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("beam width sigma must be positive");
    if (!std::isfinite(weak_value.real()) || !std::isfinite(weak_value.imag())) throw ConfigError("weak value must be finite");
  }
};

struct QubitSelection {
  QubitState pre;
  QubitState post;
};

/// Qubit states realizing the setting's weak value for its operator class.
inline QubitSelection realizing_states(const MeasurementSetting& setting) {
  if (setting.angle_specified) return {pre_selected_state(setting.selection), post_selected_state()};
  // For (I + sigma_x)/2 the weak value is (1 + w_sigma)/2.
  const cdouble w_sigma = setting.op_class == OperatorClass::involutory ? setting.weak_value : 2.0 * setting.weak_value - 1.0;
  return {pre_selected_state(selection_for_sigma_weak_value(w_sigma)), post_selected_state()};
}

}  // namespace wmp
