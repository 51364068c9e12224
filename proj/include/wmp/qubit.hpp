#pragma once

// Two-level measured system: pre/post-selected states, the observable and its
// weak value.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "wmp/errors.hpp"
#include "wmp/specfn.hpp"

namespace wmp {

// |<psi_f|psi_i>| at or below this makes the weak value meaningless.
inline constexpr double kOrthogonalCutoff = 1e-14;

struct QubitState {
  Eigen::Vector2cd amplitudes;  // sigma_z basis: (up, down)

  QubitState(cdouble up, cdouble down) : amplitudes(up, down) {
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12) throw ConfigError("qubit state must have unit norm");
  }

  static QubitState up() { return {1.0, 0.0}; }
  static QubitState down() { return {0.0, 1.0}; }
};

/// theta in [0, pi], phi in [0, 2 pi).
struct Selection {
  double theta = 0.0;
  double phi = 0.0;

  static Selection checked(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw ConfigError("theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) throw ConfigError("phi must lie in [0, 2pi)");
    return {theta, phi};
  }
};

/// cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>
inline QubitState pre_selected_state(const Selection& sel) {
  return {std::cos(sel.theta / 2.0), std::polar(std::sin(sel.theta / 2.0), sel.phi)};
}

inline QubitState post_selected_state() { return QubitState::up(); }

/// Probability convention cos^2(theta/2) used in the SNR definition.
inline double postselection_probability(const Selection& sel) {
  const double c = std::cos(sel.theta / 2.0);
  return c * c;
}

enum class OperatorClass { involutory, projector };

inline const char* to_string(OperatorClass c) { return c == OperatorClass::involutory ? "involutory" : "projector"; }

inline OperatorClass parse_operator_class(const std::string& text) {
  if (text == "involutory") return OperatorClass::involutory;
  if (text == "projector") return OperatorClass::projector;
  throw ConfigError("operator class must be 'involutory' or 'projector', got '" + text + "'");
}

class SystemOperator {
 public:
  SystemOperator(const Eigen::Matrix2cd& matrix, OperatorClass cls) : matrix_(matrix), class_(cls) {
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ClassViolationError("system operator is not Hermitian");
    const Eigen::Matrix2cd sq = matrix_ * matrix_;
    const Eigen::Matrix2cd target = cls == OperatorClass::involutory ? Eigen::Matrix2cd::Identity() : matrix_;
    if ((sq - target).cwiseAbs().maxCoeff() > 1e-12)
      throw ClassViolationError(std::string("operator does not satisfy the ") + to_string(cls) + " relation");
  }

  static SystemOperator sigma_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return {m, OperatorClass::involutory};
  }

  /// (I + sigma_x) / 2
  static SystemOperator projector_plus_x() {
    Eigen::Matrix2cd m;
    m << 0.5, 0.5, 0.5, 0.5;
    return {m, OperatorClass::projector};
  }

  static SystemOperator for_class(OperatorClass cls) {
    return cls == OperatorClass::involutory ? sigma_x() : projector_plus_x();
  }

  [[nodiscard]] const Eigen::Matrix2cd& matrix() const { return matrix_; }
  [[nodiscard]] OperatorClass op_class() const { return class_; }

 private:
  Eigen::Matrix2cd matrix_;
  OperatorClass class_;
};

inline cdouble selection_overlap(const QubitState& psi_i, const QubitState& psi_f) {
  return psi_f.amplitudes.dot(psi_i.amplitudes);
}

/// <psi_f|A|psi_i> / <psi_f|psi_i>
inline cdouble weak_value(const QubitState& psi_i, const QubitState& psi_f, const SystemOperator& op) {
  const cdouble overlap = selection_overlap(psi_i, psi_f);
  if (std::abs(overlap) <= kOrthogonalCutoff) throw OrthogonalSelectionError("pre- and post-selected states are orthogonal; weak value undefined");
  return psi_f.amplitudes.dot(op.matrix() * psi_i.amplitudes) / overlap;
}

/// Inverse of w = e^{i phi} tan(theta/2).
inline Selection selection_for_sigma_weak_value(cdouble w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw ConfigError("weak value must be finite");
  double phi = std::arg(w);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return {2.0 * std::atan(std::abs(w)), phi};
}

}  // namespace wmp
