#pragma once

// Joint qubit (x) pointer evolution under exp(-i g A (x) P_x), post-selection
// onto |psi_f>, and the brute-force moments of the resulting pointer.
//
// Two independent evolution routes are provided: the closed decomposition
// into displacement operators, and a dense matrix exponential of the
// truncated generator. The oracle pipeline uses the first; the second exists
// to check it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "wmp/errors.hpp"
#include "wmp/fock.hpp"
#include "wmp/modes.hpp"
#include "wmp/qubit.hpp"
#include "wmp/setting.hpp"
#include "wmp/specfn.hpp"

namespace wmp {

/// dim_x = n_max + ceil((s/2 + 6)^2) + 10; dim_y covers the mode's y levels.
inline Shape adaptive_shape(const PointerMode& mode, double s) {
  const double tail = s / 2.0 + 6.0;
  const int dim_x = mode.max_x_level() + static_cast<int>(std::ceil(tail * tail)) + 10;
  return {1, dim_x, mode.y_levels()};
}

inline TruncatedState joint_state(const QubitState& qubit, const TruncatedState& pointer) {
  if (pointer.shape().qubit_dim != 1) throw DimensionError("pointer state must not carry a qubit factor");
  Shape sh = pointer.shape();
  sh.qubit_dim = 2;
  TruncatedState out(sh);
  for (int q = 0; q < 2; ++q) out.block(q) = qubit.amplitudes[q] * pointer.block(0);
  return out;
}

/// D(xi) applied along x, building only the columns the state occupies.
inline TruncatedState apply_displacement(cdouble xi, const TruncatedState& state) {
  const Shape& sh = state.shape();
  int used = 0;
  for (int q = 0; q < sh.qubit_dim; ++q)
    for (int x = sh.dim_x - 1; x >= used; --x)
      if (state.block(q).row(x).squaredNorm() > 0.0) {
        used = x + 1;
        break;
      }
  Eigen::MatrixXcd cols(sh.dim_x, used);
  for (int c = 0; c < used; ++c)
    for (int r = 0; r < sh.dim_x; ++r) cols(r, c) = displaced_fock_element(r, c, xi);
  TruncatedState out(sh);
  for (int q = 0; q < sh.qubit_dim; ++q) out.block(q).noalias() = cols * state.block(q).topRows(used);
  return out;
}

/// Involutory: 1/2 (I+A) (x) D(s/2) + 1/2 (I-A) (x) D(-s/2).
/// Projector:  (I-A) (x) I + A (x) D(s/2).
inline TruncatedState evolve_decomposed(const SystemOperator& op, double s, const TruncatedState& pointer,
                                        const QubitState& psi_i) {
  if (s < 0.0) throw ConfigError("coupling strength must be non-negative");
  const Eigen::Matrix2cd& a = op.matrix();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const TruncatedState forward = apply_displacement(s / 2.0, pointer);
  TruncatedState out(Shape{2, pointer.shape().dim_x, pointer.shape().dim_y});

  if (op.op_class() == OperatorClass::involutory) {
    const TruncatedState backward = apply_displacement(-s / 2.0, pointer);
    const Eigen::Vector2cd plus = 0.5 * (id + a) * psi_i.amplitudes;
    const Eigen::Vector2cd minus = 0.5 * (id - a) * psi_i.amplitudes;
    for (int q = 0; q < 2; ++q) out.block(q) = plus[q] * forward.block(0) + minus[q] * backward.block(0);
  } else {
    const Eigen::Vector2cd stay = (id - a) * psi_i.amplitudes;
    const Eigen::Vector2cd moved = a * psi_i.amplitudes;
    for (int q = 0; q < 2; ++q) out.block(q) = stay[q] * pointer.block(0) + moved[q] * forward.block(0);
  }
  return out;
}

// Largest qubit (x) x dimension the dense exponential is allowed to build.
inline constexpr int kMaxExponentialDim = 1200;

/// exp(-i g A (x) P_x) as a dense exponential of the truncated generator
/// (s/2) A (x) (a^dagger - a), lifted by the identity on y.
inline TruncatedState evolve_exponential(const SystemOperator& op, double s, const TruncatedState& pointer,
                                         const QubitState& psi_i) {
  if (s < 0.0) throw ConfigError("coupling strength must be non-negative");
  const int dx = pointer.shape().dim_x;
  const int dy = pointer.shape().dim_y;
  if (2 * dx > kMaxExponentialDim) throw ResourceError("dense exponential exceeds dimension limit");

  const Eigen::MatrixXcd a = annihilation_matrix(dx);
  const Eigen::MatrixXcd shift = a.adjoint() - a;
  Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(2 * dx, 2 * dx);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) generator.block(r * dx, c * dx, dx, dx) = (0.5 * s) * op.matrix()(r, c) * shift;
  const Eigen::MatrixXcd u = generator.exp();

  TruncatedState joint = joint_state(psi_i, pointer);
  Eigen::Map<RowMatrixXcd> flat(joint.amplitudes().data(), 2 * dx, dy);
  const RowMatrixXcd evolved = u * flat;
  flat = evolved;
  return joint;
}

/// <psi_f| (x) I applied to a joint state; result is unnormalized.
inline TruncatedState project_qubit(const TruncatedState& joint, const QubitState& psi_f) {
  if (joint.shape().qubit_dim != 2) throw DimensionError("projection needs a joint qubit state");
  TruncatedState out(Shape{1, joint.shape().dim_x, joint.shape().dim_y});
  for (int q = 0; q < 2; ++q) out.block(0) += std::conj(psi_f.amplitudes[q]) * joint.block(q);
  return out;
}

struct OracleResult {
  TruncatedState pointer;  // normalized
  double exact_prob = 0.0;  // squared norm of the post-selected pointer
  cdouble overlap{};        // <psi_f|psi_i>

  // |<psi_f|psi_i>| / sqrt(exact_prob): the norm coefficient seen by the oracle.
  [[nodiscard]] double norm_coefficient() const { return std::abs(overlap) / std::sqrt(exact_prob); }
};

inline OracleResult oracle_final_pointer(const MeasurementSetting& setting, std::optional<Shape> dims = std::nullopt) {
  setting.validate();
  const QubitSelection qs = realizing_states(setting);
  const cdouble overlap = selection_overlap(qs.pre, qs.post);
  if (std::abs(overlap) <= kOrthogonalCutoff) throw OrthogonalSelectionError("pre- and post-selected states are orthogonal");

  const Shape shape = dims.value_or(adaptive_shape(setting.mode, setting.s));
  const TruncatedState initial = pointer_state(setting.mode, shape);
  const SystemOperator op = SystemOperator::for_class(setting.op_class);
  const TruncatedState joint = evolve_decomposed(op, setting.s, initial, qs.pre);
  const TruncatedState projected = project_qubit(joint, qs.post);
  const double prob = projected.squared_norm();
  if (!(prob > 0.0)) throw DegeneratePointerError("post-selected pointer vanishes");
  return {projected.normalized(), prob, overlap};
}

struct OracleMoments {
  double x_mean = 0.0;
  double y_mean = 0.0;
  double px_mean = 0.0;
  double py_mean = 0.0;
  double x_var = 0.0;
  double y_var = 0.0;
  double px_var = 0.0;
  double py_var = 0.0;
  double imag_residue = 0.0;  // largest |Im| among the first moments
};

namespace detail {

struct ModeMoments {
  double pos_mean = 0.0, mom_mean = 0.0, pos_var = 0.0, mom_var = 0.0, residue = 0.0;
};

inline ModeMoments mode_moments(const TruncatedState& pointer, double sigma, ModeTag tag) {
  ModeMoments out;
  const int dim = pointer.shape().dim(tag);
  if (dim >= 2) {
    const Quadratures quad = build_quadratures(dim, sigma, tag);
    const cdouble xm = expectation(pointer, quad.position);
    const cdouble pm = expectation(pointer, quad.momentum);
    out.pos_mean = xm.real();
    out.mom_mean = pm.real();
    out.residue = std::max(std::abs(xm.imag()), std::abs(pm.imag()));
  }
  // Second moments from ladder moments avoid the truncation edge of X^2.
  const LadderMoments lm = ladder_moments(pointer, tag);
  const double x2 = sigma * sigma * (2.0 * lm.a2.real() + 2.0 * lm.n + 1.0);
  const double p2 = (2.0 * lm.n + 1.0 - 2.0 * lm.a2.real()) / (4.0 * sigma * sigma);
  out.pos_var = x2 - out.pos_mean * out.pos_mean;
  out.mom_var = p2 - out.mom_mean * out.mom_mean;
  return out;
}

}  // namespace detail

inline OracleMoments oracle_moments(const TruncatedState& pointer, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("beam width must be positive");
  if (pointer.shape().qubit_dim != 1) throw DimensionError("oracle moments need a bare pointer state");
  const detail::ModeMoments mx = detail::mode_moments(pointer, sigma, ModeTag::x);
  const detail::ModeMoments my = detail::mode_moments(pointer, sigma, ModeTag::y);
  return {mx.pos_mean, my.pos_mean, mx.mom_mean, my.mom_mean, mx.pos_var, my.pos_var,
          mx.mom_var,  my.mom_var,  std::max(mx.residue, my.residue)};
}

struct OracleOptions {
  bool verify_truncation = true;
  double truncation_tolerance = 1e-9;
  std::optional<int> dim_x;  // overrides the adaptive rule
};

struct OracleReport {
  OracleMoments moments;
  double exact_prob = 0.0;
  double norm_coefficient = 0.0;
  Shape shape{};
  double truncation_delta = 0.0;  // largest change seen by the doubling test
};

namespace detail {

inline double relative_change(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

inline double max_moment_change(const OracleMoments& a, const OracleMoments& b) {
  return std::max({relative_change(a.x_mean, b.x_mean), relative_change(a.y_mean, b.y_mean),
                   relative_change(a.px_mean, b.px_mean), relative_change(a.x_var, b.x_var),
                   relative_change(a.y_var, b.y_var), relative_change(a.px_var, b.px_var)});
}

}  // namespace detail

/// Oracle pointer plus its moments; with verify_truncation the run is
/// repeated at twice the x dimension and must agree.
inline OracleReport oracle_evaluate(const MeasurementSetting& setting, const OracleOptions& options = {}) {
  Shape shape = adaptive_shape(setting.mode, setting.s);
  if (options.dim_x) {
    if (*options.dim_x <= setting.mode.max_x_level()) throw TruncationError("x truncation below mode order");
    shape.dim_x = *options.dim_x;
  }
  const OracleResult base = oracle_final_pointer(setting, shape);
  OracleReport report{oracle_moments(base.pointer, setting.sigma), base.exact_prob, base.norm_coefficient(), shape, 0.0};

  if (options.verify_truncation) {
    Shape doubled = shape;
    doubled.dim_x *= 2;
    const OracleResult wide = oracle_final_pointer(setting, doubled);
    const OracleMoments wm = oracle_moments(wide.pointer, setting.sigma);
    report.truncation_delta =
        std::max(detail::max_moment_change(report.moments, wm), detail::relative_change(base.exact_prob, wide.exact_prob));
    if (report.truncation_delta > options.truncation_tolerance)
      throw TruncationError("truncation inadequate: doubling dim_x changed moments by " + std::to_string(report.truncation_delta));
  }
  return report;
}

}  // namespace wmp
