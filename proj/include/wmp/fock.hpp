#pragma once

// Truncated Fock-space numerics: joint qubit (x) mode-x (x) mode-y states and
// dense operators acting on one tensor factor.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "wmp/errors.hpp"
#include "wmp/specfn.hpp"

namespace wmp {

enum class ModeTag { x, y, qubit };

inline const char* to_string(ModeTag tag) {
  switch (tag) {
    case ModeTag::x: return "x";
    case ModeTag::y: return "y";
    case ModeTag::qubit: return "qubit";
  }
  return "?";
}

struct Shape {
  int qubit_dim = 1;
  int dim_x = 1;
  int dim_y = 1;

  [[nodiscard]] Eigen::Index size() const { return Eigen::Index{qubit_dim} * dim_x * dim_y; }
  [[nodiscard]] int dim(ModeTag tag) const {
    switch (tag) {
      case ModeTag::x: return dim_x;
      case ModeTag::y: return dim_y;
      case ModeTag::qubit: return qubit_dim;
    }
    return 0;
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

using RowMatrixXcd = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Complex amplitudes over qubit (x) x (x) y, stored with y fastest.
class TruncatedState {
 public:
  TruncatedState() = default;

  explicit TruncatedState(Shape shape) : shape_(validated(shape)), amplitudes_(Eigen::VectorXcd::Zero(shape_.size())) {}

  TruncatedState(Shape shape, Eigen::VectorXcd amplitudes) : shape_(validated(shape)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != shape_.size()) throw DimensionError("amplitude count does not match state shape");
  }

  static TruncatedState basis(Shape shape, int x, int y = 0, int q = 0) {
    TruncatedState s(shape);
    if (x < 0 || x >= shape.dim_x || y < 0 || y >= shape.dim_y || q < 0 || q >= shape.qubit_dim)
      throw TruncationError("basis index outside truncated space");
    s(q, x, y) = 1.0;
    return s;
  }

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  [[nodiscard]] Eigen::Index index(int q, int x, int y) const {
    return (Eigen::Index{q} * shape_.dim_x + x) * shape_.dim_y + y;
  }
  cdouble& operator()(int q, int x, int y) { return amplitudes_[index(q, x, y)]; }
  [[nodiscard]] const cdouble& operator()(int q, int x, int y) const { return amplitudes_[index(q, x, y)]; }

  // dim_x by dim_y view of the amplitudes attached to qubit level q.
  Eigen::Map<RowMatrixXcd> block(int q) {
    return {amplitudes_.data() + index(q, 0, 0), shape_.dim_x, shape_.dim_y};
  }
  [[nodiscard]] Eigen::Map<const RowMatrixXcd> block(int q) const {
    return {amplitudes_.data() + index(q, 0, 0), shape_.dim_x, shape_.dim_y};
  }

  [[nodiscard]] double squared_norm() const { return amplitudes_.squaredNorm(); }
  [[nodiscard]] bool is_normalized(double tol = 1e-12) const { return std::abs(squared_norm() - 1.0) <= tol; }

  [[nodiscard]] TruncatedState normalized() const {
    const double n = std::sqrt(squared_norm());
    if (n == 0.0) throw DegeneratePointerError("cannot normalize the zero state");
    return {shape_, amplitudes_ / n};
  }

  /// Same amplitudes embedded into a larger basis (padding with zeros).
  [[nodiscard]] TruncatedState embedded(Shape larger) const {
    if (larger.qubit_dim != shape_.qubit_dim || larger.dim_x < shape_.dim_x || larger.dim_y < shape_.dim_y)
      throw DimensionError("embedding target must be at least as large");
    TruncatedState out(larger);
    for (int q = 0; q < shape_.qubit_dim; ++q) out.block(q).topLeftCorner(shape_.dim_x, shape_.dim_y) = block(q);
    return out;
  }

 private:
  static Shape validated(Shape s) {
    if (s.qubit_dim < 1 || s.qubit_dim > 2 || s.dim_x < 1 || s.dim_y < 1) throw DimensionError("invalid state shape");
    return s;
  }

  Shape shape_{};
  Eigen::VectorXcd amplitudes_;
};

inline cdouble inner_product(const TruncatedState& bra, const TruncatedState& ket) {
  if (!(bra.shape() == ket.shape())) throw DimensionError("inner product of states with different shapes");
  return bra.amplitudes().dot(ket.amplitudes());  // conjugates bra
}

/// Product state phi(x) (x) chi(y) on a single mode pair (no qubit).
inline TruncatedState product_state(const Eigen::VectorXcd& phi_x, const Eigen::VectorXcd& chi_y) {
  TruncatedState out(Shape{1, static_cast<int>(phi_x.size()), static_cast<int>(chi_y.size())});
  out.block(0) = phi_x * chi_y.transpose();
  return out;
}

struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  ModeTag acts_on = ModeTag::x;
  bool hermitian = false;

  OperatorMatrix() = default;
  OperatorMatrix(Eigen::MatrixXcd m, ModeTag tag, bool is_hermitian = false)
      : entries(std::move(m)), acts_on(tag), hermitian(is_hermitian) {
    if (entries.rows() != entries.cols()) throw DimensionError("operator matrix must be square");
    if (hermitian && (entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw DimensionError("operator flagged Hermitian is not");
  }

  [[nodiscard]] int dim() const { return static_cast<int>(entries.rows()); }
};

inline Eigen::MatrixXcd annihilation_matrix(int dim) {
  if (dim < 1) throw DimensionError("ladder dimension must be positive");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

inline OperatorMatrix annihilation(int dim, ModeTag tag = ModeTag::x) { return {annihilation_matrix(dim), tag}; }

inline OperatorMatrix creation(int dim, ModeTag tag = ModeTag::x) {
  return {annihilation_matrix(dim).adjoint(), tag};
}

inline OperatorMatrix number_operator(int dim, ModeTag tag = ModeTag::x) {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return {n, tag, true};
}

struct Quadratures {
  OperatorMatrix position;
  OperatorMatrix momentum;
};

/// X = sigma (a^dagger + a), P = (i / 2 sigma)(a^dagger - a).
inline Quadratures build_quadratures(int dim, double sigma, ModeTag tag = ModeTag::x) {
  if (dim < 2) throw DimensionError("quadratures need at least two levels");
  if (!(sigma > 0.0)) throw DimensionError("beam width must be positive");
  const Eigen::MatrixXcd a = annihilation_matrix(dim);
  const Eigen::MatrixXcd ad = a.adjoint();
  const cdouble i_over(0.0, 1.0 / (2.0 * sigma));
  return {OperatorMatrix(sigma * (ad + a), tag, true), OperatorMatrix(i_over * (ad - a), tag, true)};
}

inline OperatorMatrix build_displacement(int dim, cdouble xi, ModeTag tag = ModeTag::x) {
  if (dim < 2) throw DimensionError("displacement needs at least two levels");
  Eigen::MatrixXcd d(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) d(r, c) = displaced_fock_element(r, c, xi);
  return {std::move(d), tag};
}

inline TruncatedState apply(const OperatorMatrix& op, const TruncatedState& state) {
  const Shape& sh = state.shape();
  if (op.dim() != sh.dim(op.acts_on)) throw DimensionError(std::string("operator dimension does not match mode ") + to_string(op.acts_on));
  TruncatedState out(sh);
  switch (op.acts_on) {
    case ModeTag::x:
      for (int q = 0; q < sh.qubit_dim; ++q) out.block(q).noalias() = op.entries * state.block(q);
      break;
    case ModeTag::y:
      for (int q = 0; q < sh.qubit_dim; ++q) out.block(q).noalias() = state.block(q) * op.entries.transpose();
      break;
    case ModeTag::qubit:
      for (int q = 0; q < sh.qubit_dim; ++q)
        for (int r = 0; r < sh.qubit_dim; ++r) out.block(q) += op.entries(q, r) * state.block(r);
      break;
  }
  return out;
}

inline cdouble expectation(const TruncatedState& state, const OperatorMatrix& op) {
  return inner_product(state, apply(op, state));
}

// Exact ladder moments <a>, <a^2>, <a^dagger a> of one mode; no truncation
// error because a only lowers within the basis.
struct LadderMoments {
  cdouble a{};
  cdouble a2{};
  double n = 0.0;
};

inline LadderMoments ladder_moments(const TruncatedState& state, ModeTag tag) {
  if (tag == ModeTag::qubit) throw DimensionError("ladder moments need a bosonic mode");
  const Shape& sh = state.shape();
  LadderMoments m;
  for (int q = 0; q < sh.qubit_dim; ++q) {
    const auto b = state.block(q);
    const Eigen::Index levels = tag == ModeTag::x ? b.rows() : b.cols();
    for (Eigen::Index k = 1; k < levels; ++k) {
      const double sk = std::sqrt(static_cast<double>(k));
      const auto lo = tag == ModeTag::x ? b.row(k - 1).transpose().eval() : b.col(k - 1).eval();
      const auto hi = tag == ModeTag::x ? b.row(k).transpose().eval() : b.col(k).eval();
      m.a += sk * lo.dot(hi);
      m.n += static_cast<double>(k) * hi.squaredNorm();
      if (k >= 2) {
        const auto lo2 = tag == ModeTag::x ? b.row(k - 2).transpose().eval() : b.col(k - 2).eval();
        m.a2 += std::sqrt(static_cast<double>(k) * static_cast<double>(k - 1)) * lo2.dot(hi);
      }
    }
  }
  return m;
}

}  // namespace wmp
