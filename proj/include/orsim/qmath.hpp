// Copyright 2026 The orsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace orsim {

using Complex = std::complex<double>;

/// Default absolute tolerance for matrix equality.
inline constexpr double kMatrixTolerance = 1e-12;
/// Tolerance for structural invariants (trace, Hermiticity, PSD, unitarity).
inline constexpr double kStateTolerance = 1e-9;

/**
 * Dense square matrix of complex amplitudes.
 *
 * Storage is an Eigen dynamic matrix; the wrapper pins the square/non-empty
 * invariant and gives tolerance-explicit comparisons.
 */
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be at least 1");
    m_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto n = rows.size();
    if (n == 0) throw std::invalid_argument("ComplexMatrix: dimension must be at least 1");
    m_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
      if (row.size() != n) throw std::invalid_argument("ComplexMatrix: rows must form a square matrix");
      Eigen::Index c = 0;
      for (const auto& v : row) m_(r, c++) = v;
      ++r;
    }
  }

  explicit ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("ComplexMatrix: matrix must be square and non-empty");
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix out(dim);
    out.m_.setIdentity();
    return out;
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

  Complex& operator()(std::size_t r, std::size_t c) {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  const Eigen::MatrixXcd& eigen() const { return m_; }
  Eigen::MatrixXcd& eigen() { return m_; }

  ComplexMatrix adjoint() const { return ComplexMatrix(Eigen::MatrixXcd(m_.adjoint())); }
  Complex trace() const { return m_.trace(); }

  /// Largest absolute entry-wise difference.
  double max_abs_diff(const ComplexMatrix& other) const {
    if (dim() != other.dim()) return std::numeric_limits<double>::infinity();
    return (m_ - other.m_).cwiseAbs().maxCoeff();
  }

  bool approx_equal(const ComplexMatrix& other, double tol = kMatrixTolerance) const {
    return max_abs_diff(other) <= tol;
  }

  bool is_hermitian(double tol = kStateTolerance) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }

  bool is_unitary(double tol = kStateTolerance) const {
    const auto id = Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
    return (m_ * m_.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("ComplexMatrix: dimension mismatch in product");
    return ComplexMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
  }
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("ComplexMatrix: dimension mismatch in sum");
    return ComplexMatrix(Eigen::MatrixXcd(a.m_ + b.m_));
  }
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("ComplexMatrix: dimension mismatch in difference");
    return ComplexMatrix(Eigen::MatrixXcd(a.m_ - b.m_));
  }
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    return ComplexMatrix(Eigen::MatrixXcd(s * a.m_));
  }

 private:
  Eigen::MatrixXcd m_;
};

/// Kronecker product; the left operand is the leftmost (most significant) factor.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto da = a.dim();
  const auto db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const Complex s = a(i, j);
      if (s == Complex{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = s * b(k, l);
    }
  return out;
}

/// Number of qubits for a 2^n dimension; throws when dim is not a power of two.
inline std::size_t qubits_for_dim(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

/// Smallest eigenvalue of the Hermitian part of `m`.
inline double min_eigenvalue(const ComplexMatrix& m) {
  const Eigen::MatrixXcd h = 0.5 * (m.eigen() + m.eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/**
 * Unit-trace Hermitian positive-semidefinite matrix over `num_qubits` qubits.
 *
 * Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
 * basis index. The public constructor enforces every invariant; `unchecked`
 * exists for channel outputs that are intentionally allowed to leave the PSD
 * cone (see `ChannelMode::paper`).
 */
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)), num_qubits_(qubits_for_dim(mat_.dim())) {
    const auto problems = violations();
    if (!problems.empty()) throw std::invalid_argument("DensityMatrix: " + problems.front());
  }

  static DensityMatrix unchecked(ComplexMatrix mat) { return DensityMatrix(std::move(mat), Unchecked{}); }

  static DensityMatrix basis(std::size_t num_qubits, std::size_t index) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (num_qubits == 0 || index >= dim) throw std::invalid_argument("DensityMatrix::basis: index out of range");
    ComplexMatrix m(dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m), Unchecked{});
  }

  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const Eigen::VectorXcd& psi) {
    if (std::abs(psi.squaredNorm() - 1.0) > kStateTolerance)
      throw std::invalid_argument("DensityMatrix::pure: state vector is not normalized");
    return DensityMatrix(ComplexMatrix(Eigen::MatrixXcd(psi * psi.adjoint())));
  }

  static DensityMatrix maximally_mixed(std::size_t num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    return DensityMatrix(Complex(1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim), Unchecked{});
  }

  const ComplexMatrix& matrix() const { return mat_; }
  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return mat_.dim(); }
  Complex operator()(std::size_t r, std::size_t c) const { return mat_(r, c); }

  /// Every violated invariant, empty when the matrix is a valid state.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!mat_.is_hermitian(kStateTolerance)) out.emplace_back("matrix is not Hermitian");
    if (std::abs(mat_.trace() - Complex(1.0)) > kStateTolerance) out.emplace_back("trace differs from 1");
    if (min_eigenvalue(mat_) < -kStateTolerance) out.emplace_back("matrix is not positive semidefinite");
    return out;
  }

  bool approx_equal(const DensityMatrix& other, double tol = kMatrixTolerance) const {
    return mat_.approx_equal(other.mat_, tol);
  }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix mat, Unchecked) : mat_(std::move(mat)), num_qubits_(qubits_for_dim(mat_.dim())) {}

  ComplexMatrix mat_;
  std::size_t num_qubits_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::unchecked(tensor(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// Local operator application. Operators act on an ordered list of target
// qubits; the first target is the most significant factor of the operator.
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t bit_of(std::size_t qubit, std::size_t num_qubits) { return num_qubits - 1 - qubit; }

/// Full-register indices for each local basis state, one group per base index.
inline std::vector<std::vector<std::size_t>> index_groups(std::span<const std::size_t> targets,
                                                          std::size_t num_qubits) {
  const std::size_t k = targets.size();
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::size_t mask = 0;
  for (auto t : targets) mask |= std::size_t{1} << bit_of(t, num_qubits);
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(dim >> k);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    std::vector<std::size_t> idx(std::size_t{1} << k, base);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t j = 0; j < k; ++j)
        if (a & (std::size_t{1} << (k - 1 - j))) idx[a] |= std::size_t{1} << bit_of(targets[j], num_qubits);
    groups.push_back(std::move(idx));
  }
  return groups;
}

inline void check_targets(std::span<const std::size_t> targets, std::size_t num_qubits, std::size_t op_dim) {
  if ((std::size_t{1} << targets.size()) != op_dim)
    throw std::invalid_argument("operator dimension does not match target count");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= num_qubits) throw std::invalid_argument("target qubit index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j]) throw std::invalid_argument("duplicate target qubit");
  }
}

/// m <- (op on targets) * m
inline void apply_left(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& op, std::span<const std::size_t> targets,
                       std::size_t num_qubits) {
  const auto groups = index_groups(targets, num_qubits);
  const auto local = static_cast<std::size_t>(op.rows());
  std::vector<Complex> v(local);
  for (const auto& idx : groups)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (std::size_t b = 0; b < local; ++b) v[b] = m(static_cast<Eigen::Index>(idx[b]), c);
      for (std::size_t a = 0; a < local; ++a) {
        Complex acc{};
        for (std::size_t b = 0; b < local; ++b)
          acc += op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * v[b];
        m(static_cast<Eigen::Index>(idx[a]), c) = acc;
      }
    }
}

/// m <- m * (op on targets)
inline void apply_right(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& op, std::span<const std::size_t> targets,
                        std::size_t num_qubits) {
  const auto groups = index_groups(targets, num_qubits);
  const auto local = static_cast<std::size_t>(op.rows());
  std::vector<Complex> v(local);
  for (const auto& idx : groups)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (std::size_t b = 0; b < local; ++b) v[b] = m(r, static_cast<Eigen::Index>(idx[b]));
      for (std::size_t a = 0; a < local; ++a) {
        Complex acc{};
        for (std::size_t b = 0; b < local; ++b)
          acc += v[b] * op(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
        m(r, static_cast<Eigen::Index>(idx[a])) = acc;
      }
    }
}

/// m <- U m U^dagger with U acting on targets.
inline void conjugate(Eigen::MatrixXcd& m, const Eigen::MatrixXcd& u, std::span<const std::size_t> targets,
                      std::size_t num_qubits) {
  apply_left(m, u, targets, num_qubits);
  apply_right(m, u.adjoint(), targets, num_qubits);
}

/// Multiplies every element whose row and column differ in `qubit` by `factor`.
inline void scale_coherence(Eigen::MatrixXcd& m, std::size_t qubit, std::size_t num_qubits, double factor) {
  const auto bit = std::size_t{1} << bit_of(qubit, num_qubits);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if ((static_cast<std::size_t>(r) ^ static_cast<std::size_t>(c)) & bit) m(r, c) *= factor;
}

/// Moves weight from the |1> block to the |0> block of `qubit`: D <- keep*D, A <- A + (1-keep)*D.
/// Coherences between the blocks are left alone (the caller scales them if needed).
inline void relax_populations(Eigen::MatrixXcd& m, std::size_t qubit, std::size_t num_qubits, double keep) {
  const auto bit = std::size_t{1} << bit_of(qubit, num_qubits);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto ur = static_cast<std::size_t>(r);
    if (!(ur & bit)) continue;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto uc = static_cast<std::size_t>(c);
      if (!(uc & bit)) continue;
      const Complex d = m(r, c);
      m(static_cast<Eigen::Index>(ur ^ bit), static_cast<Eigen::Index>(uc ^ bit)) += (1.0 - keep) * d;
      m(r, c) = keep * d;
    }
  }
}

/// Reduced 1-qubit matrix of `qubit` from an n-qubit matrix.
inline ComplexMatrix reduce_to_qubit(const Eigen::MatrixXcd& m, std::size_t qubit, std::size_t num_qubits) {
  const auto bit = std::size_t{1} << bit_of(qubit, num_qubits);
  ComplexMatrix out(2);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      // the traced-out qubits must agree between row and column
      if ((ur & ~bit) != (uc & ~bit)) continue;
      out((ur & bit) ? 1 : 0, (uc & bit) ? 1 : 0) += m(r, c);
    }
  return out;
}

}  // namespace detail

/// Embeds a local operator into the full n-qubit space.
inline ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> targets, std::size_t num_qubits) {
  detail::check_targets(targets, num_qubits, op.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(std::int64_t{1} << num_qubits, std::int64_t{1} << num_qubits);
  detail::apply_left(m, op.eigen(), targets, num_qubits);
  return ComplexMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

inline ComplexMatrix gate_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }

inline ComplexMatrix gate_h() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {{s, s}, {s, -s}};
}

/// RY(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
inline ComplexMatrix gate_ry(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {{c, -s}, {s, c}};
}

/// Controlled RY; the control is the first (leftmost) factor.
inline ComplexMatrix gate_cry(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, c, -s}, {0.0, 0.0, s, c}};
}

/// U rho U^dagger for a full-register unitary.
inline DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.dim() != rho.dim()) throw std::invalid_argument("apply_unitary: dimension mismatch");
  if (!u.is_unitary(kStateTolerance)) throw std::invalid_argument("apply_unitary: operator is not unitary");
  return DensityMatrix::unchecked(ComplexMatrix(Eigen::MatrixXcd(u.eigen() * rho.matrix().eigen() * u.eigen().adjoint())));
}

/// U rho U^dagger with U acting on `targets` only.
inline DensityMatrix apply_gate(const DensityMatrix& rho, const ComplexMatrix& u, std::span<const std::size_t> targets) {
  detail::check_targets(targets, rho.num_qubits(), u.dim());
  if (!u.is_unitary(kStateTolerance)) throw std::invalid_argument("apply_gate: operator is not unitary");
  Eigen::MatrixXcd m = rho.matrix().eigen();
  detail::conjugate(m, u.eigen(), targets, rho.num_qubits());
  return DensityMatrix::unchecked(ComplexMatrix(std::move(m)));
}

/// Reduced state of qubit `keep` of an n-qubit state.
inline DensityMatrix reduce_to_qubit(const DensityMatrix& rho, std::size_t keep) {
  if (keep >= rho.num_qubits()) throw std::out_of_range("reduce_to_qubit: qubit index out of range");
  return DensityMatrix::unchecked(detail::reduce_to_qubit(rho.matrix().eigen(), keep, rho.num_qubits()));
}

/// Two-qubit partial trace keeping qubit `keep` (0 = left factor).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
  if (rho.num_qubits() != 2) throw std::invalid_argument("partial_trace: expected a two-qubit state");
  if (keep > 1) throw std::out_of_range("partial_trace: qubit index out of range");
  return reduce_to_qubit(rho, keep);
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

/// T1/T2 in microseconds.
struct NoiseParams {
  double t1 = 300.0;
  double t2 = 150.0;

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!(t1 > 0)) out.emplace_back("t1 must be positive");
    if (!(t2 > 0)) out.emplace_back("t2 must be positive");
    if (t1 > 0 && t2 > 2 * t1) out.emplace_back("t2 must not exceed 2*t1");
    return out;
  }
  void validate() const {
    const auto v = violations();
    if (!v.empty()) throw std::invalid_argument("NoiseParams: " + v.front());
  }
  bool operator==(const NoiseParams&) const = default;
};

/**
 * How relaxation channels are realized.
 *
 * `paper` follows the hand arithmetic literally: amplitude damping moves
 * population without touching coherence, and T2 is applied to coherence on
 * its own. On its own the paper-mode amplitude step is not CPTP and may leave
 * the PSD cone; combined with phase damping (T2 <= 2 T1) it equals the kraus
 * composite exactly. `kraus` uses the standard Kraus pairs.
 */
enum class ChannelMode { paper, kraus };

inline std::array<ComplexMatrix, 2> amplitude_damping_kraus(double gamma) {
  if (gamma < 0 || gamma > 1) throw std::invalid_argument("amplitude_damping_kraus: gamma outside [0,1]");
  return {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1 - gamma)}}, ComplexMatrix{{0.0, std::sqrt(gamma)}, {0.0, 0.0}}};
}

/// Pure dephasing pair; coherence is multiplied by sqrt(1 - lambda).
inline std::array<ComplexMatrix, 2> phase_damping_kraus(double lambda) {
  if (lambda < 0 || lambda > 1) throw std::invalid_argument("phase_damping_kraus: lambda outside [0,1]");
  return {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1 - lambda)}}, ComplexMatrix{{0.0, 0.0}, {0.0, std::sqrt(lambda)}}};
}

/// sum_k K rho K^dagger, operators acting on `targets`.
inline DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const ComplexMatrix> ops,
                                 std::span<const std::size_t> targets) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rho.dim()), static_cast<Eigen::Index>(rho.dim()));
  for (const auto& k : ops) {
    detail::check_targets(targets, rho.num_qubits(), k.dim());
    Eigen::MatrixXcd m = rho.matrix().eigen();
    detail::conjugate(m, k.eigen(), targets, rho.num_qubits());
    acc += m;
  }
  return DensityMatrix::unchecked(ComplexMatrix(std::move(acc)));
}

inline DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const ComplexMatrix> ops) {
  const std::array<std::size_t, 1> target{0};
  if (rho.num_qubits() != 1) throw std::invalid_argument("apply_kraus: expected a single-qubit state");
  return apply_kraus(rho, ops, target);
}

namespace detail {

inline void require_duration(double t, const char* what) {
  if (!(t >= 0)) throw std::invalid_argument(std::string(what) + ": duration must be non-negative");
}

/// Pure-dephasing coherence factor that, combined with amplitude damping, yields exp(-t/T2).
inline double pure_dephasing_factor(double t, double t2, double t1) {
  if (t2 > 2 * t1) throw std::invalid_argument("phase_damp: kraus mode requires t2 <= 2*t1");
  const double rate = 1.0 / t2 - 1.0 / (2.0 * t1);
  return std::exp(-t * std::max(rate, 0.0));
}

inline void amplitude_damp(Eigen::MatrixXcd& m, std::size_t qubit, std::size_t num_qubits, double t, double t1,
                           ChannelMode mode) {
  require_duration(t, "amplitude_damp");
  if (!(t1 > 0)) throw std::invalid_argument("amplitude_damp: t1 must be positive");
  const double keep = std::exp(-t / t1);
  relax_populations(m, qubit, num_qubits, keep);
  if (mode == ChannelMode::kraus) scale_coherence(m, qubit, num_qubits, std::sqrt(keep));
}

inline void phase_damp(Eigen::MatrixXcd& m, std::size_t qubit, std::size_t num_qubits, double t, double t2,
                       ChannelMode mode, std::optional<double> t1) {
  require_duration(t, "phase_damp");
  if (!(t2 > 0)) throw std::invalid_argument("phase_damp: t2 must be positive");
  if (mode == ChannelMode::paper) {
    scale_coherence(m, qubit, num_qubits, std::exp(-t / t2));
    return;
  }
  if (!t1) throw std::invalid_argument("phase_damp: kraus mode requires t1");
  scale_coherence(m, qubit, num_qubits, pure_dephasing_factor(t, t2, *t1));
}

}  // namespace detail

/**
 * T1 relaxation of a single qubit for `t` microseconds.
 *
 * Paper mode: rho11 <- rho11 e^{-t/T1}, rho00 <- rho00 + rho11 (1 - e^{-t/T1}),
 * coherence untouched. Kraus mode: the standard pair with
 * gamma = 1 - e^{-t/T1}, which also scales coherence by e^{-t/2T1}.
 */
inline DensityMatrix amplitude_damp(const DensityMatrix& rho, double t, double t1, ChannelMode mode) {
  if (rho.num_qubits() != 1) throw std::invalid_argument("amplitude_damp: expected a single-qubit state");
  detail::require_duration(t, "amplitude_damp");
  if (!(t1 > 0)) throw std::invalid_argument("amplitude_damp: t1 must be positive");
  if (mode == ChannelMode::kraus) {
    const auto ops = amplitude_damping_kraus(1.0 - std::exp(-t / t1));
    return apply_kraus(rho, ops);
  }
  Eigen::MatrixXcd m = rho.matrix().eigen();
  detail::amplitude_damp(m, 0, 1, t, t1, mode);
  return DensityMatrix::unchecked(ComplexMatrix(std::move(m)));
}

/**
 * Dephasing of a single qubit. Paper mode scales coherence by e^{-t/T2};
 * kraus mode applies only the pure-dephasing part 1/T_phi = 1/T2 - 1/(2 T1)
 * so that the composite with kraus amplitude damping totals e^{-t/T2}.
 */
inline DensityMatrix phase_damp(const DensityMatrix& rho, double t, double t2, ChannelMode mode,
                                std::optional<double> t1 = std::nullopt) {
  if (rho.num_qubits() != 1) throw std::invalid_argument("phase_damp: expected a single-qubit state");
  detail::require_duration(t, "phase_damp");
  if (!(t2 > 0)) throw std::invalid_argument("phase_damp: t2 must be positive");
  if (mode == ChannelMode::kraus) {
    if (!t1) throw std::invalid_argument("phase_damp: kraus mode requires t1");
    const double f = detail::pure_dephasing_factor(t, t2, *t1);
    const auto ops = phase_damping_kraus(1.0 - f * f);
    return apply_kraus(rho, ops);
  }
  Eigen::MatrixXcd m = rho.matrix().eigen();
  detail::phase_damp(m, 0, 1, t, t2, mode, t1);
  return DensityMatrix::unchecked(ComplexMatrix(std::move(m)));
}

/// Diagonal of rho clipped to [0, 1].
inline std::vector<double> measure_probs(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(rho(i, i).real(), 0.0, 1.0);
  return p;
}

}  // namespace orsim
