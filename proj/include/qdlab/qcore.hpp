#pragma once

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double num = 1e-9;
}  // namespace tol

/// Raised when a matrix or parameter set does not describe a physical state
/// (non-Hermitian, wrong trace, negative eigenvalue, impossible Bell triple).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Standard Pauli matrix sigma_index, index in {1,2,3} = {x,y,z}.
ComplexMatrix pauli(int index);
ComplexMatrix identity(int dim);

/// Kronecker product; result dimension is a.rows() * b.rows().
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |m - m^dagger| entry.
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::herm);

/// Partial trace on raw matrices (works for deviation matrices too). Keeps a
/// single subsystem out of `dims`.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            int keep);

struct Spectrum {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column j belongs to values[j]
};

/// Hermitian eigendecomposition with eigenvalues sorted descending (ties keep
/// the solver's index order). Throws std::invalid_argument on non-Hermitian
/// input.
Spectrum eigendecompose(const ComplexMatrix& m);

/// Validated density operator with subsystem structure.
///
/// Construction checks Hermiticity (tol::herm), unit trace (tol::trace) and
/// positivity (min eigenvalue >= -tol::psd); violations throw PhysicsError.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix mat, std::vector<int> subsystem_dims);
  /// Two-qubit state with dims {2,2}.
  explicit DensityMatrix(ComplexMatrix mat);

  static DensityMatrix maximally_mixed(std::vector<int> subsystem_dims);
  static DensityMatrix pure(const ComplexVector& psi,
                            std::vector<int> subsystem_dims);

  const ComplexMatrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  const std::vector<int>& subsystem_dims() const { return dims_; }
  int subsystem_count() const { return static_cast<int>(dims_.size()); }
  bool is_two_qubit() const;

 private:
  ComplexMatrix mat_;
  std::vector<int> dims_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on subsystem `keep`; requires at least two subsystems.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

/// Shannon entropy in bits with 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities);

/// h(p) = -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

/// Entropy in bits of a spectrum; eigenvalues in [-tol::psd, 0) are clipped,
/// anything below throws PhysicsError.
double entropy_of_spectrum(std::span<const double> eigenvalues);

/// -Tr(rho log2 rho).
double von_neumann_entropy(const DensityMatrix& rho);

/// Traceless Hermitian part of a high-temperature state rho = I/4 + eps * delta.
class DeviationMatrix {
 public:
  static constexpr double kDefaultEpsilon = 1e-5;

  explicit DeviationMatrix(ComplexMatrix mat,
                           double epsilon = kDefaultEpsilon);

  /// Recovers delta = (rho - I/d) / epsilon.
  static DeviationMatrix from_state(const DensityMatrix& rho, double epsilon);

  const ComplexMatrix& matrix() const { return mat_; }
  double epsilon() const { return epsilon_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

  /// I/d + epsilon * delta as a validated two-qubit DensityMatrix.
  DensityMatrix state() const;

 private:
  ComplexMatrix mat_;
  double epsilon_;
};

/// Real coefficients of a two-qubit operator in the Pauli product basis:
///   M = (c0 I + sum a_i s_i x I + sum b_i I x s_i + sum t_ij s_i x s_j) / 4
/// so that for a state, a and b are the local Bloch vectors and t the
/// correlation matrix.
struct PauliComponents {
  double identity = 0.0;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
};

PauliComponents pauli_components(const ComplexMatrix& m);
ComplexMatrix from_pauli_components(const PauliComponents& pc);

struct SpinOperators {
  double spin = 0.5;
  ComplexMatrix ix;
  ComplexMatrix iy;
  ComplexMatrix iz;
  ComplexMatrix isq;
};

/// Angular momentum matrices (hbar = 1) in the Zeeman basis m = s, s-1, ...
/// Only spin 1/2 and 3/2 are supported.
SpinOperators spin_operators(double spin);

}  // namespace qdlab
