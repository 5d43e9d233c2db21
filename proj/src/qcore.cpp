#include "qdlab/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qdlab {

namespace {

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void check_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

}  // namespace

ComplexMatrix pauli(int index) {
  ComplexMatrix s(2, 2);
  const Complex i{0.0, 1.0};
  switch (index) {
    case 1:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case 2:
      s << 0.0, -i, i, 0.0;
      break;
    case 3:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      throw std::out_of_range("pauli: index must be 1, 2 or 3");
  }
  return s;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  return hermiticity_defect(m) <= tolerance;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            int keep) {
  check_square(m, "partial_trace");
  if (dims.size() < 2) {
    throw std::invalid_argument("partial_trace: need at least two subsystems");
  }
  if (keep < 0 || keep >= static_cast<int>(dims.size())) {
    throw std::out_of_range("partial_trace: invalid subsystem index");
  }
  if (product(dims) != m.rows()) {
    throw std::invalid_argument("partial_trace: dims do not match matrix");
  }
  // Index layout: [left][keep][right], row-major in subsystem order.
  const int left = product(dims.subspan(0, keep));
  const int kd = dims[keep];
  const int right = product(dims.subspan(keep + 1));
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (int i = 0; i < kd; ++i) {
    for (int j = 0; j < kd; ++j) {
      Complex acc{0.0, 0.0};
      for (int l = 0; l < left; ++l) {
        for (int r = 0; r < right; ++r) {
          acc += m((l * kd + i) * right + r, (l * kd + j) * right + r);
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Spectrum eigendecompose(const ComplexMatrix& m) {
  check_square(m, "eigendecompose");
  if (!is_hermitian(m)) {
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: solver did not converge");
  }
  const auto& vals = solver.eigenvalues();
  const Eigen::Index n = vals.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return vals(x) > vals(y); });
  Spectrum s;
  s.values.reserve(static_cast<std::size_t>(n));
  s.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.values.push_back(vals(order[static_cast<std::size_t>(k)]));
    s.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return s;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, std::vector<int> subsystem_dims)
    : mat_(std::move(mat)), dims_(std::move(subsystem_dims)) {
  check_square(mat_, "DensityMatrix");
  if (dims_.empty() ||
      std::any_of(dims_.begin(), dims_.end(), [](int d) { return d <= 0; }) ||
      product(dims_) != mat_.rows()) {
    throw std::invalid_argument(
        "DensityMatrix: subsystem dims must be positive with product = dim");
  }
  const double herm = hermiticity_defect(mat_);
  if (herm > tol::herm) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (defect " << herm << ")";
    throw PhysicsError(os.str());
  }
  const Complex tr = mat_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > tol::trace) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr.real() << " != 1";
    throw PhysicsError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      0.5 * (mat_ + mat_.adjoint()), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol::psd) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    throw PhysicsError(os.str());
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix mat)
    : DensityMatrix(std::move(mat), {2, 2}) {}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<int> subsystem_dims) {
  const int d = product(subsystem_dims);
  return DensityMatrix(identity(d) / static_cast<double>(d),
                       std::move(subsystem_dims));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi,
                                  std::vector<int> subsystem_dims) {
  const double norm = psi.norm();
  if (norm == 0.0) throw PhysicsError("DensityMatrix::pure: zero vector");
  const ComplexVector v = psi / norm;
  return DensityMatrix(v * v.adjoint(), std::move(subsystem_dims));
}

bool DensityMatrix::is_two_qubit() const {
  return dims_.size() == 2 && dims_[0] == 2 && dims_[1] == 2;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.subsystem_dims();
  dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
  return DensityMatrix(tensor(a.matrix(), b.matrix()), std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  const auto& dims = rho.subsystem_dims();
  ComplexMatrix reduced = partial_trace(rho.matrix(), dims, keep);
  return DensityMatrix(std::move(reduced), {dims.at(static_cast<std::size_t>(keep))});
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double binary_entropy(double p) {
  const std::array<double, 2> probs{p, 1.0 - p};
  return shannon_entropy(probs);
}

double entropy_of_spectrum(std::span<const double> eigenvalues) {
  double h = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -tol::psd) {
      throw PhysicsError("entropy: eigenvalue below -tol_psd");
    }
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(),
                                                      Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& vals = solver.eigenvalues();
  return entropy_of_spectrum(std::span<const double>(vals.data(),
                                                     static_cast<std::size_t>(vals.size())));
}

DeviationMatrix::DeviationMatrix(ComplexMatrix mat, double epsilon)
    : mat_(std::move(mat)), epsilon_(epsilon) {
  check_square(mat_, "DeviationMatrix");
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw std::invalid_argument("DeviationMatrix: epsilon must be positive");
  }
  if (hermiticity_defect(mat_) > tol::herm) {
    throw PhysicsError("DeviationMatrix: not Hermitian");
  }
  if (std::abs(mat_.trace()) > tol::trace) {
    throw PhysicsError("DeviationMatrix: not traceless");
  }
  // Positivity of I/d + eps * delta.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      0.5 * (mat_ + mat_.adjoint()), Eigen::EigenvaluesOnly);
  const double lowest = 1.0 / static_cast<double>(dim()) +
                        epsilon_ * solver.eigenvalues().minCoeff();
  if (lowest < -tol::psd) {
    throw PhysicsError("DeviationMatrix: I/d + eps*delta is not positive");
  }
}

DeviationMatrix DeviationMatrix::from_state(const DensityMatrix& rho,
                                            double epsilon) {
  const int d = rho.dim();
  ComplexMatrix delta = (rho.matrix() - identity(d) / static_cast<double>(d)) / epsilon;
  // Remove the trace residue left by roundoff in rho.
  delta -= identity(d) * (delta.trace() / static_cast<double>(d));
  return DeviationMatrix(std::move(delta), epsilon);
}

DensityMatrix DeviationMatrix::state() const {
  const int d = dim();
  if (d != 4) {
    throw std::invalid_argument("DeviationMatrix::state: expected 4x4");
  }
  return DensityMatrix(identity(d) / static_cast<double>(d) + epsilon_ * mat_);
}

PauliComponents pauli_components(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw std::invalid_argument("pauli_components: expected a 4x4 matrix");
  }
  const ComplexMatrix id2 = identity(2);
  PauliComponents pc;
  pc.identity = m.trace().real();
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix si = pauli(i + 1);
    pc.a(i) = (m * tensor(si, id2)).trace().real();
    pc.b(i) = (m * tensor(id2, si)).trace().real();
    for (int j = 0; j < 3; ++j) {
      pc.t(i, j) = (m * tensor(si, pauli(j + 1))).trace().real();
    }
  }
  return pc;
}

ComplexMatrix from_pauli_components(const PauliComponents& pc) {
  const ComplexMatrix id2 = identity(2);
  ComplexMatrix m = pc.identity * identity(4);
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix si = pauli(i + 1);
    m += pc.a(i) * tensor(si, id2) + pc.b(i) * tensor(id2, si);
    for (int j = 0; j < 3; ++j) {
      m += pc.t(i, j) * tensor(si, pauli(j + 1));
    }
  }
  return m / 4.0;
}

SpinOperators spin_operators(double spin) {
  if (spin != 0.5 && spin != 1.5) {
    throw std::invalid_argument("spin_operators: only spin 1/2 and 3/2 supported");
  }
  const int d = static_cast<int>(std::lround(2.0 * spin)) + 1;
  SpinOperators ops;
  ops.spin = spin;
  ops.iz = ComplexMatrix::Zero(d, d);
  ComplexMatrix raise = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = spin - k;
    ops.iz(k, k) = m;
    // <m+1| I+ |m> = sqrt(s(s+1) - m(m+1)); row k-1 holds m+1.
    if (k > 0) raise(k - 1, k) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  ops.ix = 0.5 * (raise + lower);
  ops.iy = Complex{0.0, -0.5} * (raise - lower);
  ops.isq = ops.ix * ops.ix + ops.iy * ops.iy + ops.iz * ops.iz;
  return ops;
}

}  // namespace qdlab
