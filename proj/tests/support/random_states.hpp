#pragma once

#include <cmath>
#include <random>

#include "qdlab/correlations.hpp"
#include "qdlab/qcore.hpp"

namespace qdlab::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = Complex(n(rng), n(rng));
  return g;
}

/// Haar unitary from the QR of a Ginibre matrix with phase fix.
inline ComplexMatrix random_unitary(Rng& rng, int d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(rng, d, d));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (int k = 0; k < d; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

inline ComplexMatrix random_density_matrix(Rng& rng, int d = 4, int rank = 4) {
  const ComplexMatrix g = ginibre(rng, d, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline DensityMatrix random_state(Rng& rng, int rank = 4) {
  return DensityMatrix(random_density_matrix(rng, 4, rank));
}

inline ComplexMatrix random_hermitian(Rng& rng, int d) {
  const ComplexMatrix g = ginibre(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

/// Traceless Hermitian with spectral radius 1.
inline ComplexMatrix random_traceless(Rng& rng, int d = 4) {
  ComplexMatrix h = random_hermitian(rng, d);
  h -= (h.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return h / es.eigenvalues().cwiseAbs().maxCoeff();
}

inline DeviationMatrix random_deviation(Rng& rng, double epsilon = 1e-5) {
  return DeviationMatrix(random_traceless(rng), epsilon);
}

/// Uniform over the physical tetrahedron by rejection from the cube.
inline BellDiagonalParams random_bell(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
    bool ok = true;
    for (int j = 0; j < 2 && ok; ++j)
      for (int k = 0; k < 2 && ok; ++k) {
        const double sj = j ? -1.0 : 1.0, sk = k ? -1.0 : 1.0;
        ok = 1.0 + sj * c1 - sj * sk * c2 + sk * c3 >= 1e-6;
      }
    if (ok) return {c1, c2, c3};
  }
}

inline ComplexMatrix ket_projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

inline ComplexVector bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace qdlab::testing
