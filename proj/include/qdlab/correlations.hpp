#pragma once

#include <array>

#include <json.hpp>

#include "qdlab/optimizer.hpp"
#include "qdlab/qcore.hpp"

namespace qdlab {

/// Local projective measurement directions for both qubits. Each qubit is
/// measured along n = (sin 2θ cos φ, sin 2θ sin φ, cos 2θ), projectors
/// (I ± n·σ)/2.
struct MeasurementBasis {
  double theta_a = 0.0;
  double phi_a = 0.0;
  double theta_b = 0.0;
  double phi_b = 0.0;

  /// Throws std::invalid_argument when θ ∉ [0, π/2] or φ ∉ [0, 2π).
  void validate() const;

  /// Maps arbitrary angles onto the declared ranges (same directions).
  static MeasurementBasis canonical(double theta_a, double phi_a, double theta_b,
                                    double phi_b);
};

Eigen::Vector3d measurement_direction(double theta, double phi);

/// Projector (I + sign * n·σ)/2.
ComplexMatrix direction_projector(const Eigen::Vector3d& n, int sign);

/// Totals, classical part and symmetric discord, in bits (or (ε²/ln2)-bit for
/// the deviation-matrix quantifiers).
struct CorrelationReport {
  double mutual_information = 0.0;
  double classical_correlation = 0.0;
  double symmetric_discord = 0.0;
  MeasurementBasis argmax_basis;
  long optimizer_evals = 0;
  bool converged = true;
};

inline constexpr double kTolCorr = 1e-9;
inline constexpr double kTolOpt = 1e-4;

/// Fields: mi_bits, cc_bits, qd_bits, theta_a, phi_a, theta_b, phi_b, evals.
nlohmann::ordered_json to_json(const CorrelationReport& report);

/// Correlation triple (c1, c2, c3) of a Bell-diagonal state
/// (I + Σ c_j σ_j⊗σ_j)/4. Non-physical triples are rejected.
class BellDiagonalParams {
 public:
  BellDiagonalParams(double c1, double c2, double c3);

  double c1() const { return c_[0]; }
  double c2() const { return c_[1]; }
  double c3() const { return c_[2]; }
  const std::array<double, 3>& c() const { return c_; }

  ComplexMatrix matrix() const;
  DensityMatrix state() const;

  /// κ = max |c_j| and its axis (0,1,2 = x,y,z); ties go to the lowest axis.
  double kappa() const;
  int kappa_axis() const;

  /// Reads (c1,c2,c3) off the σ_j⊗σ_j components of a two-qubit matrix.
  static BellDiagonalParams from_matrix(const ComplexMatrix& m);

 private:
  std::array<double, 3> c_;
};

/// S(ρA) + S(ρB) − S(ρAB).
double mutual_information(const DensityMatrix& rho);

/// Σ_{jk} (Π_j⊗Π_k) ρ (Π_j⊗Π_k).
DensityMatrix measured_state(const DensityMatrix& rho, const MeasurementBasis& basis);
ComplexMatrix measure_matrix(const ComplexMatrix& m, const MeasurementBasis& basis);

/// Mutual information of the post-measurement distribution, from the Pauli
/// components of ρ. Equals mutual_information(measured_state(ρ, basis)) but
/// cheap enough to sit inside the grid search.
double measured_mutual_information(const PauliComponents& pc,
                                   const Eigen::Vector3d& na,
                                   const Eigen::Vector3d& nb);

struct ClassicalCorrelation {
  double value = 0.0;
  MeasurementBasis basis;
  long evals = 0;
  bool converged = true;
};

ClassicalCorrelation classical_correlation(const DensityMatrix& rho,
                                           const OptimizerConfig& opt = {});

CorrelationReport symmetric_discord(const DensityMatrix& rho,
                                    const OptimizerConfig& opt = {});

enum class Side { A, B };

struct AsymmetricDiscord {
  double value = 0.0;
  double classical = 0.0;  // max over the measured side of J
  double theta = 0.0;
  double phi = 0.0;
  long evals = 0;
  bool converged = true;
};

/// Original one-sided discord: I(ρ) − max_Π [S(ρ_other) − Σ_j p_j S(ρ_other|j)]
/// where Π is a projective measurement on `measured`.
AsymmetricDiscord asymmetric_discord(const DensityMatrix& rho, Side measured,
                                     const OptimizerConfig& opt = {});

/// Closed-form correlations of a Bell-diagonal state. The eigenvalues used for
/// the mutual information come from diagonalizing the 4×4 matrix.
CorrelationReport bell_diagonal_analytic(const BellDiagonalParams& c);

/// Second-order coefficients, in units of (ε²/ln2) bit:
///   2 Tr(Δ²) − Tr(Δ_A²) − Tr(Δ_B²).
double deviation_mutual_information(const DeviationMatrix& delta);

/// Same quadratic form on the measured deviation Π^{AB}(Δ).
double deviation_measured_mi(const DeviationMatrix& delta, const MeasurementBasis& basis);

/// Deviation-scale report: mi, classical (max measured mi) and discord, all
/// in (ε²/ln2) bit.
CorrelationReport deviation_discord(const DeviationMatrix& delta,
                                    const OptimizerConfig& opt = {});

/// Exact mutual information (bits) of I/4 + εΔ, evaluated through the
/// spectrum of Δ with log1p so that it stays accurate when ε is tiny.
double high_temperature_mutual_information(const DeviationMatrix& delta);

/// (ε²/ln2): converts deviation-scale units to bits.
double deviation_unit_in_bits(double epsilon);

}  // namespace qdlab
