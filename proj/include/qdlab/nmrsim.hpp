#pragma once

#include <array>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdlab/qcore.hpp"

namespace qdlab {

/// Δ = w_a σz⊗I + w_b I⊗σz with w_a = r/(1+r), w_b = 1/(1+r).
/// r = 1 weights both spins by 1/2; r ≈ 3.98 mimics H:C.
DeviationMatrix thermal_deviation(double epsilon, double gamma_ratio = 1.0);

struct LiquidHamiltonianParams {
  double offset_h = 0.0;  // rad/s
  double offset_c = 0.0;  // rad/s
  double j_coupling = 215.1;  // Hz
  double rf_amp_h = 0.0;  // rad/s
  double rf_amp_c = 0.0;
  double rf_phase_h = 0.0;  // rad
  double rf_phase_c = 0.0;
};

/// −Δω_H Iz^H − Δω_C Iz^C + 2πJ Iz^H Iz^C + Σ ω1 (Ix cos φ + Iy sin φ).
ComplexMatrix liquid_hamiltonian(const LiquidHamiltonianParams& params);

struct QuadrupolarHamiltonianParams {
  double offset = 0.0;                    // rad/s
  double omega_q = 2.0 * std::numbers::pi * 15e3;  // rad/s
  double rf_amp = 0.0;
  double rf_phase = 0.0;
};

/// Spin-3/2: −Δω Iz + (ω_Q/6)(3Iz² − I²) + ω1 (Ix cos φ + Iy sin φ).
ComplexMatrix quadrupolar_hamiltonian(const QuadrupolarHamiltonianParams& params);

/// U = exp(−i h t) from the spectrum of h; throws for non-Hermitian h.
ComplexMatrix propagator(const ComplexMatrix& h, double t);

/// U ρ U†. The matrix overload serves deviation matrices too.
ComplexMatrix evolve(const ComplexMatrix& rho, const ComplexMatrix& h, double t);
DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& h, double t);

enum class PulseTarget { A, B, Both };
enum class PulseAxis { PlusX, PlusY, MinusX, MinusY };

/// Single-qubit exp(−i angle n·σ/2).
ComplexMatrix pulse_rotation(double angle, PulseAxis axis);

/// Ideal instantaneous rotation on the targeted qubit(s) of a two-qubit matrix.
ComplexMatrix hard_pulse(const ComplexMatrix& rho, PulseTarget target, double angle,
                         PulseAxis axis);
DensityMatrix hard_pulse(const DensityMatrix& rho, PulseTarget target, double angle,
                         PulseAxis axis);

/// Erases all coherences (off-diagonal elements) in the computational basis.
ComplexMatrix gradient_crush(const ComplexMatrix& rho);
DensityMatrix gradient_crush(const DensityMatrix& rho);

/// Hard-pulse spatial-averaging sequence for |11⟩ applied to a two-qubit
/// matrix (state or deviation). J in Hz.
ComplexMatrix pseudo_pure_11_sequence(const ComplexMatrix& rho, double j_coupling = 215.1);

/// The sequence run on I/4 + ε Δ_thermal.
DensityMatrix prepare_pseudo_pure_11(double epsilon, double j_coupling = 215.1);

/// Same sequence run directly on the thermal deviation.
DeviationMatrix prepare_pseudo_pure_11_deviation(double epsilon, double j_coupling = 215.1);

/// Temporal averaging: sum of deviation matrices sharing one ε.
DeviationMatrix sum_deviations(const std::vector<DeviationMatrix>& parts);

// ---------------------------------------------------------------- tomography

enum class Rotation { none, x90, y90 };

struct TomographySetting {
  std::string label;  // first letter acts on qubit A
  Rotation rotation_a = Rotation::none;
  Rotation rotation_b = Rotation::none;

  /// Throws std::invalid_argument for labels outside the nine settings.
  static TomographySetting from_label(std::string_view label);
};

/// II, XX, IX, IY, XI, YI, XY, YX, YY.
const std::vector<TomographySetting>& all_settings();

/// Whole-spectrum magnetizations plus the antiphase parts that split each
/// spin's signal into its two J lines: line k (partner in |k⟩) carries
/// (m ± a)/2.
struct TomographyRecord {
  TomographySetting setting;
  double mx_a = 0.0;
  double my_a = 0.0;
  double mx_b = 0.0;
  double my_b = 0.0;
  double ax_a = 0.0;  // Tr[Δ_n (I_x⊗σz)]
  double ay_a = 0.0;
  double ax_b = 0.0;  // Tr[Δ_n (σz⊗I_x)]
  double ay_b = 0.0;

  std::array<double, 8> values() const {
    return {mx_a, my_a, mx_b, my_b, ax_a, ay_a, ax_b, ay_b};
  }
};

/// Rotates Δ by the setting's pulses, then M^A = Tr[Δ_n (I_{x,y}⊗I)],
/// M^B = Tr[Δ_n (I⊗I_{x,y})] with I_u = σ_u/2, and the antiphase terms.
TomographyRecord tomography_readout(const DeviationMatrix& delta,
                                    const TomographySetting& setting);
TomographyRecord tomography_readout(const ComplexMatrix& delta,
                                    const TomographySetting& setting);

std::vector<TomographyRecord> tomography_readout_all(const DeviationMatrix& delta);

class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares inversion of the 72 line intensities plus the trace
/// condition for the 16 real parameters of Δ. Each of the nine settings must appear;
/// throws std::invalid_argument otherwise and RankDeficientError if the
/// design matrix loses rank.
DeviationMatrix tomography_reconstruct(const std::vector<TomographyRecord>& records,
                                       double epsilon = DeviationMatrix::kDefaultEpsilon);

/// Design matrix ((8·settings + 1) × 16), trace row last.
Eigen::MatrixXd tomography_design_matrix(const std::vector<TomographySetting>& settings);

void write_tomography_csv(std::ostream& os, const std::vector<TomographyRecord>& records);
std::vector<TomographyRecord> read_tomography_csv(std::istream& is);

// ---------------------------------------------------------------- SMP fixtures

struct SmpLiquidStep {
  int step = 0;
  double amp_h = 0.0;
  double phase_h = 0.0;
  double duration_ms = 0.0;
  double amp_c = 0.0;
  double phase_c = 0.0;
};

struct SmpSodiumStep {
  std::string group;
  int step = 0;
  double amp = 0.0;
  double phase = 0.0;
  double duration_us = 0.0;
};

std::vector<SmpLiquidStep> read_smp_liquid_csv(std::istream& is);
std::vector<SmpSodiumStep> read_smp_sodium_csv(std::istream& is);

}  // namespace qdlab
