#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdlab/correlations.hpp"
#include "qdlab/qcore.hpp"

namespace qdlab {

inline constexpr double kTolCptp = 1e-10;

/// Operator-sum channel ρ ↦ Σ K ρ K†. Construction checks Σ K†K = I.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> operators, std::string label);

  static KrausChannel identity(int dim);

  const std::vector<ComplexMatrix>& operators() const { return ops_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(ops_.front().rows()); }

  /// max |Σ K†K − I|.
  double completeness_defect() const;

  ComplexMatrix apply(const ComplexMatrix& rho) const;

  /// `after` ∘ `before`: all pairwise products K_a K_b.
  static KrausChannel compose(const KrausChannel& after, const KrausChannel& before);

 private:
  std::vector<ComplexMatrix> ops_;
  std::string label_;
};

/// K0 = sqrt(1 − p/2) I, K1 = sqrt(p/2) σz; coherences shrink by (1 − p).
KrausChannel phase_damping(double p);

/// Four-operator thermal damping towards diag(γ, 1 − γ).
KrausChannel generalized_amplitude_damping(double p, double gamma);

/// Σ_{jk} (K_j ⊗ K_k) ρ (K_j ⊗ K_k)†.
ComplexMatrix apply_local(const ComplexMatrix& rho, const KrausChannel& channel_a,
                          const KrausChannel& channel_b);
DensityMatrix apply_local(const DensityMatrix& rho, const KrausChannel& channel_a,
                          const KrausChannel& channel_b);

/// Closed-form local phase damping of a Bell-diagonal triple:
/// ((1−p)² c1, (1−p)² c2, c3).
BellDiagonalParams evolved_bell_diagonal(const BellDiagonalParams& c, double p);

enum class Regime { constant_classical, sudden_change, monotonic };
std::string_view to_string(Regime regime);

Regime classify_regime(const BellDiagonalParams& c);

/// p_sc = 1 − sqrt(|c3| / max(|c1|,|c2|)) in the sudden-change regime,
/// nothing otherwise.
std::optional<double> sudden_change_point(const BellDiagonalParams& c);

/// Axis label ("x","y","z") achieving κ; ties go to the lowest axis.
std::string_view axis_name(int axis);

struct RelaxationParams {
  double t1_a = 2.5;   // s
  double t1_b = 7.0;   // s
  double t2_a = 0.31;  // s, effective T2*
  double t2_b = 0.12;  // s, effective T2*
  double epsilon = 1e-5;
  double gamma = (1.0 - 1e-5) / 2.0;
  bool include_amplitude = true;  // false: pure phase damping

  /// Measured CHCl3 values, γ = (1 − ε)/2.
  static RelaxationParams nmr_default();

  /// Throws std::invalid_argument for non-positive times or γ outside [0,1];
  /// returns warnings for T2 > 2 T1.
  std::vector<std::string> validate() const;
};

/// T2 that makes the two-qubit coherence factor (1−p_a)(1−p_b) equal to
/// (1−p)²: the harmonic mean of the two T2 values.
double effective_t2(const RelaxationParams& params);

/// Phase-damping time −T2_eff ln(1 − p_sc); nothing outside regime (ii).
std::optional<double> predicted_sudden_change_time(const BellDiagonalParams& c,
                                                   const RelaxationParams& params);

/// GAD (p = 1 − e^{−t/T1}) then phase damping (p = 1 − e^{−t/T2}), with each
/// qubit using its own times. Works on states or deviation matrices alike.
ComplexMatrix nmr_evolve(const ComplexMatrix& rho, const RelaxationParams& params,
                         double t);
DensityMatrix nmr_evolve(const DensityMatrix& rho, const RelaxationParams& params,
                         double t);

/// Deviation of the evolved high-temperature state:
/// (E(I/4 + εΔ) − I/4)/ε computed without forming I/4 + εΔ.
DeviationMatrix nmr_evolve(const DeviationMatrix& delta, const RelaxationParams& params,
                           double t);

struct Trajectory {
  std::vector<double> times;  // seconds, or the parametrized time p
  std::vector<DensityMatrix> states;
  std::vector<CorrelationReport> reports;
  std::vector<int> kappa_axes;  // 0,1,2 = x,y,z
  std::string unit = "bit";
  Regime regime = Regime::monotonic;
};

/// Analytic Bell-diagonal correlations along a phase-damping grid.
Trajectory pd_trajectory(const BellDiagonalParams& c0, const std::vector<double>& p_grid);

/// Exact correlations (bits) of the composed NMR channel along `t_grid`.
Trajectory nmr_trajectory(const DensityMatrix& rho0, const RelaxationParams& params,
                          const std::vector<double>& t_grid,
                          const OptimizerConfig& opt = {});

/// Deviation-scale correlations ((ε²/ln2) bit) of the composed NMR channel.
Trajectory nmr_trajectory(const DeviationMatrix& delta0, const RelaxationParams& params,
                          const std::vector<double>& t_grid,
                          const OptimizerConfig& opt = {});

inline constexpr double kDefaultJ = 215.1;  // Hz

/// t_m = m / (4J), m = 0..m_max.
std::vector<double> default_time_grid(double j_coupling = kDefaultJ, int m_max = 250);

/// p = 0, step, ..., 1 (last point pinned to 1).
std::vector<double> uniform_p_grid(double step);

/// Columns t_or_p, mi, cc, qd, regime, kappa_axis; 12 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace qdlab
