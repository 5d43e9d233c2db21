#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdlab/channels.hpp"
#include "qdlab/correlations.hpp"
#include "qdlab/qcore.hpp"

namespace qdlab {

inline constexpr double kDefaultWitnessCutoff = 0.05;

struct WitnessDirections {
  Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d w = Eigen::Vector3d::UnitZ();
  std::uint64_t seed = 0;

  /// Isotropic directions: normalized Gaussian 3-vectors from mt19937_64(seed).
  static WitnessDirections random(std::uint64_t seed);

  /// Throws std::invalid_argument unless |z| = |w| = 1 within 1e-12.
  void validate() const;
};

enum class Verdict { classical_compatible, quantum_correlated };
std::string_view to_string(Verdict verdict);

struct WitnessReport {
  double value = 0.0;
  std::array<double, 4> expectations{};  // <O1>..<O4>
  double cutoff = kDefaultWitnessCutoff;
  Verdict verdict = Verdict::classical_compatible;
};

/// Sum of |<Oi><Oj>| over i = 1..3, j = i+1..4.
double witness_value(const std::array<double, 4>& expectations);

/// Fields: w_value, o1, o2, o3, o4, cutoff, verdict.
nlohmann::ordered_json to_json(const WitnessReport& report);

/// O_j = σ_j⊗σ_j (j = 1..3), O_4 = z·σ⊗I + I⊗w·σ.
WitnessReport witness_direct(const DensityMatrix& rho, const WitnessDirections& dirs,
                             double cutoff = kDefaultWitnessCutoff);
/// Deviation input: expectations are Tr(Δ O_i), value in ε²-scaled units.
WitnessReport witness_direct(const DeviationMatrix& delta, const WitnessDirections& dirs,
                             double cutoff = kDefaultWitnessCutoff);

/// Measurement protocol: local rotation on both qubits, CNOT (A controls),
/// then <σx⊗I>. <O4> comes from the local magnetizations.
WitnessReport witness_circuit(const DensityMatrix& rho, const WitnessDirections& dirs,
                              double cutoff = kDefaultWitnessCutoff);
WitnessReport witness_circuit(const DeviationMatrix& delta, const WitnessDirections& dirs,
                              double cutoff = kDefaultWitnessCutoff);

/// At most one of c1, c2, c3 nonzero (within 1e-12).
bool is_classical_bell_diagonal(const BellDiagonalParams& c);

/// Witness on the NMR-relaxed states at t_n = n·dt, n = 0..n_steps-1.
std::vector<WitnessReport> witness_dynamics(const DensityMatrix& rho0,
                                            const RelaxationParams& params, int n_steps,
                                            double dt, const WitnessDirections& dirs,
                                            double cutoff = kDefaultWitnessCutoff);

}  // namespace qdlab
