#include "qdlab/witness.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qdlab/parallel.hpp"

namespace qdlab {

namespace {

constexpr double kUnitTol = 1e-12;

Eigen::Vector3d gaussian_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = {normal(rng), normal(rng), normal(rng)};
  } while (v.norm() < 1e-12);
  return v.normalized();
}

WitnessReport finish(std::array<double, 4> e, double cutoff) {
  if (!(cutoff >= 0.0)) throw std::invalid_argument("witness: cutoff must be >= 0");
  WitnessReport r;
  r.expectations = e;
  r.value = witness_value(e);
  r.cutoff = cutoff;
  r.verdict = r.value > cutoff ? Verdict::quantum_correlated : Verdict::classical_compatible;
  return r;
}

std::array<double, 4> direct_expectations(const ComplexMatrix& m,
                                          const WitnessDirections& dirs) {
  dirs.validate();
  const PauliComponents pc = pauli_components(m);
  return {pc.t(0, 0), pc.t(1, 1), pc.t(2, 2), dirs.z.dot(pc.a) + dirs.w.dot(pc.b)};
}

ComplexMatrix rotation(const Eigen::Vector3d& axis, double angle) {
  const ComplexMatrix ns = axis(0) * pauli(1) + axis(1) * pauli(2) + axis(2) * pauli(3);
  return std::cos(angle / 2) * identity(2) - Complex(0.0, std::sin(angle / 2)) * ns;
}

ComplexMatrix cnot_a_controls() {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = 1.0;
  u(2, 3) = u(3, 2) = 1.0;
  return u;
}

double sx_a(const ComplexMatrix& m) {
  return (m * tensor(pauli(1), identity(2))).trace().real();
}

std::array<double, 4> circuit_expectations(const ComplexMatrix& m,
                                           const WitnessDirections& dirs) {
  dirs.validate();
  const ComplexMatrix cnot = cnot_a_controls();
  auto readout = [&](const ComplexMatrix& r) {
    const ComplexMatrix u = cnot * tensor(r, r);
    return sx_a(u * m * u.adjoint());
  };
  const double half_pi = std::numbers::pi / 2;
  // y(π/2) turns the readout into σz⊗σz, z(π/2) into σy⊗σy.
  const double o1 = readout(identity(2));
  const double o3 = readout(rotation(Eigen::Vector3d::UnitY(), half_pi));
  const double o2 = readout(rotation(Eigen::Vector3d::UnitZ(), half_pi));

  const PauliComponents pc = pauli_components(m);
  return {o1, o2, o3, dirs.z.dot(pc.a) + dirs.w.dot(pc.b)};
}

}  // namespace

WitnessDirections WitnessDirections::random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WitnessDirections d;
  d.z = gaussian_unit(rng);
  d.w = gaussian_unit(rng);
  d.seed = seed;
  return d;
}

void WitnessDirections::validate() const {
  if (std::abs(z.norm() - 1.0) > kUnitTol || std::abs(w.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("WitnessDirections: z and w must be unit vectors");
  }
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::quantum_correlated ? "quantum_correlated"
                                                : "classical_compatible";
}

double witness_value(const std::array<double, 4>& e) {
  double w = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 4; ++j) w += std::abs(e[i] * e[j]);
  }
  return w;
}

nlohmann::ordered_json to_json(const WitnessReport& report) {
  nlohmann::ordered_json j;
  j["w_value"] = report.value;
  j["o1"] = report.expectations[0];
  j["o2"] = report.expectations[1];
  j["o3"] = report.expectations[2];
  j["o4"] = report.expectations[3];
  j["cutoff"] = report.cutoff;
  j["verdict"] = std::string(to_string(report.verdict));
  return j;
}

WitnessReport witness_direct(const DensityMatrix& rho, const WitnessDirections& dirs,
                             double cutoff) {
  if (!rho.is_two_qubit()) throw std::invalid_argument("witness: two-qubit state required");
  return finish(direct_expectations(rho.matrix(), dirs), cutoff);
}

WitnessReport witness_direct(const DeviationMatrix& delta, const WitnessDirections& dirs,
                             double cutoff) {
  if (delta.dim() != 4) throw std::invalid_argument("witness: 4x4 deviation required");
  return finish(direct_expectations(delta.matrix(), dirs), cutoff);
}

WitnessReport witness_circuit(const DensityMatrix& rho, const WitnessDirections& dirs,
                              double cutoff) {
  if (!rho.is_two_qubit()) throw std::invalid_argument("witness: two-qubit state required");
  return finish(circuit_expectations(rho.matrix(), dirs), cutoff);
}

WitnessReport witness_circuit(const DeviationMatrix& delta, const WitnessDirections& dirs,
                              double cutoff) {
  if (delta.dim() != 4) throw std::invalid_argument("witness: 4x4 deviation required");
  return finish(circuit_expectations(delta.matrix(), dirs), cutoff);
}

bool is_classical_bell_diagonal(const BellDiagonalParams& c) {
  int nonzero = 0;
  for (double v : c.c()) nonzero += std::abs(v) > 1e-12 ? 1 : 0;
  return nonzero <= 1;
}

std::vector<WitnessReport> witness_dynamics(const DensityMatrix& rho0,
                                            const RelaxationParams& params, int n_steps,
                                            double dt, const WitnessDirections& dirs,
                                            double cutoff) {
  if (n_steps < 1 || !(dt > 0.0)) {
    throw std::invalid_argument("witness_dynamics: need n_steps >= 1 and dt > 0");
  }
  params.validate();
  dirs.validate();
  std::vector<WitnessReport> out(static_cast<std::size_t>(n_steps));
  parallel_for(out.size(), [&](std::size_t n) {
    const DensityMatrix rho = nmr_evolve(rho0, params, static_cast<double>(n) * dt);
    out[n] = witness_direct(rho, dirs, cutoff);
  });
  return out;
}

}  // namespace qdlab
