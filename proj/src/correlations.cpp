#include "qdlab/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSlack = 1e-12;

// Differences of equal entropies can land a few ulps below zero.
double clip_rounding(double x) { return (x < 0.0 && x > -1e-12) ? 0.0 : x; }

double wrap_phi(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

void canonical_angles(const Eigen::Vector3d& n, double& theta, double& phi) {
  theta = 0.5 * std::acos(std::clamp(n.z(), -1.0, 1.0));
  phi = wrap_phi(std::atan2(n.y(), n.x()));
}

/// Entropy (bits) of a qubit with Bloch vector length r.
double qubit_entropy(double r) {
  r = std::min(r, 1.0);
  return binary_entropy(0.5 * (1.0 + r));
}

void require_two_qubit(const DensityMatrix& rho, const char* what) {
  if (!rho.is_two_qubit()) {
    throw std::invalid_argument(std::string(what) + ": expected a two-qubit state");
  }
}

void require_two_qubit(const DeviationMatrix& delta, const char* what) {
  if (delta.dim() != 4) {
    throw std::invalid_argument(std::string(what) + ": expected a 4x4 deviation matrix");
  }
}

double trace_square(const ComplexMatrix& m) { return (m * m).trace().real(); }

double deviation_quadratic_form(const ComplexMatrix& delta) {
  static constexpr std::array<int, 2> dims{2, 2};
  const ComplexMatrix da = partial_trace(delta, dims, 0);
  const ComplexMatrix db = partial_trace(delta, dims, 1);
  return 2.0 * trace_square(delta) - trace_square(da) - trace_square(db);
}

/// Σ (1/d + ε μ) log1p(d ε μ) / ln 2 over a spectrum μ; equals d-level
/// entropy deficit log2 d − S.
double entropy_deficit(std::span<const double> mu, double epsilon, double d) {
  double acc = 0.0;
  for (double m : mu) {
    const double p = 1.0 / d + epsilon * m;
    if (p > 0.0) acc += p * std::log1p(d * epsilon * m);
  }
  return acc / std::numbers::ln2;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

MeasurementBasis basis_from_point(std::span<const double> x) {
  return MeasurementBasis::canonical(x[0], x[1], x[2], x[3]);
}

}  // namespace

void MeasurementBasis::validate() const {
  for (double t : {theta_a, theta_b}) {
    if (!(t >= -kAngleSlack && t <= kPi / 2.0 + kAngleSlack)) {
      throw std::invalid_argument("MeasurementBasis: theta outside [0, pi/2]");
    }
  }
  for (double p : {phi_a, phi_b}) {
    if (!(p >= -kAngleSlack && p < 2.0 * kPi)) {
      throw std::invalid_argument("MeasurementBasis: phi outside [0, 2pi)");
    }
  }
}

MeasurementBasis MeasurementBasis::canonical(double theta_a, double phi_a,
                                             double theta_b, double phi_b) {
  MeasurementBasis b;
  canonical_angles(measurement_direction(theta_a, phi_a), b.theta_a, b.phi_a);
  canonical_angles(measurement_direction(theta_b, phi_b), b.theta_b, b.phi_b);
  return b;
}

Eigen::Vector3d measurement_direction(double theta, double phi) {
  const double s2 = std::sin(2.0 * theta);
  return {s2 * std::cos(phi), s2 * std::sin(phi), std::cos(2.0 * theta)};
}

ComplexMatrix direction_projector(const Eigen::Vector3d& n, int sign) {
  ComplexMatrix p = identity(2);
  for (int i = 0; i < 3; ++i) p += static_cast<double>(sign) * n(i) * pauli(i + 1);
  return 0.5 * p;
}

nlohmann::ordered_json to_json(const CorrelationReport& report) {
  nlohmann::ordered_json j;
  j["mi_bits"] = report.mutual_information;
  j["cc_bits"] = report.classical_correlation;
  j["qd_bits"] = report.symmetric_discord;
  j["theta_a"] = report.argmax_basis.theta_a;
  j["phi_a"] = report.argmax_basis.phi_a;
  j["theta_b"] = report.argmax_basis.theta_b;
  j["phi_b"] = report.argmax_basis.phi_b;
  j["evals"] = report.optimizer_evals;
  return j;
}

BellDiagonalParams::BellDiagonalParams(double c1, double c2, double c3)
    : c_{c1, c2, c3} {
  for (double c : c_) {
    if (!std::isfinite(c) || std::abs(c) > 1.0) {
      throw PhysicsError("BellDiagonalParams: each c_j must lie in [-1, 1]");
    }
  }
  const Spectrum s = eigendecompose(matrix());
  if (s.values.back() < -tol::psd) {
    throw PhysicsError("BellDiagonalParams: triple does not give a positive state");
  }
}

ComplexMatrix BellDiagonalParams::matrix() const {
  ComplexMatrix m = identity(4);
  for (int j = 0; j < 3; ++j) m += c_[j] * tensor(pauli(j + 1), pauli(j + 1));
  return m / 4.0;
}

DensityMatrix BellDiagonalParams::state() const { return DensityMatrix(matrix()); }

double BellDiagonalParams::kappa() const { return std::abs(c_[kappa_axis()]); }

int BellDiagonalParams::kappa_axis() const {
  int axis = 0;
  for (int j = 1; j < 3; ++j) {
    if (std::abs(c_[j]) > std::abs(c_[axis])) axis = j;
  }
  return axis;
}

BellDiagonalParams BellDiagonalParams::from_matrix(const ComplexMatrix& m) {
  const PauliComponents pc = pauli_components(m);
  return {pc.t(0, 0), pc.t(1, 1), pc.t(2, 2)};
}

double mutual_information(const DensityMatrix& rho) {
  require_two_qubit(rho, "mutual_information");
  return von_neumann_entropy(partial_trace(rho, 0)) +
         von_neumann_entropy(partial_trace(rho, 1)) - von_neumann_entropy(rho);
}

ComplexMatrix measure_matrix(const ComplexMatrix& m, const MeasurementBasis& basis) {
  const Eigen::Vector3d na = measurement_direction(basis.theta_a, basis.phi_a);
  const Eigen::Vector3d nb = measurement_direction(basis.theta_b, basis.phi_b);
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (int j : {+1, -1}) {
    for (int k : {+1, -1}) {
      const ComplexMatrix p =
          tensor(direction_projector(na, j), direction_projector(nb, k));
      out += p * m * p;
    }
  }
  return out;
}

DensityMatrix measured_state(const DensityMatrix& rho, const MeasurementBasis& basis) {
  require_two_qubit(rho, "measured_state");
  basis.validate();
  return DensityMatrix(measure_matrix(rho.matrix(), basis));
}

double measured_mutual_information(const PauliComponents& pc,
                                   const Eigen::Vector3d& na,
                                   const Eigen::Vector3d& nb) {
  const double alpha = pc.a.dot(na);
  const double beta = pc.b.dot(nb);
  const double gamma = na.dot(pc.t * nb);
  // p_jk = pA_j pB_k + s_j s_k g / 4; the log1p form keeps tiny correlations
  // accurate.
  const double g = gamma - alpha * beta;
  double acc = 0.0;
  for (int sj : {+1, -1}) {
    const double pa = 0.5 * (1.0 + sj * alpha);
    for (int sk : {+1, -1}) {
      const double pb = 0.5 * (1.0 + sk * beta);
      const double pjk = pa * pb + sj * sk * g / 4.0;
      if (pjk <= 0.0 || pa * pb <= 0.0) continue;
      acc += pjk * std::log1p(sj * sk * g / (4.0 * pa * pb));
    }
  }
  return acc / std::numbers::ln2;
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho,
                                           const OptimizerConfig& opt) {
  require_two_qubit(rho, "classical_correlation");
  const PauliComponents pc = pauli_components(rho.matrix());
  const Objective f = [&pc](std::span<const double> x) {
    return measured_mutual_information(pc, measurement_direction(x[0], x[1]),
                                       measurement_direction(x[2], x[3]));
  };
  const MaximizeResult r = maximize_over_directions(f, 2, opt);
  return {r.value, basis_from_point(r.x), r.evaluations, r.converged};
}

CorrelationReport symmetric_discord(const DensityMatrix& rho, const OptimizerConfig& opt) {
  const ClassicalCorrelation cc = classical_correlation(rho, opt);
  CorrelationReport rep;
  rep.mutual_information = mutual_information(rho);
  rep.classical_correlation = cc.value;
  rep.symmetric_discord = clip_rounding(rep.mutual_information - cc.value);
  rep.argmax_basis = cc.basis;
  rep.optimizer_evals = cc.evals;
  rep.converged = cc.converged;
  return rep;
}

AsymmetricDiscord asymmetric_discord(const DensityMatrix& rho, Side measured,
                                     const OptimizerConfig& opt) {
  require_two_qubit(rho, "asymmetric_discord");
  const PauliComponents pc = pauli_components(rho.matrix());
  // Measured side contributes `local_m` and the transfer matrix maps its
  // direction to the other side's conditional Bloch shift.
  const bool on_b = measured == Side::B;
  const Eigen::Vector3d local_m = on_b ? pc.b : pc.a;
  const Eigen::Vector3d local_o = on_b ? pc.a : pc.b;
  const Eigen::Matrix3d transfer = on_b ? pc.t : Eigen::Matrix3d(pc.t.transpose());
  const double s_other = qubit_entropy(local_o.norm());

  const Objective f = [&](std::span<const double> x) {
    const Eigen::Vector3d n = measurement_direction(x[0], x[1]);
    const double m = local_m.dot(n);
    const Eigen::Vector3d shift = transfer * n;
    double conditional = 0.0;
    for (int s : {+1, -1}) {
      const double weight = 1.0 + s * m;  // 2 p_s
      if (weight <= 0.0) continue;
      const Eigen::Vector3d r = (local_o + s * shift) / weight;
      conditional += 0.5 * weight * qubit_entropy(r.norm());
    }
    return s_other - conditional;
  };
  const MaximizeResult r = maximize_over_directions(f, 1, opt);
  AsymmetricDiscord out;
  out.classical = r.value;
  out.value = mutual_information(rho) - r.value;
  canonical_angles(measurement_direction(r.x[0], r.x[1]), out.theta, out.phi);
  out.evals = r.evaluations;
  out.converged = r.converged;
  return out;
}

CorrelationReport bell_diagonal_analytic(const BellDiagonalParams& c) {
  const Spectrum s = eigendecompose(c.matrix());
  double mi = 0.0;
  for (double lambda : s.values) {
    if (lambda > 0.0) mi += lambda * std::log2(4.0 * lambda);
  }
  const double kappa = c.kappa();
  double cc = 0.0;
  for (double x : {1.0 + kappa, 1.0 - kappa}) {
    if (x > 0.0) cc += 0.5 * x * std::log2(x);
  }
  CorrelationReport rep;
  rep.mutual_information = mi;
  rep.classical_correlation = cc;
  rep.symmetric_discord = clip_rounding(mi - cc);
  switch (c.kappa_axis()) {
    case 0:
      rep.argmax_basis = {kPi / 4.0, 0.0, kPi / 4.0, 0.0};
      break;
    case 1:
      rep.argmax_basis = {kPi / 4.0, kPi / 2.0, kPi / 4.0, kPi / 2.0};
      break;
    default:
      rep.argmax_basis = {0.0, 0.0, 0.0, 0.0};
      break;
  }
  rep.optimizer_evals = 0;
  return rep;
}

double deviation_mutual_information(const DeviationMatrix& delta) {
  require_two_qubit(delta, "deviation_mutual_information");
  return deviation_quadratic_form(delta.matrix());
}

double deviation_measured_mi(const DeviationMatrix& delta, const MeasurementBasis& basis) {
  require_two_qubit(delta, "deviation_measured_mi");
  basis.validate();
  return deviation_quadratic_form(measure_matrix(delta.matrix(), basis));
}

CorrelationReport deviation_discord(const DeviationMatrix& delta,
                                    const OptimizerConfig& opt) {
  require_two_qubit(delta, "deviation_discord");
  const PauliComponents pc = pauli_components(delta.matrix());
  // For traceless Δ the measured form reduces to (n_A · T n_B)² / 2.
  const Objective f = [&pc](std::span<const double> x) {
    const double g = measurement_direction(x[0], x[1])
                         .dot(pc.t * measurement_direction(x[2], x[3]));
    return 0.5 * g * g;
  };
  const MaximizeResult r = maximize_over_directions(f, 2, opt);
  CorrelationReport rep;
  rep.mutual_information = deviation_mutual_information(delta);
  rep.classical_correlation = r.value;
  rep.symmetric_discord = clip_rounding(rep.mutual_information - r.value);
  rep.argmax_basis = basis_from_point(r.x);
  rep.optimizer_evals = r.evaluations;
  rep.converged = r.converged;
  return rep;
}

double high_temperature_mutual_information(const DeviationMatrix& delta) {
  require_two_qubit(delta, "high_temperature_mutual_information");
  static constexpr std::array<int, 2> dims{2, 2};
  const double eps = delta.epsilon();
  const auto mu_ab = hermitian_eigenvalues(delta.matrix());
  const auto mu_a = hermitian_eigenvalues(partial_trace(delta.matrix(), dims, 0));
  const auto mu_b = hermitian_eigenvalues(partial_trace(delta.matrix(), dims, 1));
  // I = (S_A - 1) + (S_B - 1) - (S_AB - 2), each bracket = -deficit.
  return entropy_deficit(mu_ab, eps, 4.0) - entropy_deficit(mu_a, eps, 2.0) -
         entropy_deficit(mu_b, eps, 2.0);
}

double deviation_unit_in_bits(double epsilon) {
  return epsilon * epsilon / std::numbers::ln2;
}

}  // namespace qdlab
