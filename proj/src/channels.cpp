#include "qdlab/channels.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "qdlab/matrix_io.hpp"
#include "qdlab/parallel.hpp"

namespace qdlab {

namespace {

constexpr double kRegimeGuard = 1e-12;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

double decay_probability(double t, double time_constant) {
  return -std::expm1(-t / time_constant);
}

int dominant_axis(const Eigen::Vector3d& n) {
  int axis = 0;
  for (int j = 1; j < 3; ++j) {
    if (std::abs(n(j)) > std::abs(n(axis)) + 1e-9) axis = j;
  }
  return axis;
}

struct QubitChannels {
  KrausChannel a;
  KrausChannel b;
};

QubitChannels nmr_channels(const RelaxationParams& params, double t) {
  const KrausChannel pd_a = phase_damping(decay_probability(t, params.t2_a));
  const KrausChannel pd_b = phase_damping(decay_probability(t, params.t2_b));
  if (!params.include_amplitude) return {pd_a, pd_b};
  const KrausChannel gad_a =
      generalized_amplitude_damping(decay_probability(t, params.t1_a), params.gamma);
  const KrausChannel gad_b =
      generalized_amplitude_damping(decay_probability(t, params.t1_b), params.gamma);
  return {KrausChannel::compose(pd_a, gad_a), KrausChannel::compose(pd_b, gad_b)};
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, std::string label)
    : ops_(std::move(operators)), label_(std::move(label)) {
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: no operators");
  const auto d = ops_.front().rows();
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("KrausChannel: operators must share one square shape");
    }
  }
  if (completeness_defect() > kTolCptp) {
    throw PhysicsError("KrausChannel '" + label_ + "': sum K^dagger K != I");
  }
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel({qdlab::identity(dim)}, "identity");
}

double KrausChannel::completeness_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim(), dim());
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - qdlab::identity(dim())).cwiseAbs().maxCoeff();
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) {
    throw std::invalid_argument("KrausChannel::apply: dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (const auto& k : ops_) out += k * rho * k.adjoint();
  return out;
}

KrausChannel KrausChannel::compose(const KrausChannel& after, const KrausChannel& before) {
  if (after.dim() != before.dim()) {
    throw std::invalid_argument("KrausChannel::compose: dimension mismatch");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(after.ops_.size() * before.ops_.size());
  for (const auto& ka : after.ops_) {
    for (const auto& kb : before.ops_) ops.push_back(ka * kb);
  }
  return KrausChannel(std::move(ops), after.label_ + "*" + before.label_);
}

KrausChannel phase_damping(double p) {
  check_probability(p, "phase_damping: p");
  return KrausChannel({std::sqrt(1.0 - p / 2.0) * identity(2), std::sqrt(p / 2.0) * pauli(3)},
                      "phase_damping");
}

KrausChannel generalized_amplitude_damping(double p, double gamma) {
  check_probability(p, "generalized_amplitude_damping: p");
  check_probability(gamma, "generalized_amplitude_damping: gamma");
  const double sg = std::sqrt(gamma);
  const double sh = std::sqrt(1.0 - gamma);
  const double keep = std::sqrt(1.0 - p);
  const double jump = std::sqrt(p);
  ComplexMatrix k0(2, 2), k1(2, 2), k2(2, 2), k3(2, 2);
  k0 << sg, 0.0, 0.0, sg * keep;
  k1 << 0.0, sg * jump, 0.0, 0.0;
  k2 << sh * keep, 0.0, 0.0, sh;
  k3 << 0.0, 0.0, sh * jump, 0.0;
  return KrausChannel({k0, k1, k2, k3}, "generalized_amplitude_damping");
}

ComplexMatrix apply_local(const ComplexMatrix& rho, const KrausChannel& channel_a,
                          const KrausChannel& channel_b) {
  if (rho.rows() != channel_a.dim() * channel_b.dim() || rho.cols() != rho.rows()) {
    throw std::invalid_argument("apply_local: channel dims do not match the state");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& ka : channel_a.operators()) {
    for (const auto& kb : channel_b.operators()) {
      const ComplexMatrix k = tensor(ka, kb);
      out += k * rho * k.adjoint();
    }
  }
  return out;
}

DensityMatrix apply_local(const DensityMatrix& rho, const KrausChannel& channel_a,
                          const KrausChannel& channel_b) {
  const auto& dims = rho.subsystem_dims();
  if (dims.size() != 2 || dims[0] != channel_a.dim() || dims[1] != channel_b.dim()) {
    throw std::invalid_argument("apply_local: channel dims do not match the subsystems");
  }
  return DensityMatrix(apply_local(rho.matrix(), channel_a, channel_b), dims);
}

BellDiagonalParams evolved_bell_diagonal(const BellDiagonalParams& c, double p) {
  check_probability(p, "evolved_bell_diagonal: p");
  const double f = (1.0 - p) * (1.0 - p);
  return {f * c.c1(), f * c.c2(), c.c3()};
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::constant_classical:
      return "constant_classical";
    case Regime::sudden_change:
      return "sudden_change";
    case Regime::monotonic:
      return "monotonic";
  }
  return "unknown";
}

Regime classify_regime(const BellDiagonalParams& c) {
  const double c3 = std::abs(c.c3());
  const double transverse = std::max(std::abs(c.c1()), std::abs(c.c2()));
  if (c3 <= kRegimeGuard) return Regime::monotonic;
  if (c3 >= transverse - kRegimeGuard) return Regime::constant_classical;
  return Regime::sudden_change;
}

std::optional<double> sudden_change_point(const BellDiagonalParams& c) {
  if (classify_regime(c) != Regime::sudden_change) return std::nullopt;
  const double transverse = std::max(std::abs(c.c1()), std::abs(c.c2()));
  return 1.0 - std::sqrt(std::abs(c.c3()) / transverse);
}

std::string_view axis_name(int axis) {
  static constexpr std::string_view names[] = {"x", "y", "z"};
  if (axis < 0 || axis > 2) throw std::out_of_range("axis_name: axis must be 0..2");
  return names[axis];
}

RelaxationParams RelaxationParams::nmr_default() { return RelaxationParams{}; }

std::vector<std::string> RelaxationParams::validate() const {
  for (double t : {t1_a, t1_b, t2_a, t2_b}) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("RelaxationParams: relaxation times must be positive");
    }
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("RelaxationParams: gamma must lie in [0, 1]");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("RelaxationParams: epsilon must be positive");
  }
  std::vector<std::string> warnings;
  if (t2_a > 2.0 * t1_a) warnings.emplace_back("qubit A: T2 > 2 T1");
  if (t2_b > 2.0 * t1_b) warnings.emplace_back("qubit B: T2 > 2 T1");
  return warnings;
}

double effective_t2(const RelaxationParams& params) {
  return 2.0 / (1.0 / params.t2_a + 1.0 / params.t2_b);
}

std::optional<double> predicted_sudden_change_time(const BellDiagonalParams& c,
                                                   const RelaxationParams& params) {
  const auto p_sc = sudden_change_point(c);
  if (!p_sc) return std::nullopt;
  return -effective_t2(params) * std::log1p(-*p_sc);
}

ComplexMatrix nmr_evolve(const ComplexMatrix& rho, const RelaxationParams& params,
                         double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("nmr_evolve: t must be >= 0");
  const QubitChannels ch = nmr_channels(params, t);
  return apply_local(rho, ch.a, ch.b);
}

DensityMatrix nmr_evolve(const DensityMatrix& rho, const RelaxationParams& params,
                         double t) {
  if (!rho.is_two_qubit()) throw std::invalid_argument("nmr_evolve: two-qubit state required");
  return DensityMatrix(nmr_evolve(rho.matrix(), params, t));
}

DeviationMatrix nmr_evolve(const DeviationMatrix& delta, const RelaxationParams& params,
                           double t) {
  ComplexMatrix out = nmr_evolve(delta.matrix(), params, t);
  if (params.include_amplitude) {
    // E(I) = (I + p_a g σz) ⊗ (I + p_b g σz) with g = 2γ − 1; phase damping
    // leaves σz alone.
    const double g = 2.0 * params.gamma - 1.0;
    const double pa = decay_probability(t, params.t1_a);
    const double pb = decay_probability(t, params.t1_b);
    const ComplexMatrix sz = pauli(3);
    const ComplexMatrix id = identity(2);
    const double eps = delta.epsilon();
    out += (pa * g * tensor(sz, id) + pb * g * tensor(id, sz) +
            pa * pb * g * g * tensor(sz, sz)) /
           (4.0 * eps);
  }
  return DeviationMatrix(out, delta.epsilon());
}

Trajectory pd_trajectory(const BellDiagonalParams& c0, const std::vector<double>& p_grid) {
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    check_probability(p_grid[i], "pd_trajectory: p");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw std::invalid_argument("pd_trajectory: p grid must be strictly increasing");
    }
  }
  Trajectory traj;
  traj.regime = classify_regime(c0);
  traj.times = p_grid;
  for (double p : p_grid) {
    const BellDiagonalParams c = evolved_bell_diagonal(c0, p);
    traj.states.push_back(c.state());
    traj.reports.push_back(bell_diagonal_analytic(c));
    traj.kappa_axes.push_back(c.kappa_axis());
  }
  return traj;
}

namespace {

void check_time_grid(const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw std::invalid_argument("time grid must be non-negative and strictly increasing");
    }
  }
}

Regime regime_of(const ComplexMatrix& m) {
  const PauliComponents pc = pauli_components(m);
  const double c1 = std::abs(pc.t(0, 0)), c2 = std::abs(pc.t(1, 1)), c3 = std::abs(pc.t(2, 2));
  if (c3 <= kRegimeGuard) return Regime::monotonic;
  if (c3 >= std::max(c1, c2) - kRegimeGuard) return Regime::constant_classical;
  return Regime::sudden_change;
}

}  // namespace

Trajectory nmr_trajectory(const DensityMatrix& rho0, const RelaxationParams& params,
                          const std::vector<double>& t_grid, const OptimizerConfig& opt) {
  params.validate();
  if (!rho0.is_two_qubit()) throw std::invalid_argument("nmr_trajectory: two-qubit state required");
  check_time_grid(t_grid);
  const std::size_t n = t_grid.size();
  std::vector<std::optional<DensityMatrix>> states(n);
  std::vector<CorrelationReport> reports(n);
  parallel_for(n, [&](std::size_t i) {
    DensityMatrix rho = nmr_evolve(rho0, params, t_grid[i]);
    reports[i] = symmetric_discord(rho, opt);
    states[i].emplace(std::move(rho));
  });
  Trajectory traj;
  traj.times = t_grid;
  traj.reports = std::move(reports);
  traj.regime = regime_of(rho0.matrix());
  for (auto& s : states) traj.states.push_back(std::move(*s));
  for (const auto& r : traj.reports) {
    traj.kappa_axes.push_back(dominant_axis(
        measurement_direction(r.argmax_basis.theta_a, r.argmax_basis.phi_a)));
  }
  return traj;
}

Trajectory nmr_trajectory(const DeviationMatrix& delta0, const RelaxationParams& params,
                          const std::vector<double>& t_grid, const OptimizerConfig& opt) {
  params.validate();
  if (delta0.dim() != 4) throw std::invalid_argument("nmr_trajectory: 4x4 deviation required");
  check_time_grid(t_grid);
  const std::size_t n = t_grid.size();
  std::vector<std::optional<DensityMatrix>> states(n);
  std::vector<CorrelationReport> reports(n);
  parallel_for(n, [&](std::size_t i) {
    const DeviationMatrix delta = nmr_evolve(delta0, params, t_grid[i]);
    reports[i] = deviation_discord(delta, opt);
    states[i].emplace(delta.state());
  });
  Trajectory traj;
  traj.times = t_grid;
  traj.reports = std::move(reports);
  traj.unit = "eps2_over_ln2_bit";
  traj.regime = regime_of(delta0.matrix());
  for (auto& s : states) traj.states.push_back(std::move(*s));
  for (const auto& r : traj.reports) {
    traj.kappa_axes.push_back(dominant_axis(
        measurement_direction(r.argmax_basis.theta_a, r.argmax_basis.phi_a)));
  }
  return traj;
}

std::vector<double> default_time_grid(double j_coupling, int m_max) {
  if (!(j_coupling > 0.0) || m_max < 0) {
    throw std::invalid_argument("default_time_grid: need J > 0 and m_max >= 0");
  }
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) t.push_back(m / (4.0 * j_coupling));
  return t;
}

std::vector<double> uniform_p_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument("uniform_p_grid: step must lie in (0, 1]");
  }
  const auto n = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> p;
  for (int k = 0; k <= n; ++k) p.push_back(static_cast<double>(k) / n);
  return p;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t_or_p,mi,cc,qd,regime,kappa_axis\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& r = traj.reports[i];
    os << format_double(traj.times[i], 12) << ',' << format_double(r.mutual_information, 12)
       << ',' << format_double(r.classical_correlation, 12) << ','
       << format_double(r.symmetric_discord, 12) << ',' << to_string(traj.regime) << ','
       << axis_name(traj.kappa_axes[i]) << '\n';
  }
}

}  // namespace qdlab
