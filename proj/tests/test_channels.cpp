#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdlab/channels.hpp"
#include "random_states.hpp"

using namespace qdlab;
using qdlab::testing::Rng;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix qubit_state(double x, double y, double z) {
  return (identity(2) + x * pauli(1) + y * pauli(2) + z * pauli(3)) / 2.0;
}

/// Evolved Bell-diagonal matrix laid out by hand: α ± β on the anti-diagonal
/// blocks, populations (1 ± c3)/4 on the diagonal.
ComplexMatrix displayed_pattern(double c1, double c2, double c3, double p) {
  const double f = (1 - p) * (1 - p);
  const double alpha = f * (c1 - c2) / 4.0, beta = f * (c1 + c2) / 4.0;
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = (1 + c3) / 4.0;
  m(1, 1) = m(2, 2) = (1 - c3) / 4.0;
  m(0, 3) = m(3, 0) = alpha;
  m(1, 2) = m(2, 1) = beta;
  return m;
}

}  // namespace

TEST(KrausChannelTest, CompletenessChecked) {
  EXPECT_THROW(KrausChannel({pauli(3) * 0.5}, "bad"), PhysicsError);
  EXPECT_THROW(KrausChannel({}, "empty"), std::invalid_argument);
  EXPECT_THROW(KrausChannel({identity(2), identity(3)}, "mixed"), std::invalid_argument);
  for (double p : {0.0, 0.3, 1.0}) {
    EXPECT_LE(phase_damping(p).completeness_defect(), kTolCptp);
    for (double g : {0.0, 0.2, 0.5, 1.0})
      EXPECT_LE(generalized_amplitude_damping(p, g).completeness_defect(), kTolCptp);
  }
  EXPECT_THROW(phase_damping(1.5), std::invalid_argument);
  EXPECT_THROW(generalized_amplitude_damping(0.5, -0.1), std::invalid_argument);
}

TEST(PhaseDamping, ShrinksCoherencesAndComposes) {
  const ComplexMatrix rho = qubit_state(0.6, -0.3, 0.5);
  const ComplexMatrix out = phase_damping(0.4).apply(rho);
  EXPECT_NEAR(std::abs(out(0, 1) - 0.6 * rho(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out(0, 0) - rho(0, 0)), 0.0, 1e-15);

  // (1 − p1)(1 − p2) = 1 − p
  const double p1 = 0.2, p2 = 0.35;
  const KrausChannel two = KrausChannel::compose(phase_damping(p2), phase_damping(p1));
  const KrausChannel one = phase_damping(1 - (1 - p1) * (1 - p2));
  EXPECT_LE(max_abs(two.apply(rho) - one.apply(rho)), 1e-14);
}

TEST(GeneralizedAmplitudeDamping, BlochMap) {
  const double p = 0.3, gamma = 0.8;
  const ComplexMatrix out = generalized_amplitude_damping(p, gamma).apply(qubit_state(0.4, 0.2, -0.5));
  const double x = 2 * out(0, 1).real(), z = (out(0, 0) - out(1, 1)).real();
  EXPECT_NEAR(x, std::sqrt(1 - p) * 0.4, 1e-14);
  EXPECT_NEAR(z, (1 - p) * -0.5 + p * (2 * gamma - 1), 1e-14);
}

TEST(GeneralizedAmplitudeDamping, ThermalFixedPoint) {
  Rng rng(21);
  for (double gamma : {0.0, 0.25, 0.5 - 5e-6, 1.0}) {
    const KrausChannel full = generalized_amplitude_damping(1.0, gamma);
    ComplexMatrix target = ComplexMatrix::Zero(2, 2);
    target(0, 0) = gamma;
    target(1, 1) = 1 - gamma;
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix rho = qdlab::testing::random_density_matrix(rng, 2, 1 + trial % 2);
      ASSERT_LE(max_abs(full.apply(rho) - target), 1e-12);
    }
    ASSERT_LE(max_abs(generalized_amplitude_damping(0.37, gamma).apply(target) - target), 1e-14);
  }
}

TEST(ApplyLocal, PreservesTraceAndPositivity) {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = qdlab::testing::random_state(rng);
    const DensityMatrix out =
        apply_local(rho, generalized_amplitude_damping(0.1 * (trial % 10), 0.3), phase_damping(0.5));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
  }
  EXPECT_THROW(apply_local(identity(4) / 4.0, KrausChannel::identity(3), phase_damping(0)),
               std::invalid_argument);
}

TEST(EvolvedBellDiagonal, MatchesKrausAndDisplayedPattern) {
  Rng rng(23);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const BellDiagonalParams c = qdlab::testing::random_bell(rng);
    const double p = up(rng);
    const ComplexMatrix kraus = apply_local(c.matrix(), phase_damping(p), phase_damping(p));
    const ComplexMatrix closed = evolved_bell_diagonal(c, p).matrix();
    ASSERT_LE(max_abs(kraus - closed), 1e-12);
    ASSERT_LE(max_abs(closed - displayed_pattern(c.c1(), c.c2(), c.c3(), p)), 1e-12);
  }
}

TEST(Regimes, Classification) {
  EXPECT_EQ(classify_regime({0.06, 0.3, 0.33}), Regime::constant_classical);
  EXPECT_EQ(classify_regime({1, -0.6, 0.6}), Regime::sudden_change);
  EXPECT_EQ(classify_regime({0.25, 0.25, 0}), Regime::monotonic);
  EXPECT_EQ(to_string(Regime::sudden_change), "sudden_change");
  EXPECT_EQ(axis_name(2), "z");
  EXPECT_THROW(axis_name(3), std::out_of_range);
}

TEST(Regimes, SuddenChangePoint) {
  const auto psc = sudden_change_point({1, -0.6, 0.6});
  ASSERT_TRUE(psc.has_value());
  EXPECT_NEAR(*psc, 1 - std::sqrt(0.6), 1e-12);
  EXPECT_NEAR(*psc, 0.22540, 1e-4);
  EXPECT_FALSE(sudden_change_point({0.25, 0.25, 0}).has_value());
  EXPECT_FALSE(sudden_change_point({0.06, 0.3, 0.33}).has_value());
}

TEST(PdTrajectory, ThreeRegimes) {
  const auto grid = uniform_p_grid(0.01);
  ASSERT_EQ(grid.size(), 101u);
  EXPECT_EQ(grid.back(), 1.0);

  {
    const Trajectory t = pd_trajectory({0.06, 0.3, 0.33}, grid);
    double lo = 1e9, hi = -1e9;
    for (const auto& r : t.reports) {
      lo = std::min(lo, r.classical_correlation);
      hi = std::max(hi, r.classical_correlation);
    }
    EXPECT_LE(hi - lo, 1e-9);
  }
  {
    const BellDiagonalParams c(1, -0.6, 0.6);
    const double psc = *sudden_change_point(c);
    const Trajectory t = pd_trajectory(c, grid);
    const double qd0 = t.reports.front().symmetric_discord;
    const double cc_late = bell_diagonal_analytic(evolved_bell_diagonal(c, psc)).classical_correlation;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < psc) {
        EXPECT_NEAR(t.reports[i].symmetric_discord, qd0, 1e-9) << grid[i];
      } else {
        EXPECT_NEAR(t.reports[i].classical_correlation, cc_late, 1e-9) << grid[i];
      }
    }
    EXPECT_EQ(t.kappa_axes.front(), 0);
    EXPECT_EQ(t.kappa_axes.back(), 2);
  }
  {
    const Trajectory t = pd_trajectory({0.25, 0.25, 0}, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      EXPECT_LE(t.reports[i].mutual_information, t.reports[i - 1].mutual_information + 1e-15);
      EXPECT_LE(t.reports[i].classical_correlation, t.reports[i - 1].classical_correlation + 1e-15);
      EXPECT_LE(t.reports[i].symmetric_discord, t.reports[i - 1].symmetric_discord + 1e-15);
    }
  }
  EXPECT_THROW(pd_trajectory({0, 0, 0}, {0.5, 0.2}), std::invalid_argument);
}

TEST(Relaxation, DefaultsAndValidation) {
  RelaxationParams p = RelaxationParams::nmr_default();
  EXPECT_TRUE(p.validate().empty());
  EXPECT_NEAR(effective_t2(p), 2.0 / (1 / 0.31 + 1 / 0.12), 1e-15);
  const auto tsc = predicted_sudden_change_time({1, -0.6, 0.6}, p);
  ASSERT_TRUE(tsc.has_value());
  EXPECT_NEAR(*tsc, -effective_t2(p) * std::log(std::sqrt(0.6)), 1e-12);
  EXPECT_FALSE(predicted_sudden_change_time({0.25, 0.25, 0}, p).has_value());

  p.t2_a = 6.0;
  EXPECT_EQ(p.validate().size(), 1u);
  p.t1_b = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  RelaxationParams q;
  q.gamma = 1.5;
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(NmrEvolve, IdentityAtZeroAndThermalAsymptote) {
  const RelaxationParams p = RelaxationParams::nmr_default();
  Rng rng(24);
  const DensityMatrix rho = qdlab::testing::random_state(rng);
  EXPECT_LE(max_abs(nmr_evolve(rho, p, 0.0).matrix() - rho.matrix()), 1e-15);
  EXPECT_THROW(nmr_evolve(rho, p, -1.0), std::invalid_argument);

  const DensityMatrix late = nmr_evolve(rho, p, 10 * 7.0);
  ComplexMatrix local = ComplexMatrix::Zero(2, 2);
  local(0, 0) = p.gamma;
  local(1, 1) = 1 - p.gamma;
  // Slowest population decays as e^{-10}.
  EXPECT_LE(max_abs(late.matrix() - tensor(local, local)), std::exp(-10.0));
}

TEST(NmrEvolve, DeviationPathMatchesStatePath) {
  Rng rng(25);
  RelaxationParams p = RelaxationParams::nmr_default();
  for (bool amplitude : {true, false}) {
    p.include_amplitude = amplitude;
    for (int trial = 0; trial < 10; ++trial) {
      const DeviationMatrix d(qdlab::testing::random_traceless(rng), 1e-3);
      const double t = 0.05 * trial;
      const DeviationMatrix fast = nmr_evolve(d, p, t);
      const ComplexMatrix exact =
          (nmr_evolve(d.state().matrix(), p, t) - identity(4) / 4.0) / d.epsilon();
      ASSERT_LE(max_abs(fast.matrix() - exact), 1e-9);
    }
  }
}

TEST(NmrEvolve, PureDephasingMatchesPhaseDamping) {
  RelaxationParams p = RelaxationParams::nmr_default();
  p.include_amplitude = false;
  p.t2_a = p.t2_b = 0.2;
  const BellDiagonalParams c(1, -0.6, 0.6);
  const double t = 0.05;
  const double pd = 1 - std::exp(-t / 0.2);
  EXPECT_LE(max_abs(nmr_evolve(c.matrix(), p, t) - evolved_bell_diagonal(c, pd).matrix()), 1e-14);
}

TEST(NmrTrajectory, CorrelationsVanishAtLongTimes) {
  const RelaxationParams p = RelaxationParams::nmr_default();
  OptimizerConfig opt;
  opt.grid_theta = opt.grid_phi = 8;
  const auto phi = DensityMatrix::pure(qdlab::testing::bell_phi_plus(), {2, 2});
  const Trajectory t = nmr_trajectory(phi, p, {0.0, 1.0, 10 * 7.0}, opt);
  EXPECT_NEAR(t.reports.front().symmetric_discord, 1.0, kTolOpt);
  EXPECT_LT(t.reports.back().mutual_information, 1e-6);
  EXPECT_LT(t.reports.back().classical_correlation, 1e-6);
  EXPECT_LT(t.reports.back().symmetric_discord, 1e-6);
  EXPECT_EQ(t.unit, "bit");
  EXPECT_THROW(nmr_trajectory(phi, p, {0.2, 0.1}, opt), std::invalid_argument);
}

TEST(NmrTrajectory, DeviationTrajectoryUnitsAndRegime) {
  const RelaxationParams p = RelaxationParams::nmr_default();
  const ComplexMatrix bd = (tensor(pauli(1), pauli(1)) - 0.6 * tensor(pauli(2), pauli(2)) +
                            0.6 * tensor(pauli(3), pauli(3))) /
                           4.0;
  const Trajectory t = nmr_trajectory(DeviationMatrix(bd), p, default_time_grid(215.1, 20));
  EXPECT_EQ(t.unit, "eps2_over_ln2_bit");
  EXPECT_EQ(t.regime, Regime::sudden_change);
  EXPECT_EQ(t.times.size(), 21u);
  EXPECT_NEAR(t.times[1], 1.0 / (4 * 215.1), 1e-15);
  // T = diag(1, -0.6, 0.6): discord (1 + 0.36 + 0.36 - 1)/2.
  EXPECT_NEAR(t.reports.front().symmetric_discord, 0.36, kTolOpt);
}

TEST(TrajectoryCsv, HeaderAndRows) {
  const Trajectory t = pd_trajectory({1, -0.6, 0.6}, {0.0, 0.5});
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t_or_p,mi,cc,qd,regime,kappa_axis");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  EXPECT_EQ(rows, 2);
}
