#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace qdlab {

/// Objective over a small vector of angles. Must be safe to call
/// concurrently from several threads.
using Objective = std::function<double(std::span<const double>)>;

/// Knobs for the grid + Nelder-Mead maximizer used for measurement-basis
/// optimization.
struct OptimizerConfig {
  int grid_theta = 24;        // points per theta axis, spanning [0, pi/2]
  int grid_phi = 24;          // points per phi axis, spanning [0, 2 pi)
  int refine_budget = 400;    // Nelder-Mead objective evaluations
  double simplex_tol = 1e-8;  // simplex diameter (radians) for convergence
  std::uint64_t seed = 0;     // 0: phi grid starts at 0; otherwise a seeded offset
  bool parallel = true;       // OpenMP grid kernel vs. serial reference
};

/// Tensor grid of (theta, phi) pairs, one pair per measured qubit. A point
/// with index i has coordinates (theta_0, phi_0, theta_1, phi_1, ...).
class AngleGrid {
 public:
  AngleGrid(int qubits, int n_theta, int n_phi, double phi_offset = 0.0);

  std::size_t size() const { return size_; }
  int dims() const { return 2 * qubits_; }
  double theta_step() const { return theta_step_; }
  double phi_step() const { return phi_step_; }

  /// Writes the coordinates of point `index` into `out` (length dims()).
  void point(std::size_t index, std::span<double> out) const;

 private:
  int qubits_;
  int n_theta_;
  int n_phi_;
  double phi_offset_;
  double theta_step_;
  double phi_step_;
  std::size_t size_;
};

/// Phi offset derived from OptimizerConfig::seed, in [0, phi_step).
double seeded_phi_offset(std::uint64_t seed, int n_phi);

struct GridBest {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

/// Exhaustive maximization over the grid. Ties go to the lowest index, so
/// both kernels return identical results.
GridBest grid_search_serial(const AngleGrid& grid, const Objective& f);
GridBest grid_search_parallel(const AngleGrid& grid, const Objective& f);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Maximizes f starting from a simplex around `start` with per-coordinate
/// edge `step`. Stops when the simplex diameter (max-norm distance from the
/// best vertex) drops to `tol`, or when `budget` evaluations are spent.
NelderMeadResult nelder_mead_maximize(const Objective& f,
                                      std::vector<double> start,
                                      std::span<const double> step, int budget,
                                      double tol);

struct MaximizeResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Grid search over `qubits` measurement directions followed by Nelder-Mead
/// refinement from the best cell.
MaximizeResult maximize_over_directions(const Objective& f, int qubits,
                                        const OptimizerConfig& config);

/// Caps OpenMP threads from the QDLAB_THREADS environment variable when set.
/// Returns the cap applied, or 0 when the variable is absent or invalid.
int configure_threads_from_env();

}  // namespace qdlab
