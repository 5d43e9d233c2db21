#include "qdlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <omp.h>

namespace qdlab {

AngleGrid::AngleGrid(int qubits, int n_theta, int n_phi, double phi_offset)
    : qubits_(qubits), n_theta_(n_theta), n_phi_(n_phi), phi_offset_(phi_offset) {
  if (qubits < 1 || n_theta < 2 || n_phi < 1) {
    throw std::invalid_argument("AngleGrid: need qubits >= 1, n_theta >= 2, n_phi >= 1");
  }
  theta_step_ = (std::numbers::pi / 2.0) / (n_theta - 1);
  phi_step_ = 2.0 * std::numbers::pi / n_phi;
  const std::size_t per_qubit = static_cast<std::size_t>(n_theta) * n_phi;
  size_ = 1;
  for (int q = 0; q < qubits; ++q) size_ *= per_qubit;
}

void AngleGrid::point(std::size_t index, std::span<double> out) const {
  // Last qubit varies fastest; phi fastest within a qubit.
  for (int q = qubits_ - 1; q >= 0; --q) {
    const std::size_t ip = index % n_phi_;
    index /= n_phi_;
    const std::size_t it = index % n_theta_;
    index /= n_theta_;
    out[2 * q] = it * theta_step_;
    out[2 * q + 1] = phi_offset_ + ip * phi_step_;
  }
}

double seeded_phi_offset(std::uint64_t seed, int n_phi) {
  if (seed == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) * 2.0 * std::numbers::pi / n_phi;
}

namespace {

bool better(double v, std::size_t i, const GridBest& than) {
  return v > than.value || (v == than.value && i < than.index);
}

}  // namespace

GridBest grid_search_serial(const AngleGrid& grid, const Objective& f) {
  GridBest best;
  std::vector<double> pt(static_cast<std::size_t>(grid.dims()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, pt);
    const double v = f(pt);
    if (better(v, i, best)) best = {v, i};
  }
  return best;
}

GridBest grid_search_parallel(const AngleGrid& grid, const Objective& f) {
  GridBest best;
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel
  {
    GridBest local;
    std::vector<double> pt(static_cast<std::size_t>(grid.dims()));
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      grid.point(idx, pt);
      const double v = f(pt);
      if (better(v, idx, local)) local = {v, idx};
    }
#pragma omp critical(qdlab_grid_reduce)
    {
      if (better(local.value, local.index, best)) best = local;
    }
  }
  return best;
}

NelderMeadResult nelder_mead_maximize(const Objective& f, std::vector<double> start,
                                      std::span<const double> step, int budget,
                                      double tol) {
  const std::size_t n = start.size();
  if (step.size() != n || n == 0) {
    throw std::invalid_argument("nelder_mead: step must match start dimension");
  }
  NelderMeadResult res;
  // Minimize g = -f internally.
  auto g = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return -f(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += step[k];
  std::vector<double> fv(n + 1);
  for (std::size_t k = 0; k <= n; ++k) fv[k] = g(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      s2[k] = simplex[order[k]];
      f2[k] = fv[order[k]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t c = 0; c < n; ++c) {
        d = std::max(d, std::abs(simplex[k][c] - simplex[0][c]));
      }
    }
    return d;
  };
  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b,
                    double t) {
    // a + t (b - a)
    std::vector<double> out(n);
    for (std::size_t c = 0; c < n; ++c) out[c] = a[c] + t * (b[c] - a[c]);
    return out;
  };

  sort_simplex();
  while (true) {
    if (diameter() <= tol) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= budget) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[k][c] / n;
    }
    const std::vector<double> xr = affine(centroid, simplex[n], -1.0);
    const double fr = g(xr);
    if (fr < fv[0]) {
      if (res.evaluations >= budget) {
        simplex[n] = xr;
        fv[n] = fr;
      } else {
        const std::vector<double> xe = affine(centroid, simplex[n], -2.0);
        const double fe = g(xe);
        if (fe < fr) {
          simplex[n] = xe;
          fv[n] = fe;
        } else {
          simplex[n] = xr;
          fv[n] = fr;
        }
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      if (res.evaluations >= budget) break;
      const bool outside = fr < fv[n];
      const std::vector<double> xc =
          outside ? affine(centroid, simplex[n], -0.5) : affine(centroid, simplex[n], 0.5);
      const double fc = g(xc);
      if (fc < (outside ? fr : fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n && res.evaluations < budget; ++k) {
          simplex[k] = affine(simplex[0], simplex[k], 0.5);
          fv[k] = g(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  res.x = simplex[0];
  res.value = -fv[0];
  return res;
}

MaximizeResult maximize_over_directions(const Objective& f, int qubits,
                                        const OptimizerConfig& config) {
  if (config.refine_budget < 0 || !(config.simplex_tol > 0.0)) {
    throw std::invalid_argument("OptimizerConfig: invalid refinement settings");
  }
  const AngleGrid grid(qubits, config.grid_theta, config.grid_phi,
                       seeded_phi_offset(config.seed, config.grid_phi));
  const GridBest best =
      config.parallel ? grid_search_parallel(grid, f) : grid_search_serial(grid, f);

  std::vector<double> start(static_cast<std::size_t>(grid.dims()));
  grid.point(best.index, start);

  MaximizeResult out;
  out.evaluations = static_cast<long>(grid.size());
  out.x = start;
  out.value = best.value;
  if (config.refine_budget == 0) {
    out.converged = false;
    return out;
  }
  std::vector<double> step(start.size());
  for (std::size_t k = 0; k < step.size(); ++k) {
    step[k] = 0.5 * (k % 2 == 0 ? grid.theta_step() : grid.phi_step());
  }
  NelderMeadResult nm =
      nelder_mead_maximize(f, start, step, config.refine_budget, config.simplex_tol);
  out.evaluations += nm.evaluations;
  out.converged = nm.converged;
  if (nm.value >= out.value) {
    out.value = nm.value;
    out.x = std::move(nm.x);
  }
  return out;
}

int configure_threads_from_env() {
  const char* env = std::getenv("QDLAB_THREADS");
  if (env == nullptr) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) return 0;
  omp_set_num_threads(static_cast<int>(n));
  return static_cast<int>(n);
}

}  // namespace qdlab
