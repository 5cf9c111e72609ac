// descent.hpp - projected gradient descent with Armijo backtracking and
// Barzilai-Borwein step seeding. Works on a flat dof vector; projection and
// evaluation are callbacks so sphere fields, Dirichlet problems and capacity
// potentials share one engine.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dplab/core.hpp"

namespace dplab {

struct DescentOptions {
  long max_iters = 2000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double grad_tol = 1e-8;     // on the caller-scaled gradient norm
  double energy_tol = 1e-12;  // relative decrease per accepted step
  int max_backtracks = 60;
  int small_steps_to_stop = 2;
};

struct DescentResult {
  long iterations = 0;
  double final_energy = 0.0;
  std::vector<double> energy_trace;  // initial value plus one per accepted step
  double grad_norm = 0.0;            // caller-scaled norm at exit
  std::string termination;           // grad_tol | energy_tol | max_iters | stall
};

struct DescentProblem {
  std::function<double(const std::vector<double>&)> energy;
  // gradient of energy at x, written to g (same size as x)
  std::function<void(const std::vector<double>&, std::vector<double>&)> gradient;
  // optional retraction applied after each trial step (e.g. renormalize);
  // also used to make the starting point feasible
  std::function<void(std::vector<double>&)> project;
  // optional scaling for reporting/termination (e.g. 1/h^n); applied to the
  // sup norm of the gradient
  double grad_scale = 1.0;
};

inline DescentResult descend(const DescentProblem& problem, std::vector<double>& x,
                             const DescentOptions& opts) {
  const size_t m = x.size();
  if (problem.project) problem.project(x);
  DescentResult res;
  double E = problem.energy(x);
  res.energy_trace.push_back(E);

  std::vector<double> g(m, 0.0), x_prev, g_prev, trial(m, 0.0);
  problem.gradient(x, g);

  auto scaled_sup = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s = std::max(s, std::abs(t));
    return s * problem.grad_scale;
  };

  int small_steps = 0;
  double step_seed = opts.step0;
  for (long it = 0; it < opts.max_iters; ++it) {
    res.grad_norm = scaled_sup(g);
    if (res.grad_norm <= opts.grad_tol) {
      res.termination = "grad_tol";
      break;
    }

    double g2 = 0.0;
    for (double t : g) g2 += t * t;
    if (g2 == 0.0) {
      res.termination = "grad_tol";
      break;
    }

    // BB1 step from the previous accepted pair, clamped
    double t_step = step_seed;
    if (!x_prev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (size_t i = 0; i < m; ++i) {
        const double s = x[i] - x_prev[i];
        const double y = g[i] - g_prev[i];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 1e-300) t_step = std::min(std::max(ss / sy, 1e-12), 1e12);
    }

    bool accepted = false;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      for (size_t i = 0; i < m; ++i) trial[i] = x[i] - t_step * g[i];
      if (problem.project) problem.project(trial);
      const double E_trial = problem.energy(trial);
      if (E_trial <= E - opts.armijo_c * t_step * g2) {
        x_prev = x;
        g_prev = g;
        x.swap(trial);
        const double decrease = E - E_trial;
        E = E_trial;
        res.energy_trace.push_back(E);
        ++res.iterations;
        problem.gradient(x, g);
        accepted = true;
        step_seed = t_step;
        if (decrease <= opts.energy_tol * std::max(1.0, std::abs(E))) {
          if (++small_steps >= opts.small_steps_to_stop) {
            res.termination = "energy_tol";
          }
        } else {
          small_steps = 0;
        }
        break;
      }
      t_step *= opts.armijo_shrink;
    }
    if (!accepted) {
      res.termination = "stall";  // reported, not a crash
      break;
    }
    if (!res.termination.empty()) break;
  }
  if (res.termination.empty()) res.termination = "max_iters";
  res.final_energy = E;
  res.grad_norm = scaled_sup(g);
  return res;
}

}  // namespace dplab
