#ifndef MORPHFLOW_TVL1_HPP
#define MORPHFLOW_TVL1_HPP

#include <vector>

#include "morphflow/geometry.hpp"
#include "morphflow/volume.hpp"

namespace morphflow {

/// Step sizes and weights of the primal-dual inner solver.
///
/// sigma_dual defaults to 1/(12 tau) so that tau * sigma * L^2 <= 1 with the
/// operator norm bound L^2 = 12 of the 3D gradient. Violating the bound is a
/// warning, not an error.
struct SolverParams {
  double tau = 0.25;
  double sigma_dual = 1.0 / 3.0;
  double lambda = 25.0;
  double theta = 0.2;
  int warps = 20;
  int inner_iters = 30;
  /// Selects the printed primal update (denominator 1 + tau*lambda, v
  /// unweighted) instead of the exact proximal map of |u-v|^2/(2 theta).
  bool legacy_primal = false;

  static SolverParams defaults() { return {}; }
  /// Emits a warning on stderr when tau*sigma*12 > 1.
  void check() const;
};

/// Frozen per-warp linearization: warped moving image, its lattice-aware
/// gradient, and the constant part of the residual
/// rho(v) = grad . v + rho_const.
struct WarpContext {
  Volume warped;
  VectorField grad_warped;
  std::vector<double> rho_const;
};

/// Per-displacement-component dual state; each site carries one 3-vector per
/// component, kept inside the unit ball.
struct DualField {
  LatticeDescriptor lattice;
  std::vector<double> p;  // layout: site-major, 3 components x 3 gradient dims

  DualField() = default;
  explicit DualField(const LatticeDescriptor& lat)
      : lattice(lat), p(static_cast<std::size_t>(lat.num_sites()) * 9, 0.0) {}
};

WarpContext build_warp_context(const Volume& fixed, const Volume& moving,
                               const DisplacementField& u0);

/// Three-case shrinkage of the linearized data term: closed-form minimizer of
/// |u - v|^2 / (2 theta) + lambda |rho(v)| along the image gradient.
DisplacementField threshold_step(const WarpContext& context,
                                 const DisplacementField& u, double lambda,
                                 double theta);

/// One primal-dual sweep of the TV denoising subproblem, per component:
/// dual ascent with unit-ball projection, exact prox of |u-v|^2/(2 theta),
/// extrapolation factor 1. `u_bar` is updated in place alongside.
void tv_denoise_step(DisplacementField& u, DisplacementField& u_bar,
                     const DisplacementField& v, DualField& dual,
                     const LatticeOperators& ops, const SolverParams& params);

/// Energy and iteration trace of one single-level solve.
struct LevelTrace {
  std::vector<double> warp_energies;  // objective after each warp
};

/// Warping loop around the threshold/denoise alternation. The dual state is
/// zero-initialized at entry and persists across warps.
DisplacementField solve_level(const Volume& fixed, const Volume& moving,
                              const DisplacementField& u_init,
                              const SolverParams& params,
                              LevelTrace* trace = nullptr);

/// Discrete objective sum_c |grad u_c| + lambda sum |rho(u)| for the trace.
double flow_energy(const WarpContext& context, const DisplacementField& u,
                   const LatticeOperators& ops, double lambda);

}  // namespace morphflow

#endif  // MORPHFLOW_TVL1_HPP
