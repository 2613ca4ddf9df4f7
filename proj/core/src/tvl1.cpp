#include "morphflow/tvl1.hpp"

#include <cmath>
#include <iostream>

#include "morphflow/errors.hpp"
#include "morphflow/parallel.hpp"

namespace morphflow {

void SolverParams::check() const {
  if (tau <= 0 || sigma_dual <= 0 || lambda <= 0 || theta <= 0 || warps < 1 ||
      inner_iters < 1) {
    throw ValidationError("solver parameters must be positive");
  }
  if (tau * sigma_dual * 12.0 > 1.0 + 1e-12) {
    std::cerr << "warning: tau*sigma*12 = " << tau * sigma_dual * 12.0
              << " exceeds the step-size bound; convergence is not guaranteed\n";
  }
}

WarpContext build_warp_context(const Volume& fixed, const Volume& moving,
                               const DisplacementField& u0) {
  if (fixed.lattice != moving.lattice || fixed.lattice != u0.lattice) {
    throw ValidationError("build_warp_context: lattice mismatch");
  }
  WarpContext ctx;
  ctx.warped = warp(moving, u0);
  ctx.grad_warped = gradient(ctx.warped);
  const std::int64_t n = fixed.lattice.num_sites();
  ctx.rho_const.resize(static_cast<std::size_t>(n));
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const auto s = static_cast<std::size_t>(idx);
      ctx.rho_const[s] = ctx.warped.data[s] -
                         ctx.grad_warped.at(idx).dot(u0.at(idx)) - fixed.data[s];
    }
  });
  return ctx;
}

DisplacementField threshold_step(const WarpContext& context,
                                 const DisplacementField& u, double lambda,
                                 double theta) {
  DisplacementField v(u.lattice);
  const double lt = lambda * theta;
  parallel_for(0, u.lattice.num_sites(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const Vec3 g = context.grad_warped.at(idx);
      const Vec3 ui = u.at(idx);
      const double g2 = g.dot(g);
      if (g2 == 0.0) {
        v.set(idx, ui);
        continue;
      }
      const double rho = g.dot(ui) + context.rho_const[static_cast<std::size_t>(idx)];
      if (rho < -lt * g2) {
        v.set(idx, ui + g * lt);
      } else if (rho > lt * g2) {
        v.set(idx, ui - g * lt);
      } else {
        v.set(idx, ui - g * (rho / g2));
      }
    }
  });
  return v;
}

void tv_denoise_step(DisplacementField& u, DisplacementField& u_bar,
                     const DisplacementField& v, DualField& dual,
                     const LatticeOperators& ops, const SolverParams& params) {
  const std::int64_t n = u.lattice.num_sites();
  const double sigma = params.sigma_dual;
  const double tau = params.tau;

  VectorField grad_comp(u.lattice);
  std::vector<double> div_comp;
  const std::vector<double>* bar[3] = {&u_bar.u, &u_bar.v, &u_bar.w};
  const std::vector<double>* vv[3] = {&v.u, &v.v, &v.w};
  std::vector<double>* uu[3] = {&u.u, &u.v, &u.w};
  std::vector<double>* ub[3] = {&u_bar.u, &u_bar.v, &u_bar.w};

  for (int c = 0; c < 3; ++c) {
    // Dual ascent with pointwise projection onto the unit ball.
    ops.gradient(*bar[c], grad_comp);
    parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t idx = lo; idx < hi; ++idx) {
        double* pc = &dual.p[static_cast<std::size_t>(idx) * 9 +
                             static_cast<std::size_t>(c) * 3];
        const Vec3 g = grad_comp.at(idx);
        const double px = pc[0] + sigma * g.x;
        const double py = pc[1] + sigma * g.y;
        const double pz = pc[2] + sigma * g.z;
        const double scale = std::max(1.0, std::sqrt(px * px + py * py + pz * pz));
        pc[0] = px / scale;
        pc[1] = py / scale;
        pc[2] = pz / scale;
      }
    });

    VectorField p_comp(u.lattice);
    parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t idx = lo; idx < hi; ++idx) {
        const double* pc = &dual.p[static_cast<std::size_t>(idx) * 9 +
                                   static_cast<std::size_t>(c) * 3];
        p_comp.set(idx, {pc[0], pc[1], pc[2]});
      }
    });
    ops.divergence(p_comp, div_comp);

    parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t idx = lo; idx < hi; ++idx) {
        const auto s = static_cast<std::size_t>(idx);
        const double prev = (*uu[c])[s];
        double next;
        if (params.legacy_primal) {
          next = (prev + tau * div_comp[s] + (*vv[c])[s]) /
                 (1.0 + tau * params.lambda);
        } else {
          // Exact prox of |u - v|^2 / (2 theta).
          next = (prev + tau * div_comp[s] + (tau / params.theta) * (*vv[c])[s]) /
                 (1.0 + tau / params.theta);
        }
        (*uu[c])[s] = next;
        (*ub[c])[s] = 2.0 * next - prev;
      }
    });
  }
}

double flow_energy(const WarpContext& context, const DisplacementField& u,
                   const LatticeOperators& ops, double lambda) {
  const std::int64_t n = u.lattice.num_sites();
  double energy = 0.0;
  VectorField grad_comp(u.lattice);
  const std::vector<double>* uu[3] = {&u.u, &u.v, &u.w};
  for (int c = 0; c < 3; ++c) {
    ops.gradient(*uu[c], grad_comp);
    for (std::int64_t idx = 0; idx < n; ++idx) {
      energy += grad_comp.at(idx).norm();
    }
  }
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const double rho = context.grad_warped.at(idx).dot(u.at(idx)) +
                       context.rho_const[static_cast<std::size_t>(idx)];
    energy += lambda * std::abs(rho);
  }
  return energy;
}

DisplacementField solve_level(const Volume& fixed, const Volume& moving,
                              const DisplacementField& u_init,
                              const SolverParams& params, LevelTrace* trace) {
  if (fixed.lattice != moving.lattice || fixed.lattice != u_init.lattice) {
    throw ValidationError("solve_level: lattice mismatch");
  }
  params.check();

  const LatticeOperators ops(fixed.lattice);
  DisplacementField u = u_init;
  DisplacementField u_bar = u;
  DualField dual(fixed.lattice);

  for (int j = 0; j < params.warps; ++j) {
    const WarpContext ctx = build_warp_context(fixed, moving, u);
    for (int k = 0; k < params.inner_iters; ++k) {
      const DisplacementField v =
          threshold_step(ctx, u, params.lambda, params.theta);
      tv_denoise_step(u, u_bar, v, dual, ops, params);
    }
    for (const auto* comp : {&u.u, &u.v, &u.w}) {
      for (double x : *comp) {
        if (!std::isfinite(x)) {
          throw ValidationError("solve_level: non-finite displacement after warp " +
                                std::to_string(j + 1));
        }
      }
    }
    if (trace) {
      trace->warp_energies.push_back(flow_energy(ctx, u, ops, params.lambda));
    }
  }
  return u;
}

}  // namespace morphflow
