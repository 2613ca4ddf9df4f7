#include <doctest.h>

#include <cmath>
#include <random>

#include "morphflow/errors.hpp"
#include "morphflow/tvl1.hpp"

#include "helpers.hpp"

using namespace morphflow;

namespace {

/// Data-term objective of the pointwise subproblem at one site.
double point_objective(const Vec3& v, const Vec3& u, const Vec3& g, double c,
                       double lambda, double theta) {
  const Vec3 d = v - u;
  return d.dot(d) / (2.0 * theta) + lambda * std::abs(g.dot(v) + c);
}

}  // namespace

TEST_CASE("threshold_step matches a dense line-search minimizer") {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double lambda = 25.0, theta = 0.2;

  const LatticeDescriptor lat = mftest::cart_lattice(1, 1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 g{dist(rng), dist(rng), dist(rng)};
    const Vec3 u{dist(rng) * 3, dist(rng) * 3, dist(rng) * 3};
    const double c = dist(rng);

    WarpContext ctx;
    ctx.warped = Volume(lat);
    ctx.grad_warped = VectorField(lat);
    ctx.grad_warped.set(0, g);
    ctx.rho_const = {c};
    DisplacementField uf(lat);
    uf.set(0, u);

    const DisplacementField vf = threshold_step(ctx, uf, lambda, theta);
    const double got = point_objective(vf.at(0), u, g, c, lambda, theta);

    // The minimizer lies on the line v = u - t g; search it densely.
    double best = point_objective(u, u, g, c, lambda, theta);
    const double g2 = g.dot(g);
    if (g2 > 0) {
      const double t_max = 2.0 * (lambda * theta + std::abs(g.dot(u) + c) / g2);
      for (int s = 0; s <= 10000; ++s) {
        const double t = -t_max + 2.0 * t_max * s / 10000.0;
        best = std::min(best,
                        point_objective(u - g * t, u, g, c, lambda, theta));
      }
    }
    CHECK(got <= best + 1e-4);
  }
}

TEST_CASE("tv denoising fixed point: u = v constant is stationary") {
  const LatticeDescriptor lat = mftest::cart_lattice(6, 6, 6);
  const LatticeOperators ops(lat);
  SolverParams params;
  DisplacementField u(lat), v(lat);
  for (std::int64_t idx = 0; idx < lat.num_sites(); ++idx) {
    u.set(idx, {0.7, -0.2, 1.1});
    v.set(idx, {0.7, -0.2, 1.1});
  }
  DisplacementField u_bar = u;
  DualField dual(lat);
  for (int it = 0; it < 5; ++it) {
    tv_denoise_step(u, u_bar, v, dual, ops, params);
  }
  for (std::int64_t idx = 0; idx < lat.num_sites(); ++idx) {
    CHECK((u.at(idx) - Vec3{0.7, -0.2, 1.1}).norm() <= 1e-12);
  }
}

TEST_CASE("tv denoising converges to the prox objective minimum on 1D data") {
  // Piecewise signal along x; the denoised field must reach a lower value of
  // F(u) = sum |grad u| + |u - v|^2 / (2 theta) than the noisy input, and
  // repeated sweeps must settle (Cauchy in the iterates).
  const LatticeDescriptor lat = mftest::cart_lattice(16, 4, 4);
  const LatticeOperators ops(lat);
  SolverParams params;
  std::mt19937_64 rng(203);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);

  DisplacementField v(lat);
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 16; ++i) {
        const double base = i < 8 ? 0.0 : 2.0;
        v.set(lat.linear(i, j, k), {base + noise(rng), 0.0, 0.0});
      }
    }
  }
  const auto objective = [&](const DisplacementField& u) {
    VectorField grad(lat);
    ops.gradient(u.u, grad);
    double e = 0.0;
    for (std::int64_t idx = 0; idx < lat.num_sites(); ++idx) {
      e += grad.at(idx).norm();
      const double d = u.u[static_cast<std::size_t>(idx)] -
                       v.u[static_cast<std::size_t>(idx)];
      e += d * d / (2.0 * params.theta);
    }
    return e;
  };

  DisplacementField u = v;
  DisplacementField u_bar = u;
  DualField dual(lat);
  const double e0 = objective(u);
  for (int it = 0; it < 3000; ++it) {
    tv_denoise_step(u, u_bar, v, dual, ops, params);
  }
  const double e1 = objective(u);
  DisplacementField u_prev = u;
  for (int it = 0; it < 200; ++it) {
    tv_denoise_step(u, u_bar, v, dual, ops, params);
  }
  double drift = 0.0;
  for (std::size_t s = 0; s < u.u.size(); ++s) {
    drift = std::max(drift, std::abs(u.u[s] - u_prev.u[s]));
  }
  CHECK(e1 < e0);
  CHECK(drift <= 1e-3);
}

TEST_CASE("identical inputs give an exactly zero field from solve_level") {
  std::mt19937_64 rng(207);
  const Volume vol = mftest::random_volume(8, 8, 8, rng);
  SolverParams params;
  params.warps = 3;
  params.inner_iters = 10;
  const DisplacementField u =
      solve_level(vol, vol, DisplacementField(vol.lattice), params);
  for (std::int64_t idx = 0; idx < vol.lattice.num_sites(); ++idx) {
    CHECK(u.at(idx) == Vec3{0.0, 0.0, 0.0});
  }
}

TEST_CASE("per-warp energies are non-increasing up to relinearization slack") {
  std::mt19937_64 rng(211);
  // Smooth blob pair, small shift.
  const LatticeDescriptor lat = mftest::cart_lattice(16, 16, 16);
  Volume fixed(lat), moving(lat);
  for (int k = 0; k < 16; ++k) {
    for (int j = 0; j < 16; ++j) {
      for (int i = 0; i < 16; ++i) {
        const auto blob = [](double x, double y, double z) {
          const double r2 = (x - 8) * (x - 8) + (y - 8) * (y - 8) +
                            (z - 8) * (z - 8);
          return std::exp(-r2 / 18.0);
        };
        fixed.at(i, j, k) = blob(i, j, k);
        moving.at(i, j, k) = blob(i - 1.0, j, k);
      }
    }
  }
  SolverParams params;
  params.warps = 8;
  params.inner_iters = 30;
  LevelTrace trace;
  solve_level(fixed, moving, DisplacementField(lat), params, &trace);
  REQUIRE(trace.warp_energies.size() == 8);
  for (std::size_t w = 1; w < trace.warp_energies.size(); ++w) {
    CHECK(trace.warp_energies[w] <=
          trace.warp_energies[w - 1] * 1.05 + 1e-6);
  }
  CHECK(trace.warp_energies.back() < trace.warp_energies.front());
}

TEST_CASE("solver parameter validation") {
  SolverParams params;
  params.tau = 0.0;
  CHECK_THROWS_AS(params.check(), ValidationError);
  params = SolverParams();
  params.warps = 0;
  CHECK_THROWS_AS(params.check(), ValidationError);
}
