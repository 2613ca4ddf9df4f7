#include <doctest.h>

#include <cmath>

#include "morphflow/errors.hpp"
#include "morphflow/metrics.hpp"
#include "morphflow/morphflow.hpp"
#include "morphflow/synth.hpp"

#include "helpers.hpp"

using namespace morphflow;

namespace {

double mean_interior_epe(const DisplacementField& got,
                         const DisplacementField& truth, int margin) {
  const auto& lat = got.lattice;
  double sum = 0.0;
  long count = 0;
  for (int k = margin; k < lat.extents[2] - margin; ++k) {
    for (int j = margin; j < lat.extents[1] - margin; ++j) {
      for (int i = margin; i < lat.extents[0] - margin; ++i) {
        const std::int64_t idx = lat.linear(i, j, k);
        sum += (got.at(idx) - truth.at(idx)).norm();
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace

TEST_CASE("config validation") {
  MorphFlowConfig config;
  config.l_start = 4;
  CHECK_THROWS_AS(config.check(), ValidationError);
  config.l_start = 6;
  config.l_end = 9;
  CHECK_THROWS_AS(config.check(), ValidationError);
}

TEST_CASE("identical inputs give an exactly zero field through the driver") {
  PhantomSpec spec;
  spec.seed = 21;
  const Volume vol = make_phantom(spec);
  MorphFlowConfig config;
  config.l_start = 6;
  config.solver.warps = 3;
  config.solver.inner_iters = 5;
  for (LiftingMode mode : {LiftingMode::Min, LiftingMode::Max}) {
    config.mode = mode;
    const DisplacementField u = run(vol, vol, config);
    CHECK(u.lattice == vol.lattice);
    for (std::int64_t idx = 0; idx < u.lattice.num_sites(); ++idx) {
      CHECK(u.at(idx) == Vec3{0.0, 0.0, 0.0});
    }
  }
}

TEST_CASE("driver recovers a unit shift on a 32^3 phantom") {
  PhantomSpec spec;
  spec.seed = 23;
  spec.grain_count = 12;
  const Volume fixed = make_phantom(spec);
  const auto [moving, truth] = deform_translate(fixed, {1.0, 0.0, 0.0});

  MorphFlowConfig config;
  config.l_start = 6;
  RunTrace trace;
  const DisplacementField u = run(fixed, moving, config, &trace);
  CHECK(mean_interior_epe(u, truth, 4) < 0.2);
  // One stage per level from depth 6 down to 0.
  CHECK(trace.stages.size() == 7);
  CHECK(trace.stages.front().extents == std::array<int, 3>{8, 8, 8});
  CHECK(trace.stages.back().extents == std::array<int, 3>{32, 32, 32});

  // The estimated field reduces the residual substantially.
  const double r0 = rmse(fixed, moving);
  const double r1 = rmse(fixed, warp(moving, u));
  CHECK(r1 < 0.9 * r0);
}

TEST_CASE("baseline pyramids run and recover the same unit shift coarsely") {
  PhantomSpec spec;
  spec.seed = 25;
  spec.grain_count = 12;
  const Volume fixed = make_phantom(spec);
  const auto [moving, truth] = deform_translate(fixed, {1.0, 0.0, 0.0});

  MorphFlowConfig config;
  config.l_start = 6;
  for (PyramidKind kind : {PyramidKind::Gauss, PyramidKind::Haar}) {
    RunTrace trace;
    const DisplacementField u = run_baseline(fixed, moving, kind, config, &trace);
    CHECK(u.lattice.extents == fixed.lattice.extents);
    CHECK(trace.stages.size() == 3);
    CHECK(mean_interior_epe(u, truth, 4) < 0.3);
  }
}

TEST_CASE("run rejects mismatched or non-cubic inputs") {
  Volume a(mftest::cart_lattice(8, 8, 8), 0.1);
  Volume b(mftest::cart_lattice(8, 8, 4), 0.1);
  MorphFlowConfig config;
  config.l_start = 3;
  CHECK_THROWS_AS(run(a, b, config), ValidationError);
}
