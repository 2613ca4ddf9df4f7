#include "morphflow/morphflow.hpp"

#include <chrono>

#include "morphflow/errors.hpp"

namespace morphflow {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

DisplacementField solve_stage(const Volume& fixed, const Volume& moving,
                              const DisplacementField& u_init,
                              const SolverParams& params, RunTrace* trace) {
  const auto start = Clock::now();
  LevelTrace level_trace;
  DisplacementField u =
      solve_level(fixed, moving, u_init, params, trace ? &level_trace : nullptr);
  if (trace) {
    StageRecord rec;
    rec.level = fixed.lattice.level;
    rec.lattice_kind = fixed.lattice.kind;
    rec.extents = fixed.lattice.extents;
    if (!level_trace.warp_energies.empty()) {
      rec.energy_first = level_trace.warp_energies.front();
      rec.energy_last = level_trace.warp_energies.back();
    }
    rec.wall_ms = ms_since(start);
    trace->stages.push_back(rec);
  }
  return u;
}

}  // namespace

void MorphFlowConfig::check() const {
  if (l_start < 0 || l_end < 0 || l_end > l_start) {
    throw ValidationError("require 0 <= l_end <= l_start");
  }
  if (l_start % 3 != 0 || l_end % 3 != 0) {
    throw ValidationError("l_start and l_end must be multiples of 3");
  }
  solver.check();
}

std::string to_string(PyramidKind kind) {
  switch (kind) {
    case PyramidKind::Morph: return "morph";
    case PyramidKind::Gauss: return "gauss";
    case PyramidKind::Haar: return "haar";
  }
  return "unknown";
}

PyramidKind pyramid_kind_from_string(const std::string& name) {
  if (name == "morph") return PyramidKind::Morph;
  if (name == "gauss") return PyramidKind::Gauss;
  if (name == "haar") return PyramidKind::Haar;
  throw ValidationError("unknown pyramid kind: " + name);
}

DisplacementField run(const Volume& fixed, const Volume& moving,
                      const MorphFlowConfig& config, RunTrace* trace) {
  config.check();
  if (fixed.lattice.kind != LatticeKind::Cartesian ||
      fixed.lattice != moving.lattice) {
    throw ValidationError("run: inputs must be Cartesian volumes of equal extents");
  }

  const WaveletDecomposition deco_fixed = analyze(fixed, config.l_start, config.mode);
  const WaveletDecomposition deco_moving =
      analyze(moving, config.l_start, config.mode);

  Volume stage_fixed = deco_fixed.coarsest;
  Volume stage_moving = deco_moving.coarsest;
  DisplacementField u(stage_fixed.lattice);

  const int stages_down = config.l_start - config.l_end;
  for (int d = 0; d < stages_down; ++d) {
    u = solve_stage(stage_fixed, stage_moving, u, config.solver, trace);
    const DetailSet& step = deco_fixed.details[static_cast<std::size_t>(d)];
    u = prolong_zero_detail(u, step, config.mode);
    stage_fixed = synthesize_step(stage_fixed, step, config.mode);
    stage_moving = synthesize_step(
        stage_moving, deco_moving.details[static_cast<std::size_t>(d)], config.mode);
  }
  return solve_stage(stage_fixed, stage_moving, u, config.solver, trace);
}

DisplacementField run_baseline(const Volume& fixed, const Volume& moving,
                               PyramidKind pyramid, const MorphFlowConfig& config,
                               RunTrace* trace) {
  if (pyramid == PyramidKind::Morph) return run(fixed, moving, config, trace);
  config.check();
  if (fixed.lattice.kind != LatticeKind::Cartesian ||
      fixed.lattice != moving.lattice) {
    throw ValidationError(
        "run_baseline: inputs must be Cartesian volumes of equal extents");
  }

  const int levels = config.l_start / 3;
  const int end_level = config.l_end / 3;
  std::vector<Volume> pyr_fixed, pyr_moving;
  if (pyramid == PyramidKind::Gauss) {
    pyr_fixed = gaussian_pyramid(fixed, 1.0, levels);
    pyr_moving = gaussian_pyramid(moving, 1.0, levels);
  } else {
    pyr_fixed = haar_pyramid(fixed, levels);
    pyr_moving = haar_pyramid(moving, levels);
  }

  DisplacementField u(pyr_fixed[static_cast<std::size_t>(levels)].lattice);
  for (int lev = levels; lev > end_level; --lev) {
    u = solve_stage(pyr_fixed[static_cast<std::size_t>(lev)],
                    pyr_moving[static_cast<std::size_t>(lev)], u, config.solver,
                    trace);
    // Trilinear upsampling; values are physical units and stay unscaled.
    const LatticeDescriptor& fine_lat =
        pyr_fixed[static_cast<std::size_t>(lev - 1)].lattice;
    DisplacementField fine(fine_lat);
    const std::vector<double>* src[3] = {&u.u, &u.v, &u.w};
    std::vector<double>* dst[3] = {&fine.u, &fine.v, &fine.w};
    for (int c = 0; c < 3; ++c) {
      Volume comp(u.lattice);
      comp.data = *src[c];
      for (std::int64_t idx = 0; idx < fine_lat.num_sites(); ++idx) {
        const int ni = fine_lat.extents[0], nj = fine_lat.extents[1];
        const int i = static_cast<int>(idx % ni);
        const int j = static_cast<int>((idx / ni) % nj);
        const int k = static_cast<int>(idx / (static_cast<std::int64_t>(ni) * nj));
        (*dst[c])[static_cast<std::size_t>(idx)] =
            interpolate(comp, site_position(fine_lat, {i, j, k}));
      }
    }
    u = std::move(fine);
  }
  return solve_stage(pyr_fixed[static_cast<std::size_t>(end_level)],
                     pyr_moving[static_cast<std::size_t>(end_level)], u,
                     config.solver, trace);
}

}  // namespace morphflow
