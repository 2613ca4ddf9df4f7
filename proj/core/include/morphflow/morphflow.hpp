#ifndef MORPHFLOW_MORPHFLOW_HPP
#define MORPHFLOW_MORPHFLOW_HPP

#include <array>
#include <string>
#include <vector>

#include "morphflow/lifting.hpp"
#include "morphflow/tvl1.hpp"
#include "morphflow/volume.hpp"

namespace morphflow {

/// Coarse-to-fine driver configuration. Start and end depths must be
/// multiples of 3 so every stage boundary is a cubic voxel setting.
struct MorphFlowConfig {
  int l_start = 12;
  int l_end = 0;
  SolverParams solver;
  LiftingMode mode = LiftingMode::Min;

  void check() const;
};

enum class PyramidKind { Morph, Gauss, Haar };

std::string to_string(PyramidKind kind);
PyramidKind pyramid_kind_from_string(const std::string& name);

struct StageRecord {
  int level = 0;  // lifting depth from the finest grid
  LatticeKind lattice_kind = LatticeKind::Cartesian;
  std::array<int, 3> extents{0, 0, 0};
  double energy_first = 0.0;
  double energy_last = 0.0;
  double wall_ms = 0.0;
};

struct RunTrace {
  std::vector<StageRecord> stages;
};

/// Full coarse-to-fine estimation on the morphological decomposition:
/// decompose both volumes to depth l_start, solve on the coarsest cubic grid,
/// then per 3-level cycle solve on the cuboidal and dodecahedral grids with
/// zero-detail prolongation between stages, finishing with one solve on the
/// cubic grid at depth l_end. Displacements are in finest-voxel units
/// throughout; prolongation never rescales values.
DisplacementField run(const Volume& fixed, const Volume& moving,
                      const MorphFlowConfig& config, RunTrace* trace = nullptr);

/// Same driver on a factor-2 Cartesian pyramid (l_start/3 levels) with
/// trilinear upsampling of the field between levels.
DisplacementField run_baseline(const Volume& fixed, const Volume& moving,
                               PyramidKind pyramid,
                               const MorphFlowConfig& config,
                               RunTrace* trace = nullptr);

}  // namespace morphflow

#endif  // MORPHFLOW_MORPHFLOW_HPP
