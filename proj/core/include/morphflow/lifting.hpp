#ifndef MORPHFLOW_LIFTING_HPP
#define MORPHFLOW_LIFTING_HPP

#include <array>
#include <string>
#include <vector>

#include "morphflow/volume.hpp"

namespace morphflow {

/// Min-lifting is the exact dual of Max-lifting: apply Max to the negated
/// volume and negate back.
enum class LiftingMode { Max, Min };

std::string to_string(LiftingMode mode);
LiftingMode lifting_mode_from_string(const std::string& name);

/// The three-step cycle Cartesian -> Fcc -> TiltedCuboid -> Cartesian(2s).
/// HV removes the odd-parity (i+j+k) class, D1 the odd-z class of the Fcc
/// grid, D2 the odd-x class of the cuboid grid.
enum class LiftStep { HV, D1, D2 };

std::string to_string(LiftStep step);

/// Detail coefficients of one lifting step plus the structural data needed to
/// invert it: the (padded) fine lattice the step consumed and the pre-padding
/// extents for crop-back. Coefficients are stored densely, one per removed
/// point, in the removed class's own parity-interleaved layout.
struct DetailSet {
  LiftStep step = LiftStep::HV;
  LatticeDescriptor removed_lattice;
  std::vector<double> coefficients;
  LatticeDescriptor fine_lattice;
  std::array<int, 3> crop_extents{0, 0, 0};
};

struct StepResult {
  Volume approx;
  DetailSet details;
};

/// Cartesian -> Fcc. Prediction over the <=6 in-bounds orthogonal retained
/// neighbors; update by max{0, max gamma} over adjacent removed points (Min
/// mode: min{0, min gamma}).
StepResult hv_analyze(const Volume& input, LiftingMode mode);

/// Fcc -> TiltedCuboid. Prediction over the 8 retained nearest neighbors at
/// physical offsets {(+-1,0,+-1),(0,+-1,+-1)} * s.
StepResult d1_analyze(const Volume& input, LiftingMode mode);

/// TiltedCuboid -> Cartesian with doubled spacing. Prediction over the 4
/// retained neighbors at physical offsets {(+-1,+-1,0)} * s.
StepResult d2_analyze(const Volume& input, LiftingMode mode);

/// Exact inverse of one analysis step: subtract the update, then restore the
/// removed points as gamma + prediction; crops the step's padding.
Volume synthesize_step(const Volume& approx, const DetailSet& details,
                       LiftingMode mode);

/// Multi-level decomposition; every group of 3 levels applies HV, D1, D2 in
/// that order. Details are ordered coarsest-first (finest-last).
struct WaveletDecomposition {
  LiftingMode mode = LiftingMode::Min;
  Volume coarsest;
  std::vector<DetailSet> details;
  LatticeDescriptor finest_lattice;
};

WaveletDecomposition analyze(const Volume& input, int levels, LiftingMode mode);

/// Full synthesis with all stored details; reproduces the analyzed volume.
Volume synthesize(const WaveletDecomposition& decomposition);

/// Largest number of analysis steps the extents support.
int max_feasible_levels(const std::array<int, 3>& extents);

/// Inverse lifting of a displacement field with all detail coefficients zero:
/// retained points keep their values, removed points receive the mode's
/// prediction from their neighbors. Values are physical units and are not
/// rescaled. Only the structure of `step` is used, not its coefficients.
DisplacementField prolong_zero_detail(const DisplacementField& field,
                                      const DetailSet& step, LiftingMode mode);

/// Baseline pyramid: truncated, renormalized Gaussian (support 2 sigma per
/// axis) followed by stride-2 sampling. Result[0] is the input.
std::vector<Volume> gaussian_pyramid(const Volume& input, double sigma,
                                     int levels);

/// Baseline pyramid: disjoint 2x2x2 block means (space-domain Haar
/// approximation, analysis only). Result[0] is the input.
std::vector<Volume> haar_pyramid(const Volume& input, int levels);

}  // namespace morphflow

#endif  // MORPHFLOW_LIFTING_HPP
