#ifndef MORPHFLOW_SYNTH_HPP
#define MORPHFLOW_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <utility>

#include "morphflow/metrics.hpp"
#include "morphflow/volume.hpp"

namespace morphflow {

/// Planar dark slab cutting through the phantom: all voxels whose coordinate
/// along `axis` falls in [position - opening/2, position + opening/2) take
/// the crack grey value.
struct CrackSpec {
  Axis axis = Axis::Z;
  double position = 0.0;
  double opening = 1.0;
  double grey = 0.05;
};

/// Aggregates-in-mortar test pattern: spheres of grain grey packed without
/// overlap into a constant matrix, optionally cut by a dark crack plane,
/// optionally blurred (CT-like partial-volume softness), and overlaid with
/// clipped Gaussian noise. Deterministic per seed.
struct PhantomSpec {
  std::array<int, 3> extents{32, 32, 32};
  int grain_count = 40;
  double grain_radius_min = 2.0;
  double grain_radius_max = 4.0;
  double grain_grey = 0.8;
  double matrix_grey = 0.4;
  std::optional<CrackSpec> crack;
  double smooth_sigma = 0.0;
  double noise_sigma = 0.01;
  std::uint64_t seed = 1;

  void check() const;
};

Volume make_phantom(const PhantomSpec& spec);

/// Rigid translation ground truth: moving(x) = interpolate(volume, x - t),
/// truth field constant t (in voxel units of the volume's lattice).
std::pair<Volume, DisplacementField> deform_translate(const Volume& volume,
                                                      const Vec3& t);

/// Crack-opening ground truth: sites with coordinate along `axis` greater
/// than `position` move by `opening_delta` along the axis; the rest stay.
/// The moving image is resampled backward with that field so truth and
/// estimate share the solver's warp convention.
std::pair<Volume, DisplacementField> deform_crack_open(const Volume& volume,
                                                       Axis axis,
                                                       double position,
                                                       double opening_delta);

}  // namespace morphflow

#endif  // MORPHFLOW_SYNTH_HPP
