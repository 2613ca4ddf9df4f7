#ifndef MORPHFLOW_VOLUME_HPP
#define MORPHFLOW_VOLUME_HPP

#include <array>
#include <vector>

#include "morphflow/lattice.hpp"

namespace morphflow {

/// Scalar grey-value field sampled on a described lattice.
///
/// `original_extents` records the pre-padding extents so that synthesis and
/// file export can crop back; for unpadded volumes it equals lattice.extents.
struct Volume {
  LatticeDescriptor lattice;
  std::vector<double> data;
  std::array<int, 3> original_extents{0, 0, 0};

  Volume() = default;
  explicit Volume(const LatticeDescriptor& lat, double fill = 0.0)
      : lattice(lat),
        data(static_cast<std::size_t>(lat.num_sites()), fill),
        original_extents(lat.extents) {}

  double& at(int i, int j, int k) {
    return data[static_cast<std::size_t>(lattice.linear(i, j, k))];
  }
  double at(int i, int j, int k) const {
    return data[static_cast<std::size_t>(lattice.linear(i, j, k))];
  }
  double& at(const Index3& p) { return at(p.i, p.j, p.k); }
  double at(const Index3& p) const { return at(p.i, p.j, p.k); }
};

/// 3-component displacement field on a lattice. Component values are in
/// physical units of the finest voxel edge, independent of the level spacing.
struct DisplacementField {
  LatticeDescriptor lattice;
  std::vector<double> u, v, w;

  DisplacementField() = default;
  explicit DisplacementField(const LatticeDescriptor& lat)
      : lattice(lat),
        u(static_cast<std::size_t>(lat.num_sites()), 0.0),
        v(u.size(), 0.0),
        w(u.size(), 0.0) {}

  Vec3 at(std::int64_t idx) const {
    return {u[static_cast<std::size_t>(idx)], v[static_cast<std::size_t>(idx)],
            w[static_cast<std::size_t>(idx)]};
  }
  void set(std::int64_t idx, const Vec3& d) {
    u[static_cast<std::size_t>(idx)] = d.x;
    v[static_cast<std::size_t>(idx)] = d.y;
    w[static_cast<std::size_t>(idx)] = d.z;
  }
};

/// Samples the volume at an arbitrary physical point.
///
/// The point is mapped to lattice coordinates through the basis inverse and
/// interpolated trilinearly there; out-of-domain probes clamp to the nearest
/// stored site (edge replication). Exact at lattice sites and for globally
/// affine data at interior points.
double interpolate(const Volume& volume, const Vec3& point);

/// output(p) = interpolate(moving, site_position(p) + displacement(p)).
/// Both arguments must share one lattice.
Volume warp(const Volume& moving, const DisplacementField& field);

}  // namespace morphflow

#endif  // MORPHFLOW_VOLUME_HPP
