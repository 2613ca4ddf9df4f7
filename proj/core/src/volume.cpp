#include "morphflow/volume.hpp"

#include <algorithm>
#include <cmath>

#include "morphflow/errors.hpp"
#include "morphflow/parallel.hpp"

namespace morphflow {

namespace {

double interpolate_cartesian(const Volume& vol, const Vec3& point) {
  const auto& lat = vol.lattice;
  const Vec3 q = (point - lat.origin) * (1.0 / lat.scale);
  const double a = std::clamp(q.x, 0.0, static_cast<double>(lat.extents[0] - 1));
  const double b = std::clamp(q.y, 0.0, static_cast<double>(lat.extents[1] - 1));
  const double c = std::clamp(q.z, 0.0, static_cast<double>(lat.extents[2] - 1));
  const int i0 = static_cast<int>(std::floor(a));
  const int j0 = static_cast<int>(std::floor(b));
  const int k0 = static_cast<int>(std::floor(c));
  const int i1 = std::min(i0 + 1, lat.extents[0] - 1);
  const int j1 = std::min(j0 + 1, lat.extents[1] - 1);
  const int k1 = std::min(k0 + 1, lat.extents[2] - 1);
  const double fa = a - i0, fb = b - j0, fc = c - k0;
  const double c00 = vol.at(i0, j0, k0) * (1 - fa) + vol.at(i1, j0, k0) * fa;
  const double c10 = vol.at(i0, j1, k0) * (1 - fa) + vol.at(i1, j1, k0) * fa;
  const double c01 = vol.at(i0, j0, k1) * (1 - fa) + vol.at(i1, j0, k1) * fa;
  const double c11 = vol.at(i0, j1, k1) * (1 - fa) + vol.at(i1, j1, k1) * fa;
  const double c0 = c00 * (1 - fb) + c10 * fb;
  const double c1 = c01 * (1 - fb) + c11 * fb;
  return c0 * (1 - fc) + c1 * fc;
}

// Trilinear in primitive-basis coordinates; corner sites are looked up through
// the parity storage layout with index clamping.
double interpolate_bravais(const Volume& vol, const Vec3& point) {
  const auto& lat = vol.lattice;
  const Vec3 q = (point - lat.origin) * (1.0 / lat.scale);
  const Vec3 a = solve_unit_basis(lat.kind, q);
  const int a0 = static_cast<int>(std::floor(a.x));
  const int b0 = static_cast<int>(std::floor(a.y));
  const int c0 = static_cast<int>(std::floor(a.z));
  const double fa = a.x - a0, fb = a.y - b0, fc = a.z - c0;
  double value = 0.0;
  for (int da = 0; da < 2; ++da) {
    for (int db = 0; db < 2; ++db) {
      for (int dc = 0; dc < 2; ++dc) {
        const double wgt = (da ? fa : 1 - fa) * (db ? fb : 1 - fb) * (dc ? fc : 1 - fc);
        if (wgt == 0.0) continue;
        const int aa = a0 + da, bb = b0 + db, cc = c0 + dc;
        Index3 units;
        if (lat.kind == LatticeKind::Fcc) {
          units = {aa + bb, aa + cc, bb + cc};
        } else {  // TiltedCuboid
          units = {aa + bb, aa - bb, 2 * cc};
        }
        const Index3 st = lat.clamp(storage_from_units(lat.kind, units));
        value += wgt * vol.at(st);
      }
    }
  }
  return value;
}

}  // namespace

double interpolate(const Volume& volume, const Vec3& point) {
  if (volume.lattice.kind == LatticeKind::Cartesian) {
    return interpolate_cartesian(volume, point);
  }
  return interpolate_bravais(volume, point);
}

Volume warp(const Volume& moving, const DisplacementField& field) {
  if (moving.lattice != field.lattice) {
    throw ValidationError("warp: moving volume and field live on different lattices");
  }
  const auto& lat = moving.lattice;
  Volume out(lat);
  out.original_extents = moving.original_extents;
  const int ni = lat.extents[0], nj = lat.extents[1];
  parallel_for(0, lat.num_sites(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const int i = static_cast<int>(idx % ni);
      const int j = static_cast<int>((idx / ni) % nj);
      const int k = static_cast<int>(idx / (static_cast<std::int64_t>(ni) * nj));
      const Vec3 pos = site_position(lat, {i, j, k}) + field.at(idx);
      out.data[static_cast<std::size_t>(idx)] = interpolate(moving, pos);
    }
  });
  return out;
}

}  // namespace morphflow
