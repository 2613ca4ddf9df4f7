#include "morphflow/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "morphflow/errors.hpp"

namespace morphflow {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double Mat3::det() const {
  const Vec3& a = col[0];
  const Vec3& b = col[1];
  const Vec3& c = col[2];
  return a.x * (b.y * c.z - b.z * c.y) - b.x * (a.y * c.z - a.z * c.y) +
         c.x * (a.y * b.z - a.z * b.y);
}

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Cartesian: return "cartesian";
    case LatticeKind::Fcc: return "fcc";
    case LatticeKind::TiltedCuboid: return "tilted_cuboid";
  }
  return "unknown";
}

LatticeKind lattice_kind_from_string(const std::string& name) {
  if (name == "cartesian") return LatticeKind::Cartesian;
  if (name == "fcc") return LatticeKind::Fcc;
  if (name == "tilted_cuboid") return LatticeKind::TiltedCuboid;
  throw ValidationError("unknown lattice kind: " + name);
}

Index3 LatticeDescriptor::clamp(Index3 p) const {
  p.i = std::clamp(p.i, 0, extents[0] - 1);
  p.j = std::clamp(p.j, 0, extents[1] - 1);
  p.k = std::clamp(p.k, 0, extents[2] - 1);
  return p;
}

Mat3 lattice_basis(const LatticeDescriptor& lattice) {
  const double s = lattice.scale;
  switch (lattice.kind) {
    case LatticeKind::Cartesian:
      return {{Vec3{s, 0, 0}, Vec3{0, s, 0}, Vec3{0, 0, s}}};
    case LatticeKind::Fcc:
      return {{Vec3{s, s, 0}, Vec3{s, 0, s}, Vec3{0, s, s}}};
    case LatticeKind::TiltedCuboid:
      return {{Vec3{s, s, 0}, Vec3{s, -s, 0}, Vec3{0, 0, 2 * s}}};
  }
  throw ValidationError("unsupported lattice kind");
}

Vec3 solve_unit_basis(LatticeKind kind, const Vec3& q) {
  switch (kind) {
    case LatticeKind::Cartesian:
      return q;
    case LatticeKind::Fcc:
      return {0.5 * (q.x + q.y - q.z), 0.5 * (q.x - q.y + q.z),
              0.5 * (-q.x + q.y + q.z)};
    case LatticeKind::TiltedCuboid:
      return {0.5 * (q.x + q.y), 0.5 * (q.x - q.y), 0.5 * q.z};
  }
  throw ValidationError("unsupported lattice kind");
}

Vec3 lattice_to_physical(const LatticeDescriptor& lattice, const Index3& index) {
  if (!lattice.in_bounds(index)) {
    throw ValidationError("lattice index (" + std::to_string(index.i) + "," +
                          std::to_string(index.j) + "," + std::to_string(index.k) +
                          ") out of extents");
  }
  return lattice.origin +
         lattice_basis(lattice).apply(Vec3{static_cast<double>(index.i),
                                           static_cast<double>(index.j),
                                           static_cast<double>(index.k)});
}

Index3 site_units(LatticeKind kind, const Index3& p) {
  switch (kind) {
    case LatticeKind::Cartesian:
      return p;
    case LatticeKind::Fcc:
      return {p.i, p.j, 2 * p.k + ((p.i + p.j) & 1)};
    case LatticeKind::TiltedCuboid:
      return {p.i, 2 * p.j + (p.i & 1), 2 * p.k};
  }
  throw ValidationError("unsupported lattice kind");
}

Index3 storage_from_units(LatticeKind kind, const Index3& u) {
  switch (kind) {
    case LatticeKind::Cartesian:
      return u;
    case LatticeKind::Fcc:
      return {u.i, u.j, (u.k - ((u.i + u.j) & 1)) / 2};
    case LatticeKind::TiltedCuboid:
      return {u.i, (u.j - (u.i & 1)) / 2, u.k / 2};
  }
  throw ValidationError("unsupported lattice kind");
}

Vec3 site_position(const LatticeDescriptor& lattice, const Index3& index) {
  const Index3 u = site_units(lattice.kind, index);
  return lattice.origin + Vec3{static_cast<double>(u.i), static_cast<double>(u.j),
                               static_cast<double>(u.k)} *
                              lattice.scale;
}

}  // namespace morphflow
