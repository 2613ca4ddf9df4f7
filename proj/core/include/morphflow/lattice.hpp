#ifndef MORPHFLOW_LATTICE_HPP
#define MORPHFLOW_LATTICE_HPP

#include <array>
#include <cstdint>
#include <string>

namespace morphflow {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  bool operator==(const Vec3&) const = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
};

/// 3x3 matrix, column-major semantics: columns are basis vectors.
struct Mat3 {
  std::array<Vec3, 3> col;

  Vec3 apply(const Vec3& v) const {
    return col[0] * v.x + col[1] * v.y + col[2] * v.z;
  }
  double det() const;
};

enum class LatticeKind { Cartesian, Fcc, TiltedCuboid };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& name);

/// Integer storage index into a lattice's dense value array.
struct Index3 {
  int i = 0, j = 0, k = 0;
  bool operator==(const Index3&) const = default;
};

/// Describes which Bravais lattice a resolution level lives on.
///
/// Values are stored in a dense (na, nb, nc) array. For the Cartesian kind the
/// array axes coincide with the primitive basis; for Fcc and TiltedCuboid the
/// array uses a parity-interleaved layout (see site_units) so that a box-shaped
/// image region maps onto a box-shaped array. `scale` is the level spacing in
/// units of the finest voxel edge.
struct LatticeDescriptor {
  LatticeKind kind = LatticeKind::Cartesian;
  double scale = 1.0;
  Vec3 origin{};
  std::array<int, 3> extents{0, 0, 0};
  int level = 0;

  bool operator==(const LatticeDescriptor&) const = default;

  std::int64_t num_sites() const {
    return static_cast<std::int64_t>(extents[0]) * extents[1] * extents[2];
  }
  std::int64_t linear(int i, int j, int k) const {
    return i + static_cast<std::int64_t>(extents[0]) *
                   (j + static_cast<std::int64_t>(extents[1]) * k);
  }
  bool in_bounds(const Index3& p) const {
    return p.i >= 0 && p.i < extents[0] && p.j >= 0 && p.j < extents[1] &&
           p.k >= 0 && p.k < extents[2];
  }
  Index3 clamp(Index3 p) const;
};

/// Primitive basis matrix, columns in physical units (finest voxel edges).
/// Cartesian: s*I; Fcc: s*{(1,1,0),(1,0,1),(0,1,1)};
/// TiltedCuboid: s*{(1,1,0),(1,-1,0),(0,0,2)}.
Mat3 lattice_basis(const LatticeDescriptor& lattice);

/// Solves basis * a = q for the unit (scale 1) basis of the kind.
Vec3 solve_unit_basis(LatticeKind kind, const Vec3& q);

/// origin + basis * (a,b,c); index must lie within extents.
Vec3 lattice_to_physical(const LatticeDescriptor& lattice, const Index3& index);

/// Integer grid coordinates (in units of `scale`, relative to origin) of the
/// stored site at array index (i,j,k):
///   Cartesian:     (i, j, k)
///   Fcc:           (i, j, 2k + ((i+j) mod 2))     -- points with even x+y+z
///   TiltedCuboid:  (i, 2j + (i mod 2), 2k)        -- points with even x+y, even z
Index3 site_units(LatticeKind kind, const Index3& index);

/// Inverse of site_units; `units` must be a valid lattice point of the kind.
Index3 storage_from_units(LatticeKind kind, const Index3& units);

/// Physical position of a stored site: origin + scale * site_units.
Vec3 site_position(const LatticeDescriptor& lattice, const Index3& index);

}  // namespace morphflow

#endif  // MORPHFLOW_LATTICE_HPP
