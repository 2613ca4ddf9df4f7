#ifndef MORPHFLOW_GEOMETRY_HPP
#define MORPHFLOW_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "morphflow/volume.hpp"

namespace morphflow {

/// One planar face of a Voronoi cell: outward unit normal, face area and the
/// physical offset to the neighboring site across the face.
struct CellFace {
  Vec3 normal;
  double area = 0.0;
  Vec3 neighbor_offset;
};

/// Analytic Voronoi-cell data of a lattice site.
/// Cartesian(s): cube, 6 faces of area s^2, volume s^3.
/// Fcc(s): rhombic dodecahedron, 12 faces of area (sqrt2/2) s^2, volume 2 s^3.
/// TiltedCuboid(s): cuboid, paired face areas {2 sqrt2 s^2, 2 sqrt2 s^2, 2 s^2},
/// volume 4 s^3.
struct CellGeometry {
  double cell_volume = 0.0;
  std::vector<CellFace> faces;
};

CellGeometry cell_geometry(const LatticeDescriptor& lattice);

/// Gradient components live on the same lattice as the scalar input.
using VectorField = DisplacementField;

/// Precomputed finite-volume gradient/divergence stencils for one lattice.
///
/// gradient: grad(P) = 1/(2|cell|) * sum_f value(Q_f) |S_f| n_f, with Q_f the
/// neighbor across face f, clamped at the boundary. Exact for affine data at
/// interior sites; reduces to central differences on Cartesian lattices.
/// divergence is the exact negative adjoint:
/// <grad u, p> + <u, div p> = 0 for all u, p on the lattice.
class LatticeOperators {
 public:
  explicit LatticeOperators(const LatticeDescriptor& lattice);

  const LatticeDescriptor& lattice() const { return lattice_; }

  void gradient(const std::vector<double>& scalar, VectorField& out) const;
  void divergence(const VectorField& dual, std::vector<double>& out) const;

 private:
  LatticeDescriptor lattice_;
  std::vector<Vec3> weights_;           // per face: normal * area / (2 |cell|)
  std::vector<std::int64_t> neighbors_; // site-major, faces per site
};

VectorField gradient(const Volume& field);
Volume divergence(const VectorField& dual);

}  // namespace morphflow

#endif  // MORPHFLOW_GEOMETRY_HPP
