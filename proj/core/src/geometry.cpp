#include "morphflow/geometry.hpp"

#include <cmath>

#include "morphflow/errors.hpp"
#include "morphflow/parallel.hpp"

namespace morphflow {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

CellGeometry cell_geometry(const LatticeDescriptor& lattice) {
  const double s = lattice.scale;
  CellGeometry cell;
  switch (lattice.kind) {
    case LatticeKind::Cartesian: {
      cell.cell_volume = s * s * s;
      for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {1, -1}) {
          Vec3 n{};
          (axis == 0 ? n.x : axis == 1 ? n.y : n.z) = sign;
          cell.faces.push_back({n, s * s, n * s});
        }
      }
      break;
    }
    case LatticeKind::Fcc: {
      cell.cell_volume = 2.0 * s * s * s;
      const double area = (kSqrt2 / 2.0) * s * s;
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          const Vec3 dirs[3] = {{double(sa), double(sb), 0},
                                {double(sa), 0, double(sb)},
                                {0, double(sa), double(sb)}};
          for (const Vec3& d : dirs) {
            cell.faces.push_back({d * (1.0 / kSqrt2), area, d * s});
          }
        }
      }
      break;
    }
    case LatticeKind::TiltedCuboid: {
      cell.cell_volume = 4.0 * s * s * s;
      const double diag_area = 2.0 * kSqrt2 * s * s;
      for (int sa : {1, -1}) {
        for (int sb : {1, -1}) {
          const Vec3 d{double(sa), double(sb), 0};
          cell.faces.push_back({d * (1.0 / kSqrt2), diag_area, d * s});
        }
      }
      for (int sc : {1, -1}) {
        const Vec3 n{0, 0, double(sc)};
        cell.faces.push_back({n, 2.0 * s * s, n * (2.0 * s)});
      }
      break;
    }
  }
  return cell;
}

LatticeOperators::LatticeOperators(const LatticeDescriptor& lattice)
    : lattice_(lattice) {
  const CellGeometry cell = cell_geometry(lattice);
  std::vector<Index3> units_offsets;
  for (const auto& f : cell.faces) {
    const Vec3 u = f.neighbor_offset * (1.0 / lattice.scale);
    units_offsets.push_back({static_cast<int>(std::lround(u.x)),
                             static_cast<int>(std::lround(u.y)),
                             static_cast<int>(std::lround(u.z))});
    weights_.push_back(f.normal * (f.area / (2.0 * cell.cell_volume)));
  }
  const std::size_t nfaces = weights_.size();
  const std::int64_t n = lattice.num_sites();
  neighbors_.resize(static_cast<std::size_t>(n) * nfaces);
  const int ni = lattice.extents[0], nj = lattice.extents[1];
  parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const int i = static_cast<int>(idx % ni);
      const int j = static_cast<int>((idx / ni) % nj);
      const int k = static_cast<int>(idx / (static_cast<std::int64_t>(ni) * nj));
      const Index3 u = site_units(lattice.kind, {i, j, k});
      for (std::size_t f = 0; f < nfaces; ++f) {
        const Index3 off = units_offsets[f];
        const Index3 nb = lattice.clamp(storage_from_units(
            lattice.kind, {u.i + off.i, u.j + off.j, u.k + off.k}));
        neighbors_[static_cast<std::size_t>(idx) * nfaces + f] =
            lattice.linear(nb.i, nb.j, nb.k);
      }
    }
  });
}

void LatticeOperators::gradient(const std::vector<double>& scalar,
                                VectorField& out) const {
  const std::size_t nfaces = weights_.size();
  parallel_for(0, lattice_.num_sites(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const std::int64_t* nb = &neighbors_[static_cast<std::size_t>(idx) * nfaces];
      Vec3 g{};
      for (std::size_t f = 0; f < nfaces; ++f) {
        g = g + weights_[f] * scalar[static_cast<std::size_t>(nb[f])];
      }
      out.set(idx, g);
    }
  });
}

void LatticeOperators::divergence(const VectorField& dual,
                                  std::vector<double>& out) const {
  const std::size_t nfaces = weights_.size();
  const std::int64_t n = lattice_.num_sites();
  out.assign(static_cast<std::size_t>(n), 0.0);
  // Transpose-scatter of the gradient stencil; clamping is folded into the
  // neighbor table, so the adjoint identity holds to machine precision.
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const Vec3 p = dual.at(idx);
    const std::int64_t* nb = &neighbors_[static_cast<std::size_t>(idx) * nfaces];
    for (std::size_t f = 0; f < nfaces; ++f) {
      out[static_cast<std::size_t>(nb[f])] -= weights_[f].dot(p);
    }
  }
}

VectorField gradient(const Volume& field) {
  LatticeOperators ops(field.lattice);
  VectorField grad(field.lattice);
  ops.gradient(field.data, grad);
  return grad;
}

Volume divergence(const VectorField& dual) {
  LatticeOperators ops(dual.lattice);
  Volume div(dual.lattice);
  ops.divergence(dual, div.data);
  return div;
}

}  // namespace morphflow
