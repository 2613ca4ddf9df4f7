#include "morphflow/synth.hpp"

#include <cmath>
#include <random>

#include "morphflow/errors.hpp"

namespace morphflow {

namespace {

struct Grain {
  Vec3 center;
  double radius;
};

double axis_component(const Vec3& p, Axis axis) {
  switch (axis) {
    case Axis::X: return p.x;
    case Axis::Y: return p.y;
    case Axis::Z: return p.z;
  }
  return p.z;
}

/// Separable truncated Gaussian (support 2 sigma) with edge replication.
void smooth_in_place(Volume& vol, double sigma) {
  const int radius = static_cast<int>(std::ceil(2.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    kernel[static_cast<std::size_t>(t + radius)] =
        std::exp(-0.5 * t * t / (sigma * sigma));
    sum += kernel[static_cast<std::size_t>(t + radius)];
  }
  for (double& k : kernel) k /= sum;

  const auto& ext = vol.lattice.extents;
  for (int axis = 0; axis < 3; ++axis) {
    Volume next = vol;
    for (int k = 0; k < ext[2]; ++k) {
      for (int j = 0; j < ext[1]; ++j) {
        for (int i = 0; i < ext[0]; ++i) {
          double acc = 0.0;
          for (int t = -radius; t <= radius; ++t) {
            int p[3] = {i, j, k};
            p[axis] = std::clamp(p[axis] + t, 0, ext[axis] - 1);
            acc += kernel[static_cast<std::size_t>(t + radius)] *
                   vol.at(p[0], p[1], p[2]);
          }
          next.at(i, j, k) = acc;
        }
      }
    }
    vol = std::move(next);
  }
}

Vec3 axis_unit(Axis axis) {
  switch (axis) {
    case Axis::X: return {1.0, 0.0, 0.0};
    case Axis::Y: return {0.0, 1.0, 0.0};
    case Axis::Z: return {0.0, 0.0, 1.0};
  }
  return {0.0, 0.0, 1.0};
}

}  // namespace

void PhantomSpec::check() const {
  for (int a = 0; a < 3; ++a) {
    if (extents[a] < 1) throw ValidationError("phantom extents must be positive");
  }
  if (grain_count < 0 || grain_radius_min <= 0 ||
      grain_radius_max < grain_radius_min) {
    throw ValidationError("invalid grain parameters");
  }
  if (grain_grey < 0 || grain_grey > 1 || matrix_grey < 0 || matrix_grey > 1) {
    throw ValidationError("grey values must lie in [0,1]");
  }
  if (crack && (crack->grey < 0 || crack->grey > 1 || crack->opening < 0)) {
    throw ValidationError("invalid crack parameters");
  }
  if (smooth_sigma < 0 || noise_sigma < 0) {
    throw ValidationError("smooth_sigma and noise_sigma must be non-negative");
  }
}

Volume make_phantom(const PhantomSpec& spec) {
  spec.check();
  LatticeDescriptor lat;
  lat.kind = LatticeKind::Cartesian;
  lat.scale = 1.0;
  lat.origin = {0.0, 0.0, 0.0};
  lat.extents = spec.extents;
  lat.level = 0;
  Volume out(lat, spec.matrix_grey);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Grain> grains;
  grains.reserve(static_cast<std::size_t>(spec.grain_count));
  const long max_attempts = 200L * std::max(1, spec.grain_count);
  long attempts = 0;
  while (static_cast<int>(grains.size()) < spec.grain_count) {
    if (++attempts > max_attempts) {
      throw ValidationError("make_phantom: grain packing infeasible");
    }
    const double r = spec.grain_radius_min +
                     unit(rng) * (spec.grain_radius_max - spec.grain_radius_min);
    Vec3 c;
    double* comp[3] = {&c.x, &c.y, &c.z};
    bool fits = true;
    for (int a = 0; a < 3; ++a) {
      const double lo = r;
      const double hi = static_cast<double>(spec.extents[a] - 1) - r;
      if (hi < lo) {
        fits = false;
        break;
      }
      *comp[a] = lo + unit(rng) * (hi - lo);
    }
    if (!fits) {
      throw ValidationError("make_phantom: grain radius exceeds extents");
    }
    for (const Grain& g : grains) {
      if ((c - g.center).norm() < r + g.radius + 1.0) {
        fits = false;
        break;
      }
    }
    if (fits) grains.push_back({c, r});
  }

  for (const Grain& g : grains) {
    const int i0 = std::max(0, static_cast<int>(std::floor(g.center.x - g.radius)));
    const int i1 = std::min(spec.extents[0] - 1,
                            static_cast<int>(std::ceil(g.center.x + g.radius)));
    const int j0 = std::max(0, static_cast<int>(std::floor(g.center.y - g.radius)));
    const int j1 = std::min(spec.extents[1] - 1,
                            static_cast<int>(std::ceil(g.center.y + g.radius)));
    const int k0 = std::max(0, static_cast<int>(std::floor(g.center.z - g.radius)));
    const int k1 = std::min(spec.extents[2] - 1,
                            static_cast<int>(std::ceil(g.center.z + g.radius)));
    for (int k = k0; k <= k1; ++k) {
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          const Vec3 p{static_cast<double>(i), static_cast<double>(j),
                       static_cast<double>(k)};
          if ((p - g.center).norm() <= g.radius) {
            out.at(i, j, k) = spec.grain_grey;
          }
        }
      }
    }
  }

  if (spec.crack) {
    const CrackSpec& cr = *spec.crack;
    const double lo = cr.position - cr.opening / 2.0;
    const double hi = cr.position + cr.opening / 2.0;
    for (int k = 0; k < spec.extents[2]; ++k) {
      for (int j = 0; j < spec.extents[1]; ++j) {
        for (int i = 0; i < spec.extents[0]; ++i) {
          const double coord =
              axis_component(site_position(lat, {i, j, k}), cr.axis);
          if (coord >= lo && coord < hi) out.at(i, j, k) = cr.grey;
        }
      }
    }
  }

  if (spec.smooth_sigma > 0) {
    smooth_in_place(out, spec.smooth_sigma);
  }

  if (spec.noise_sigma > 0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : out.data) {
      v = std::clamp(v + noise(rng), 0.0, 1.0);
    }
  }
  return out;
}

std::pair<Volume, DisplacementField> deform_translate(const Volume& volume,
                                                      const Vec3& t) {
  if (volume.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("deform_translate: Cartesian volume required");
  }
  DisplacementField truth(volume.lattice);
  DisplacementField backward(volume.lattice);
  for (std::int64_t idx = 0; idx < volume.lattice.num_sites(); ++idx) {
    truth.set(idx, t);
    backward.set(idx, t * -1.0);
  }
  return {warp(volume, backward), truth};
}

std::pair<Volume, DisplacementField> deform_crack_open(const Volume& volume,
                                                       Axis axis,
                                                       double position,
                                                       double opening_delta) {
  if (volume.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("deform_crack_open: Cartesian volume required");
  }
  const Vec3 dir = axis_unit(axis) * opening_delta;
  DisplacementField truth(volume.lattice);
  DisplacementField backward(volume.lattice);
  const LatticeDescriptor& lat = volume.lattice;
  for (int k = 0; k < lat.extents[2]; ++k) {
    for (int j = 0; j < lat.extents[1]; ++j) {
      for (int i = 0; i < lat.extents[0]; ++i) {
        const std::int64_t idx = lat.linear(i, j, k);
        const double coord = axis_component(site_position(lat, {i, j, k}), axis);
        if (coord > position) {
          truth.set(idx, dir);
          backward.set(idx, dir * -1.0);
        }
      }
    }
  }
  return {warp(volume, backward), truth};
}

}  // namespace morphflow
