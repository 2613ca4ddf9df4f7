#include "morphflow/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morphflow/errors.hpp"
#include "morphflow/parallel.hpp"

namespace morphflow {

namespace {

struct StepTraits {
  LatticeKind fine_kind;
  LatticeKind coarse_kind;
  std::array<bool, 3> pad_axes;  // storage axes padded to even
  int halved_axis;               // storage axis whose extent halves
  std::vector<Index3> offsets;   // prediction/update offsets, scale units
};

const StepTraits& step_traits(LiftStep step) {
  static const StepTraits hv{
      LatticeKind::Cartesian,
      LatticeKind::Fcc,
      {true, true, true},
      2,
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  static const StepTraits d1{
      LatticeKind::Fcc,
      LatticeKind::TiltedCuboid,
      {false, true, false},
      1,
      {{1, 0, 1}, {1, 0, -1}, {-1, 0, 1}, {-1, 0, -1},
       {0, 1, 1}, {0, 1, -1}, {0, -1, 1}, {0, -1, -1}}};
  static const StepTraits d2{LatticeKind::TiltedCuboid,
                             LatticeKind::Cartesian,
                             {true, false, false},
                             0,
                             {{1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0}}};
  switch (step) {
    case LiftStep::HV: return hv;
    case LiftStep::D1: return d1;
    case LiftStep::D2: return d2;
  }
  throw ValidationError("unknown lifting step");
}

LiftStep step_for_cycle_position(int position) {
  switch (position % 3) {
    case 0: return LiftStep::HV;
    case 1: return LiftStep::D1;
    default: return LiftStep::D2;
  }
}

Volume pad_to_even(const Volume& input, const std::array<bool, 3>& axes) {
  auto ext = input.lattice.extents;
  std::array<int, 3> padded = ext;
  for (int a = 0; a < 3; ++a) {
    if (axes[a] && (padded[a] & 1)) padded[a] += 1;
  }
  if (padded == ext) return input;
  LatticeDescriptor lat = input.lattice;
  lat.extents = padded;
  Volume out(lat);
  out.original_extents = input.original_extents;
  for (int k = 0; k < padded[2]; ++k) {
    const int sk = std::min(k, ext[2] - 1);
    for (int j = 0; j < padded[1]; ++j) {
      const int sj = std::min(j, ext[1] - 1);
      for (int i = 0; i < padded[0]; ++i) {
        out.at(i, j, k) = input.at(std::min(i, ext[0] - 1), sj, sk);
      }
    }
  }
  return out;
}

/// Coarse (approximation) lattice of a step applied to a padded fine lattice.
LatticeDescriptor coarse_lattice(LiftStep step, const LatticeDescriptor& fine) {
  const StepTraits& tr = step_traits(step);
  LatticeDescriptor coarse = fine;
  coarse.kind = tr.coarse_kind;
  coarse.extents[tr.halved_axis] = fine.extents[tr.halved_axis] / 2;
  coarse.level = fine.level + 1;
  if (step == LiftStep::D2) coarse.scale = 2.0 * fine.scale;
  return coarse;
}

/// Fine storage index of a coarse (retained) point.
Index3 fine_of_retained(LiftStep step, const Index3& p) {
  switch (step) {
    case LiftStep::HV: return {p.i, p.j, 2 * p.k + ((p.i + p.j) & 1)};
    case LiftStep::D1: return {p.i, 2 * p.j + (p.i & 1), p.k};
    case LiftStep::D2: return {2 * p.i, p.j, p.k};
  }
  throw ValidationError("unknown lifting step");
}

/// Fine storage index of a removed point, enumerated on the coarse shape.
Index3 fine_of_removed(LiftStep step, const Index3& p) {
  switch (step) {
    case LiftStep::HV: return {p.i, p.j, 2 * p.k + 1 - ((p.i + p.j) & 1)};
    case LiftStep::D1: return {p.i, 2 * p.j + 1 - (p.i & 1), p.k};
    case LiftStep::D2: return {2 * p.i + 1, p.j, p.k};
  }
  throw ValidationError("unknown lifting step");
}

Index3 decode(const std::array<int, 3>& ext, std::int64_t idx) {
  return {static_cast<int>(idx % ext[0]),
          static_cast<int>((idx / ext[0]) % ext[1]),
          static_cast<int>(idx / (static_cast<std::int64_t>(ext[0]) * ext[1]))};
}

double extreme_init(LiftingMode mode) {
  return mode == LiftingMode::Max ? -std::numeric_limits<double>::infinity()
                                  : std::numeric_limits<double>::infinity();
}

double take_extreme(LiftingMode mode, double a, double b) {
  return mode == LiftingMode::Max ? std::max(a, b) : std::min(a, b);
}

struct StepEngine {
  LiftStep step;
  const StepTraits& traits;
  LatticeDescriptor fine;
  LatticeDescriptor coarse;

  StepEngine(LiftStep s, const LatticeDescriptor& padded_fine)
      : step(s), traits(step_traits(s)), fine(padded_fine),
        coarse(coarse_lattice(s, padded_fine)) {}

  /// In-bounds fine neighbors of a fine point across the step's offsets.
  template <typename Fn>
  void for_neighbors(const Index3& fine_idx, Fn&& fn) const {
    const Index3 u = site_units(fine.kind, fine_idx);
    for (const Index3& d : traits.offsets) {
      const Index3 nb = storage_from_units(
          fine.kind, {u.i + d.i, u.j + d.j, u.k + d.k});
      if (fine.in_bounds(nb)) fn(nb);
    }
  }

  double predict(const std::vector<double>& fine_values, const Index3& removed,
                 LiftingMode mode) const {
    double p = extreme_init(mode);
    bool any = false;
    for_neighbors(removed, [&](const Index3& nb) {
      p = take_extreme(mode, p, fine_values[static_cast<std::size_t>(
                                    fine.linear(nb.i, nb.j, nb.k))]);
      any = true;
    });
    if (!any) throw ValidationError("lifting: removed point without neighbors");
    return p;
  }

  double update(const std::vector<double>& gamma_fine, const Index3& retained,
                LiftingMode mode) const {
    double g = 0.0;  // max{0, max gamma} resp. min{0, min gamma}
    for_neighbors(retained, [&](const Index3& nb) {
      g = take_extreme(mode, g,
                       gamma_fine[static_cast<std::size_t>(fine.linear(nb.i, nb.j, nb.k))]);
    });
    return g;
  }
};

StepResult analyze_step(const Volume& input, LiftStep step, LiftingMode mode) {
  const StepTraits& tr = step_traits(step);
  if (input.lattice.kind != tr.fine_kind) {
    throw ValidationError(to_string(step) + " lifting expects a " +
                          to_string(tr.fine_kind) + " volume, got " +
                          to_string(input.lattice.kind));
  }
  const Volume padded = pad_to_even(input, tr.pad_axes);
  const StepEngine eng(step, padded.lattice);

  StepResult result;
  result.details.step = step;
  result.details.fine_lattice = padded.lattice;
  result.details.crop_extents = input.lattice.extents;
  result.details.removed_lattice = eng.coarse;
  result.details.removed_lattice.kind = eng.coarse.kind;

  const std::int64_t ncoarse = eng.coarse.num_sites();
  result.details.coefficients.resize(static_cast<std::size_t>(ncoarse));
  std::vector<double> gamma_fine(padded.data.size(), 0.0);

  parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const Index3 p = decode(eng.coarse.extents, idx);
      const Index3 q = fine_of_removed(step, p);
      const double gamma =
          padded.at(q) - eng.predict(padded.data, q, mode);
      result.details.coefficients[static_cast<std::size_t>(idx)] = gamma;
      gamma_fine[static_cast<std::size_t>(eng.fine.linear(q.i, q.j, q.k))] = gamma;
    }
  });

  result.approx = Volume(eng.coarse);
  parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const Index3 p = decode(eng.coarse.extents, idx);
      const Index3 r = fine_of_retained(step, p);
      result.approx.data[static_cast<std::size_t>(idx)] =
          padded.at(r) + eng.update(gamma_fine, r, mode);
    }
  });
  return result;
}

Volume crop_volume(const Volume& padded, const std::array<int, 3>& crop) {
  if (padded.lattice.extents == crop) {
    Volume out = padded;
    out.original_extents = crop;
    return out;
  }
  LatticeDescriptor lat = padded.lattice;
  lat.extents = crop;
  Volume out(lat);
  for (int k = 0; k < crop[2]; ++k) {
    for (int j = 0; j < crop[1]; ++j) {
      for (int i = 0; i < crop[0]; ++i) {
        out.at(i, j, k) = padded.at(i, j, k);
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(LiftingMode mode) {
  return mode == LiftingMode::Max ? "max" : "min";
}

LiftingMode lifting_mode_from_string(const std::string& name) {
  if (name == "max") return LiftingMode::Max;
  if (name == "min") return LiftingMode::Min;
  throw ValidationError("unknown lifting mode: " + name);
}

std::string to_string(LiftStep step) {
  switch (step) {
    case LiftStep::HV: return "hv";
    case LiftStep::D1: return "d1";
    case LiftStep::D2: return "d2";
  }
  return "unknown";
}

StepResult hv_analyze(const Volume& input, LiftingMode mode) {
  return analyze_step(input, LiftStep::HV, mode);
}

StepResult d1_analyze(const Volume& input, LiftingMode mode) {
  return analyze_step(input, LiftStep::D1, mode);
}

StepResult d2_analyze(const Volume& input, LiftingMode mode) {
  return analyze_step(input, LiftStep::D2, mode);
}

Volume synthesize_step(const Volume& approx, const DetailSet& details,
                       LiftingMode mode) {
  const StepEngine eng(details.step, details.fine_lattice);
  if (approx.lattice.kind != eng.coarse.kind ||
      approx.lattice.extents != eng.coarse.extents) {
    throw ValidationError("synthesize_step: approximation does not match the " +
                          to_string(details.step) + " step's coarse lattice");
  }
  const std::int64_t ncoarse = eng.coarse.num_sites();
  if (details.coefficients.size() != static_cast<std::size_t>(ncoarse)) {
    throw ValidationError("synthesize_step: coefficient count mismatch");
  }

  Volume padded(details.fine_lattice);
  std::vector<double> gamma_fine(padded.data.size(), 0.0);
  parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const Index3 p = decode(eng.coarse.extents, idx);
      const Index3 q = fine_of_removed(details.step, p);
      gamma_fine[static_cast<std::size_t>(eng.fine.linear(q.i, q.j, q.k))] =
          details.coefficients[static_cast<std::size_t>(idx)];
    }
  });

  // Undo the update at retained points, then restore removed points from
  // gamma + prediction over the restored retained values.
  parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const Index3 p = decode(eng.coarse.extents, idx);
      const Index3 r = fine_of_retained(details.step, p);
      padded.at(r) = approx.data[static_cast<std::size_t>(idx)] -
                     eng.update(gamma_fine, r, mode);
    }
  });
  parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const Index3 p = decode(eng.coarse.extents, idx);
      const Index3 q = fine_of_removed(details.step, p);
      padded.at(q) = details.coefficients[static_cast<std::size_t>(idx)] +
                     eng.predict(padded.data, q, mode);
    }
  });
  return crop_volume(padded, details.crop_extents);
}

int max_feasible_levels(const std::array<int, 3>& extents) {
  std::array<int, 3> e = extents;
  int levels = 0;
  while (levels < 96) {
    const LiftStep step = step_for_cycle_position(levels);
    const StepTraits& tr = step_traits(step);
    if (e[tr.halved_axis] < 2) break;
    for (int a = 0; a < 3; ++a) {
      if (tr.pad_axes[a]) e[a] += e[a] & 1;
    }
    e[tr.halved_axis] /= 2;
    ++levels;
  }
  return levels;
}

WaveletDecomposition analyze(const Volume& input, int levels, LiftingMode mode) {
  if (input.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("analyze expects a Cartesian volume");
  }
  if (levels < 0) throw ValidationError("analyze: levels must be >= 0");
  const int feasible = max_feasible_levels(input.lattice.extents);
  if (levels > feasible) {
    throw ValidationError("analyze: extents collapse below 2 before " +
                          std::to_string(levels) +
                          " steps; maximum feasible depth is " +
                          std::to_string(feasible));
  }

  WaveletDecomposition deco;
  deco.mode = mode;
  deco.finest_lattice = input.lattice;
  Volume current = input;
  std::vector<DetailSet> finest_first;
  for (int t = 0; t < levels; ++t) {
    StepResult res = analyze_step(current, step_for_cycle_position(t), mode);
    finest_first.push_back(std::move(res.details));
    current = std::move(res.approx);
  }
  deco.coarsest = std::move(current);
  deco.details.assign(finest_first.rbegin(), finest_first.rend());
  return deco;
}

Volume synthesize(const WaveletDecomposition& decomposition) {
  Volume current = decomposition.coarsest;
  for (const DetailSet& d : decomposition.details) {
    current = synthesize_step(current, d, decomposition.mode);
  }
  return current;
}

DisplacementField prolong_zero_detail(const DisplacementField& field,
                                      const DetailSet& step, LiftingMode mode) {
  const StepEngine eng(step.step, step.fine_lattice);
  if (field.lattice.kind != eng.coarse.kind ||
      field.lattice.extents != eng.coarse.extents) {
    throw ValidationError("prolong_zero_detail: field does not match the " +
                          to_string(step.step) + " step's coarse lattice");
  }
  LatticeDescriptor out_lat = step.fine_lattice;
  out_lat.extents = step.crop_extents;
  DisplacementField out(out_lat);

  const std::int64_t ncoarse = eng.coarse.num_sites();
  const std::vector<double>* src[3] = {&field.u, &field.v, &field.w};
  std::vector<double>* dst[3] = {&out.u, &out.v, &out.w};
  for (int c = 0; c < 3; ++c) {
    std::vector<double> padded(static_cast<std::size_t>(eng.fine.num_sites()), 0.0);
    // Zero details: the update vanishes, retained points keep their values.
    parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t idx = lo; idx < hi; ++idx) {
        const Index3 p = decode(eng.coarse.extents, idx);
        const Index3 r = fine_of_retained(step.step, p);
        padded[static_cast<std::size_t>(eng.fine.linear(r.i, r.j, r.k))] =
            (*src[c])[static_cast<std::size_t>(idx)];
      }
    });
    parallel_for(0, ncoarse, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t idx = lo; idx < hi; ++idx) {
        const Index3 p = decode(eng.coarse.extents, idx);
        const Index3 q = fine_of_removed(step.step, p);
        padded[static_cast<std::size_t>(eng.fine.linear(q.i, q.j, q.k))] =
            eng.predict(padded, q, mode);
      }
    });
    // Crop the step's padding.
    for (int k = 0; k < out_lat.extents[2]; ++k) {
      for (int j = 0; j < out_lat.extents[1]; ++j) {
        for (int i = 0; i < out_lat.extents[0]; ++i) {
          (*dst[c])[static_cast<std::size_t>(out_lat.linear(i, j, k))] =
              padded[static_cast<std::size_t>(eng.fine.linear(i, j, k))];
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(2.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int m = -radius; m <= radius; ++m) {
    const double v = std::exp(-(m * m) / (2.0 * sigma * sigma));
    w[static_cast<std::size_t>(m + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

Volume gaussian_downsample(const Volume& input, const std::vector<double>& kernel) {
  const auto& ext = input.lattice.extents;
  const int radius = static_cast<int>(kernel.size() / 2);
  // Separable convolution with edge replication.
  Volume smooth = input;
  for (int axis = 0; axis < 3; ++axis) {
    Volume next(smooth.lattice);
    next.original_extents = smooth.original_extents;
    for (int k = 0; k < ext[2]; ++k) {
      for (int j = 0; j < ext[1]; ++j) {
        for (int i = 0; i < ext[0]; ++i) {
          double acc = 0.0;
          for (int m = -radius; m <= radius; ++m) {
            int ii = i, jj = j, kk = k;
            (axis == 0 ? ii : axis == 1 ? jj : kk) += m;
            ii = std::clamp(ii, 0, ext[0] - 1);
            jj = std::clamp(jj, 0, ext[1] - 1);
            kk = std::clamp(kk, 0, ext[2] - 1);
            acc += kernel[static_cast<std::size_t>(m + radius)] *
                   smooth.at(ii, jj, kk);
          }
          next.at(i, j, k) = acc;
        }
      }
    }
    smooth = std::move(next);
  }
  LatticeDescriptor lat = input.lattice;
  lat.scale *= 2.0;
  lat.level += 3;  // one pyramid level halves every axis, like a full lift cycle
  for (int a = 0; a < 3; ++a) lat.extents[a] = (ext[a] + 1) / 2;
  Volume out(lat);
  for (int k = 0; k < lat.extents[2]; ++k) {
    for (int j = 0; j < lat.extents[1]; ++j) {
      for (int i = 0; i < lat.extents[0]; ++i) {
        out.at(i, j, k) = smooth.at(2 * i, 2 * j, 2 * k);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Volume> gaussian_pyramid(const Volume& input, double sigma,
                                     int levels) {
  if (input.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("gaussian_pyramid expects a Cartesian volume");
  }
  if (sigma <= 0.0) throw ValidationError("gaussian_pyramid: sigma must be > 0");
  const auto kernel = gaussian_kernel(sigma);
  std::vector<Volume> pyramid{input};
  for (int l = 0; l < levels; ++l) {
    const auto& e = pyramid.back().lattice.extents;
    if (e[0] < 2 || e[1] < 2 || e[2] < 2) {
      throw ValidationError("gaussian_pyramid: extents too small for " +
                            std::to_string(levels) + " levels");
    }
    pyramid.push_back(gaussian_downsample(pyramid.back(), kernel));
  }
  return pyramid;
}

std::vector<Volume> haar_pyramid(const Volume& input, int levels) {
  if (input.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("haar_pyramid expects a Cartesian volume");
  }
  std::vector<Volume> pyramid{input};
  for (int l = 0; l < levels; ++l) {
    const auto& prev = pyramid.back();
    const auto& e = prev.lattice.extents;
    if (e[0] < 2 || e[1] < 2 || e[2] < 2) {
      throw ValidationError("haar_pyramid: extents too small for " +
                            std::to_string(levels) + " levels");
    }
    const Volume padded = pad_to_even(prev, {true, true, true});
    LatticeDescriptor lat = prev.lattice;
    lat.scale *= 2.0;
    lat.level += 3;
    lat.origin = lat.origin + Vec3{0.5, 0.5, 0.5} * prev.lattice.scale;
    for (int a = 0; a < 3; ++a) lat.extents[a] = padded.lattice.extents[a] / 2;
    Volume out(lat);
    for (int k = 0; k < lat.extents[2]; ++k) {
      for (int j = 0; j < lat.extents[1]; ++j) {
        for (int i = 0; i < lat.extents[0]; ++i) {
          double acc = 0.0;
          for (int dk = 0; dk < 2; ++dk) {
            for (int dj = 0; dj < 2; ++dj) {
              for (int di = 0; di < 2; ++di) {
                acc += padded.at(2 * i + di, 2 * j + dj, 2 * k + dk);
              }
            }
          }
          out.at(i, j, k) = acc / 8.0;
        }
      }
    }
    pyramid.push_back(std::move(out));
  }
  return pyramid;
}

}  // namespace morphflow
