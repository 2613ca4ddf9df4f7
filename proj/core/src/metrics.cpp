#include "morphflow/metrics.hpp"

#include <cmath>

#include "morphflow/errors.hpp"
#include "morphflow/parallel.hpp"

namespace morphflow {

namespace {

double pow_or_identity(double base, double exponent) {
  return exponent == 1.0 ? base : std::pow(base, exponent);
}

/// Mean over sliding windows of the pooled per-window factor. With
/// `with_luminance` the factor is l^alpha * c^beta * s^gamma, otherwise
/// c^beta * s^gamma.
double windowed_mean(const Volume& a, const Volume& b, const SsimParams& params,
                     bool with_luminance) {
  const auto& ext = a.lattice.extents;
  const int edge = params.window_edge;
  if (ext[0] < edge || ext[1] < edge || ext[2] < edge) {
    throw ValidationError("ssim: window larger than volume");
  }
  const int n0 = ext[0] - edge + 1;
  const int n1 = ext[1] - edge + 1;
  const int n2 = ext[2] - edge + 1;
  const double inv_count = 1.0 / (static_cast<double>(edge) * edge * edge);

  std::vector<double> slab_sums(static_cast<std::size_t>(n2), 0.0);
  const std::int64_t windows =
      static_cast<std::int64_t>(n0) * n1 * static_cast<std::int64_t>(n2);
  parallel_for(0, n2, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k0 = lo; k0 < hi; ++k0) {
      double slab = 0.0;
      for (int j0 = 0; j0 < n1; ++j0) {
        for (int i0 = 0; i0 < n0; ++i0) {
          double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
          for (int dk = 0; dk < edge; ++dk) {
            for (int dj = 0; dj < edge; ++dj) {
              for (int di = 0; di < edge; ++di) {
                const double va =
                    a.at(i0 + di, j0 + dj, static_cast<int>(k0) + dk);
                const double vb =
                    b.at(i0 + di, j0 + dj, static_cast<int>(k0) + dk);
                sa += va;
                sb += vb;
                saa += va * va;
                sbb += vb * vb;
                sab += va * vb;
              }
            }
          }
          const double mu_a = sa * inv_count;
          const double mu_b = sb * inv_count;
          const double var_a = std::max(0.0, saa * inv_count - mu_a * mu_a);
          const double var_b = std::max(0.0, sbb * inv_count - mu_b * mu_b);
          const double cov = sab * inv_count - mu_a * mu_b;
          const double sd_a = std::sqrt(var_a);
          const double sd_b = std::sqrt(var_b);

          const double c = (2.0 * sd_a * sd_b + params.c2) /
                           (var_a + var_b + params.c2);
          const double s = (cov + params.c3) / (sd_a * sd_b + params.c3);
          double value =
              pow_or_identity(c, params.beta) * pow_or_identity(s, params.gamma);
          if (with_luminance) {
            const double l = (2.0 * mu_a * mu_b + params.c1) /
                             (mu_a * mu_a + mu_b * mu_b + params.c1);
            value *= pow_or_identity(l, params.alpha);
          }
          slab += value;
        }
      }
      slab_sums[static_cast<std::size_t>(k0)] = slab;
    }
  });
  double total = 0.0;
  for (double s : slab_sums) total += s;
  return total / static_cast<double>(windows);
}

Volume block_mean_downscale(const Volume& input) {
  const auto& ext = input.lattice.extents;
  LatticeDescriptor lat = input.lattice;
  for (int a = 0; a < 3; ++a) {
    lat.extents[a] = ext[a] / 2;
    if (lat.extents[a] < 1) {
      throw ValidationError("ml_ssim: insufficient extents for requested levels");
    }
  }
  lat.scale *= 2.0;
  Volume out(lat);
  for (int k = 0; k < lat.extents[2]; ++k) {
    for (int j = 0; j < lat.extents[1]; ++j) {
      for (int i = 0; i < lat.extents[0]; ++i) {
        double sum = 0.0;
        for (int dk = 0; dk < 2; ++dk) {
          for (int dj = 0; dj < 2; ++dj) {
            for (int di = 0; di < 2; ++di) {
              sum += input.at(2 * i + di, 2 * j + dj, 2 * k + dk);
            }
          }
        }
        out.at(i, j, k) = sum / 8.0;
      }
    }
  }
  return out;
}

}  // namespace

void SsimParams::check() const {
  if (window_edge < 1 || c1 <= 0 || c2 <= 0 || c3 <= 0 || levels_m < 1) {
    throw ValidationError("ssim parameters must be positive");
  }
}

Volume residual(const Volume& fixed, const Volume& moving,
                const DisplacementField* field) {
  if (fixed.lattice != moving.lattice) {
    throw ValidationError("residual: lattice mismatch");
  }
  Volume other = field ? warp(moving, *field) : moving;
  Volume out(fixed.lattice);
  for (std::size_t s = 0; s < out.data.size(); ++s) {
    out.data[s] = std::abs(fixed.data[s] - other.data[s]);
  }
  return out;
}

double rmse(const Volume& fixed, const Volume& warped) {
  if (fixed.lattice.extents != warped.lattice.extents) {
    throw ValidationError("rmse: extent mismatch");
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < fixed.data.size(); ++s) {
    const double d = fixed.data[s] - warped.data[s];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(fixed.data.size()));
}

double ssim(const Volume& a, const Volume& b, const SsimParams& params) {
  params.check();
  if (a.lattice.extents != b.lattice.extents) {
    throw ValidationError("ssim: extent mismatch");
  }
  return windowed_mean(a, b, params, /*with_luminance=*/true);
}

double ml_ssim(const Volume& a, const Volume& b, const SsimParams& params) {
  params.check();
  if (a.lattice.extents != b.lattice.extents) {
    throw ValidationError("ml_ssim: extent mismatch");
  }
  Volume la = a;
  Volume lb = b;
  double product = 1.0;
  for (int level = 0; level < params.levels_m; ++level) {
    if (level > 0) {
      la = block_mean_downscale(la);
      lb = block_mean_downscale(lb);
    }
    const bool coarsest = level == params.levels_m - 1;
    product *= windowed_mean(la, lb, params, coarsest);
  }
  return product;
}

StrainField strain(const DisplacementField& field) {
  if (field.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("strain: Cartesian lattice required");
  }
  const LatticeDescriptor& lat = field.lattice;
  const auto& ext = lat.extents;
  const double s = lat.scale;
  StrainField out(lat);
  const std::vector<double>* comp[3] = {&field.u, &field.v, &field.w};

  // d(comp c)/d(axis a) with central differences, one-sided at the faces.
  auto deriv = [&](int c, int a, int i, int j, int k) {
    int lo[3] = {i, j, k};
    int hi[3] = {i, j, k};
    lo[a] = std::max(0, lo[a] - 1);
    hi[a] = std::min(ext[a] - 1, hi[a] + 1);
    const double span = static_cast<double>(hi[a] - lo[a]) * s;
    if (span == 0.0) return 0.0;
    const double f_hi =
        (*comp[c])[static_cast<std::size_t>(lat.linear(hi[0], hi[1], hi[2]))];
    const double f_lo =
        (*comp[c])[static_cast<std::size_t>(lat.linear(lo[0], lo[1], lo[2]))];
    return (f_hi - f_lo) / span;
  };

  parallel_for(0, lat.num_sites(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % ext[0]);
      const int j = static_cast<int>((idx / ext[0]) % ext[1]);
      const int k = static_cast<int>(idx / (static_cast<std::int64_t>(ext[0]) *
                                            ext[1]));
      const auto w = static_cast<std::size_t>(idx);
      out.e11[w] = deriv(0, 0, i, j, k);
      out.e22[w] = deriv(1, 1, i, j, k);
      out.e33[w] = deriv(2, 2, i, j, k);
      out.e12[w] = 0.5 * (deriv(0, 1, i, j, k) + deriv(1, 0, i, j, k));
      out.e13[w] = 0.5 * (deriv(0, 2, i, j, k) + deriv(2, 0, i, j, k));
      out.e23[w] = 0.5 * (deriv(1, 2, i, j, k) + deriv(2, 1, i, j, k));
    }
  });
  return out;
}

std::vector<std::pair<double, double>> scanline(const Volume& volume, Axis axis,
                                                int slice_index,
                                                int line_index) {
  if (volume.lattice.kind != LatticeKind::Cartesian) {
    throw ValidationError("scanline: Cartesian lattice required");
  }
  const auto& ext = volume.lattice.extents;
  const int run_axis = axis == Axis::X ? 0 : axis == Axis::Y ? 1 : 2;
  const int slice_axis = 2 - (run_axis == 2 ? 1 : 0);  // z except for axis z: y
  const int line_axis = 3 - run_axis - slice_axis;
  if (slice_index < 0 || slice_index >= ext[slice_axis] || line_index < 0 ||
      line_index >= ext[line_axis]) {
    throw ValidationError("scanline: slice or line index out of range");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(ext[run_axis]));
  Index3 p{0, 0, 0};
  int* cursor[3] = {&p.i, &p.j, &p.k};
  *cursor[slice_axis] = slice_index;
  *cursor[line_axis] = line_index;
  for (int t = 0; t < ext[run_axis]; ++t) {
    *cursor[run_axis] = t;
    const Vec3 pos = site_position(volume.lattice, p);
    const double coord = run_axis == 0 ? pos.x : run_axis == 1 ? pos.y : pos.z;
    out.emplace_back(coord, volume.at(p));
  }
  return out;
}

}  // namespace morphflow
