#ifndef MORPHFLOW_METRICS_HPP
#define MORPHFLOW_METRICS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "morphflow/volume.hpp"

namespace morphflow {

/// Structural-similarity constants and window size; the dynamic range is 1.
struct SsimParams {
  int window_edge = 7;
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
  double c3 = 0.03 * 0.03 / 2.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  int levels_m = 3;

  void check() const;
};

/// Symmetric strain tensor on the displacement lattice; only the six
/// independent components are stored.
struct StrainField {
  LatticeDescriptor lattice;
  std::vector<double> e11, e22, e33, e12, e13, e23;

  StrainField() = default;
  explicit StrainField(const LatticeDescriptor& lat)
      : lattice(lat),
        e11(static_cast<std::size_t>(lat.num_sites()), 0.0),
        e22(e11.size(), 0.0),
        e33(e11.size(), 0.0),
        e12(e11.size(), 0.0),
        e13(e11.size(), 0.0),
        e23(e11.size(), 0.0) {}
};

/// |fixed - moving| pointwise, or |fixed - warp(moving, field)| when a field
/// is given.
Volume residual(const Volume& fixed, const Volume& moving,
                const DisplacementField* field = nullptr);

double rmse(const Volume& fixed, const Volume& warped);

/// Mean of l*c*s over all interior-anchored sliding cubic windows, uniform
/// weights, stride 1, population moments.
double ssim(const Volume& a, const Volume& b, const SsimParams& params = {});

/// Multi-level variant: levels are 2x2x2 block-mean downscalings; the
/// coarsest level contributes mean(l*c*s) per window, finer levels mean(c*s),
/// combined as a product with the configured exponents. levels_m = 1 equals
/// ssim exactly.
double ml_ssim(const Volume& a, const Volume& b, const SsimParams& params = {});

/// e_ij = (du_i/dx_j + du_j/dx_i) / 2, central differences at interior sites
/// and one-sided at boundaries, in physical units. Cubic lattices only.
StrainField strain(const DisplacementField& field);

/// Ordered (coordinate, grey value) samples along one axis-parallel line.
/// For axis x the line runs over i with j = line_index, k = slice_index; for
/// axis y over j with i = line_index, k = slice_index; for axis z over k with
/// i = line_index, j = slice_index.
enum class Axis { X, Y, Z };

std::vector<std::pair<double, double>> scanline(const Volume& volume, Axis axis,
                                                int slice_index, int line_index);

}  // namespace morphflow

#endif  // MORPHFLOW_METRICS_HPP
