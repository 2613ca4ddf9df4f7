#include <doctest.h>

#include <cmath>

#include "morphflow/errors.hpp"
#include "morphflow/metrics.hpp"
#include "morphflow/synth.hpp"

#include "helpers.hpp"

using namespace morphflow;

TEST_CASE("phantoms are deterministic per seed") {
  PhantomSpec spec;
  spec.seed = 42;
  const Volume a = make_phantom(spec);
  const Volume b = make_phantom(spec);
  CHECK(a.data == b.data);
  spec.seed = 43;
  const Volume c = make_phantom(spec);
  CHECK(a.data != c.data);
}

TEST_CASE("no grains, no crack, no noise gives the constant matrix grey") {
  PhantomSpec spec;
  spec.grain_count = 0;
  spec.noise_sigma = 0.0;
  const Volume vol = make_phantom(spec);
  for (double v : vol.data) CHECK(v == spec.matrix_grey);
}

TEST_CASE("crack slab is exactly the stated planar region") {
  PhantomSpec spec;
  spec.grain_count = 0;
  spec.noise_sigma = 0.0;
  spec.crack = CrackSpec{Axis::Z, 16.0, 2.0, 0.05};
  const Volume vol = make_phantom(spec);
  for (int k = 0; k < 32; ++k) {
    const double expect = (k >= 15 && k < 17) ? 0.05 : spec.matrix_grey;
    CHECK(vol.at(3, 7, k) == expect);
  }
}

TEST_CASE("grain spheres stay disjoint and inside the volume") {
  PhantomSpec spec;
  spec.extents = {48, 48, 48};
  spec.grain_count = 30;
  spec.noise_sigma = 0.0;
  spec.seed = 7;
  const Volume vol = make_phantom(spec);
  // Boundary voxels never belong to a grain (centers keep radius distance).
  for (int j = 0; j < 48; ++j) {
    for (int i = 0; i < 48; ++i) {
      CHECK(vol.at(i, j, 0) == spec.matrix_grey);
      CHECK(vol.at(0, i, j) == spec.matrix_grey);
    }
  }
  long grain_voxels = 0;
  for (double v : vol.data) {
    CHECK((v == spec.matrix_grey || v == spec.grain_grey));
    if (v == spec.grain_grey) ++grain_voxels;
  }
  CHECK(grain_voxels > 0);
}

TEST_CASE("smoothing preserves constants and the value range") {
  PhantomSpec spec;
  spec.grain_count = 0;
  spec.noise_sigma = 0.0;
  spec.smooth_sigma = 1.0;
  const Volume flat = make_phantom(spec);
  for (double v : flat.data) CHECK(v == doctest::Approx(0.4).epsilon(1e-14));

  spec.grain_count = 10;
  spec.seed = 5;
  const Volume vol = make_phantom(spec);
  for (double v : vol.data) {
    CHECK(v >= 0.4 - 1e-12);
    CHECK(v <= 0.8 + 1e-12);
  }
}

TEST_CASE("infeasible packing reports an error") {
  PhantomSpec spec;
  spec.extents = {16, 16, 16};
  spec.grain_count = 500;
  spec.grain_radius_min = 3.0;
  spec.grain_radius_max = 3.0;
  CHECK_THROWS_AS(make_phantom(spec), ValidationError);
}

TEST_CASE("translate deformation: zero shift is the identity") {
  PhantomSpec spec;
  spec.seed = 9;
  const Volume vol = make_phantom(spec);
  const auto [moving, truth] = deform_translate(vol, {0.0, 0.0, 0.0});
  CHECK(moving.data == vol.data);
  for (std::int64_t idx = 0; idx < vol.lattice.num_sites(); ++idx) {
    CHECK(truth.at(idx) == Vec3{0.0, 0.0, 0.0});
  }
}

TEST_CASE("integer translate equals an array shift at interior points") {
  PhantomSpec spec;
  spec.seed = 11;
  spec.noise_sigma = 0.0;
  const Volume vol = make_phantom(spec);
  const auto [moving, truth] = deform_translate(vol, {3.0, 0.0, 0.0});
  for (int k = 0; k < 32; ++k) {
    for (int j = 0; j < 32; ++j) {
      for (int i = 3; i < 32; ++i) {
        CHECK(moving.at(i, j, k) == doctest::Approx(vol.at(i - 3, j, k)));
      }
    }
  }
  CHECK(truth.at(0) == Vec3{3.0, 0.0, 0.0});
}

TEST_CASE("translate deformation round-trips through warp with the truth") {
  PhantomSpec spec;
  spec.seed = 13;
  spec.noise_sigma = 0.0;
  const Volume vol = make_phantom(spec);
  const auto [moving, truth] = deform_translate(vol, {2.0, 1.0, 0.0});
  const Volume back = warp(moving, truth);
  for (int k = 0; k < 32; ++k) {
    for (int j = 0; j < 31; ++j) {
      for (int i = 0; i < 30; ++i) {
        CHECK(std::abs(back.at(i, j, k) - vol.at(i, j, k)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("crack opening truth strain peaks at the plane with value d/2") {
  PhantomSpec spec;
  spec.grain_count = 0;
  spec.noise_sigma = 0.0;
  const Volume vol = make_phantom(spec);
  const auto [moving, truth] = deform_crack_open(vol, Axis::Z, 16.0, 2.0);

  const StrainField st = strain(truth);
  const auto& lat = truth.lattice;
  double peak = 0.0;
  int peak_k = -1;
  for (int k = 0; k < 32; ++k) {
    const double v = st.e33[static_cast<std::size_t>(lat.linear(16, 16, k))];
    if (v > peak) {
      peak = v;
      peak_k = k;
    }
  }
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((peak_k == 16 || peak_k == 17));
}
