#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "morphflow/errors.hpp"
#include "morphflow/io.hpp"
#include "morphflow/volume.hpp"

#include "helpers.hpp"

using namespace morphflow;

TEST_CASE("lattice basis columns match the documented primitive vectors") {
  LatticeDescriptor lat = mftest::cart_lattice(4, 4, 4);
  lat.scale = 2.0;

  lat.kind = LatticeKind::Fcc;
  Mat3 basis = lattice_basis(lat);
  CHECK(basis.col[0] == Vec3{2.0, 2.0, 0.0});
  CHECK(basis.col[1] == Vec3{2.0, 0.0, 2.0});
  CHECK(basis.col[2] == Vec3{0.0, 2.0, 2.0});

  lat.kind = LatticeKind::TiltedCuboid;
  basis = lattice_basis(lat);
  CHECK(basis.col[0] == Vec3{2.0, 2.0, 0.0});
  CHECK(basis.col[1] == Vec3{2.0, -2.0, 0.0});
  CHECK(basis.col[2] == Vec3{0.0, 0.0, 4.0});
}

TEST_CASE("solve_unit_basis inverts lattice_basis") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (LatticeKind kind :
       {LatticeKind::Cartesian, LatticeKind::Fcc, LatticeKind::TiltedCuboid}) {
    LatticeDescriptor lat = mftest::cart_lattice(2, 2, 2);
    lat.kind = kind;
    const Mat3 basis = lattice_basis(lat);
    for (int t = 0; t < 20; ++t) {
      const Vec3 a{dist(rng), dist(rng), dist(rng)};
      const Vec3 back = solve_unit_basis(kind, basis.apply(a));
      CHECK((back - a).norm() < 1e-12);
    }
  }
}

TEST_CASE("site_units and storage_from_units are inverse and parity-correct") {
  for (LatticeKind kind : {LatticeKind::Fcc, LatticeKind::TiltedCuboid}) {
    for (int k = 0; k < 4; ++k) {
      for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
          const Index3 u = site_units(kind, {i, j, k});
          if (kind == LatticeKind::Fcc) {
            CHECK((u.i + u.j + u.k) % 2 == 0);
          } else {
            CHECK((u.i + u.j) % 2 == 0);
            CHECK(u.k % 2 == 0);
          }
          CHECK(storage_from_units(kind, u) == Index3{i, j, k});
        }
      }
    }
  }
}

TEST_CASE("lattice_to_physical checks bounds") {
  LatticeDescriptor lat = mftest::cart_lattice(3, 3, 3);
  CHECK_THROWS_AS(lattice_to_physical(lat, {3, 0, 0}), ValidationError);
  const Vec3 p = lattice_to_physical(lat, {1, 2, 0});
  CHECK(p == Vec3{1.0, 2.0, 0.0});
}

TEST_CASE("interpolation is exact at lattice sites") {
  std::mt19937_64 rng(7);
  for (LatticeKind kind :
       {LatticeKind::Cartesian, LatticeKind::Fcc, LatticeKind::TiltedCuboid}) {
    Volume vol = mftest::random_volume(5, 5, 5, rng);
    vol.lattice.kind = kind;
    vol.lattice.scale = 1.5;
    for (int k = 0; k < 5; ++k) {
      for (int j = 0; j < 5; ++j) {
        for (int i = 0; i < 5; ++i) {
          const double got =
              interpolate(vol, site_position(vol.lattice, {i, j, k}));
          CHECK(got == doctest::Approx(vol.at(i, j, k)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("interpolation reproduces affine data at interior points") {
  const auto affine = [](const Vec3& p) {
    return 0.3 + 0.11 * p.x - 0.07 * p.y + 0.05 * p.z;
  };
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> jitter(2.5, 4.5);
  for (LatticeKind kind :
       {LatticeKind::Cartesian, LatticeKind::Fcc, LatticeKind::TiltedCuboid}) {
    LatticeDescriptor lat = mftest::cart_lattice(8, 8, 8);
    lat.kind = kind;
    Volume vol(lat);
    for (int k = 0; k < 8; ++k) {
      for (int j = 0; j < 8; ++j) {
        for (int i = 0; i < 8; ++i) {
          vol.at(i, j, k) = affine(site_position(lat, {i, j, k}));
        }
      }
    }
    for (int t = 0; t < 50; ++t) {
      const Vec3 p{jitter(rng), jitter(rng), jitter(rng)};
      CHECK(interpolate(vol, p) == doctest::Approx(affine(p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("interpolation matches a brute-force Cartesian trilinear oracle") {
  std::mt19937_64 rng(17);
  const Volume vol = mftest::random_volume(6, 5, 7, rng);
  std::uniform_real_distribution<double> coord(-1.0, 7.5);
  for (int t = 0; t < 200; ++t) {
    const Vec3 p{coord(rng), coord(rng), coord(rng)};
    // Oracle: clamp to the domain box, then standard trilinear weights.
    const auto cl = [](double v, int n) {
      return std::min(std::max(v, 0.0), static_cast<double>(n - 1));
    };
    const double x = cl(p.x, 6), y = cl(p.y, 5), z = cl(p.z, 7);
    const int i0 = std::min(static_cast<int>(std::floor(x)), 4);
    const int j0 = std::min(static_cast<int>(std::floor(y)), 3);
    const int k0 = std::min(static_cast<int>(std::floor(z)), 5);
    const double fx = x - i0, fy = y - j0, fz = z - k0;
    double expect = 0.0;
    for (int dk = 0; dk < 2; ++dk) {
      for (int dj = 0; dj < 2; ++dj) {
        for (int di = 0; di < 2; ++di) {
          const double w = (di ? fx : 1 - fx) * (dj ? fy : 1 - fy) *
                           (dk ? fz : 1 - fz);
          expect += w * vol.at(i0 + di, j0 + dj, k0 + dk);
        }
      }
    }
    CHECK(interpolate(vol, p) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("warp with an integer shift equals an array shift at interior") {
  std::mt19937_64 rng(19);
  const Volume vol = mftest::random_volume(8, 8, 8, rng);
  DisplacementField field(vol.lattice);
  for (std::int64_t idx = 0; idx < vol.lattice.num_sites(); ++idx) {
    field.set(idx, {2.0, 0.0, 0.0});
  }
  const Volume out = warp(vol, field);
  for (int k = 0; k < 8; ++k) {
    for (int j = 0; j < 8; ++j) {
      for (int i = 0; i < 6; ++i) {
        CHECK(out.at(i, j, k) == doctest::Approx(vol.at(i + 2, j, k)));
      }
    }
  }
}

TEST_CASE("warp requires matching lattices") {
  std::mt19937_64 rng(23);
  const Volume vol = mftest::random_volume(4, 4, 4, rng);
  DisplacementField field(mftest::cart_lattice(5, 4, 4));
  CHECK_THROWS_AS(warp(vol, field), ValidationError);
}

TEST_CASE("raw round trip preserves data and lattice metadata") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mf_io_test";
  fs::create_directories(dir);
  std::mt19937_64 rng(29);
  Volume vol = mftest::random_volume(6, 7, 8, rng);
  vol.lattice.kind = LatticeKind::Fcc;
  vol.lattice.scale = 2.0;
  vol.lattice.level = 4;
  vol.lattice.origin = {0.5, 0.0, 1.0};
  // float32 representable values survive the round trip bit-exactly
  for (double& v : vol.data) v = static_cast<float>(v);

  const std::string path = (dir / "vol.raw").string();
  save_raw(vol, path);
  const Volume back = load_volume(path);
  CHECK(back.lattice == vol.lattice);
  CHECK(back.data == vol.data);
  fs::remove_all(dir);
}

TEST_CASE("load_raw rejects size mismatch and normalizes integer dtypes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mf_io_test2";
  fs::create_directories(dir);
  const std::string path = (dir / "two.raw").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    const unsigned char bytes[2] = {0, 255};
    std::fwrite(bytes, 1, 2, f);
    std::fclose(f);
  }
  VolumeMeta meta;
  meta.extents = {2, 1, 1};
  meta.dtype = RawDtype::UInt8;
  const Volume vol = load_raw(path, meta);
  CHECK(vol.data[0] == 0.0);
  CHECK(vol.data[1] == 1.0);

  meta.extents = {3, 1, 1};
  CHECK_THROWS_AS(load_raw(path, meta), IoError);
  fs::remove_all(dir);
}

TEST_CASE("field save/load round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mf_io_test3";
  fs::create_directories(dir);
  std::mt19937_64 rng(31);
  DisplacementField field(mftest::cart_lattice(4, 5, 6));
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (std::int64_t idx = 0; idx < field.lattice.num_sites(); ++idx) {
    field.set(idx, {static_cast<float>(dist(rng)), static_cast<float>(dist(rng)),
                    static_cast<float>(dist(rng))});
  }
  const std::string prefix = (dir / "f").string();
  save_field(field, prefix);
  const DisplacementField back = load_field(prefix);
  CHECK(back.lattice == field.lattice);
  CHECK(back.u == field.u);
  CHECK(back.v == field.v);
  CHECK(back.w == field.w);
  fs::remove_all(dir);
}
