#ifndef MORPHFLOW_TESTS_HELPERS_HPP
#define MORPHFLOW_TESTS_HELPERS_HPP

#include <random>

#include "morphflow/volume.hpp"

namespace mftest {

inline morphflow::LatticeDescriptor cart_lattice(int nx, int ny, int nz) {
  morphflow::LatticeDescriptor lat;
  lat.extents = {nx, ny, nz};
  return lat;
}

inline morphflow::Volume random_volume(int nx, int ny, int nz,
                                       std::mt19937_64& rng, double lo = 0.0,
                                       double hi = 1.0) {
  morphflow::Volume vol(cart_lattice(nx, ny, nz));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : vol.data) v = dist(rng);
  return vol;
}

inline morphflow::Volume random_int_volume(int nx, int ny, int nz,
                                           std::mt19937_64& rng,
                                           int max_value = 4095) {
  morphflow::Volume vol(cart_lattice(nx, ny, nz));
  std::uniform_int_distribution<int> dist(0, max_value);
  for (double& v : vol.data) v = static_cast<double>(dist(rng));
  return vol;
}

}  // namespace mftest

#endif  // MORPHFLOW_TESTS_HELPERS_HPP
