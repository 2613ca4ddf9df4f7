#ifndef MORPHFLOW_IO_HPP
#define MORPHFLOW_IO_HPP

#include <array>
#include <string>

#include "morphflow/volume.hpp"

namespace morphflow {

enum class RawDtype { UInt8, UInt16, Float32 };

std::string to_string(RawDtype dtype);
RawDtype raw_dtype_from_string(const std::string& name);

/// Shape and sample type of a headerless little-endian raw volume.
struct VolumeMeta {
  std::array<int, 3> extents{0, 0, 0};
  RawDtype dtype = RawDtype::UInt8;
};

/// Loads a raw file as a Cartesian level-0 volume, normalized to [0,1] by the
/// dtype maximum (float32 passes through and is range-checked).
Volume load_raw(const std::string& path, const VolumeMeta& meta);

/// Writes `path` as float32 little-endian plus a JSON sidecar `path + ".json"`
/// describing kind, basis, origin, extents, level and original_extents.
void save_raw(const Volume& volume, const std::string& path);

/// Reads a volume written by save_raw, using its sidecar. Bit-exact for data
/// representable in float32.
Volume load_volume(const std::string& path);

/// Displacement fields are stored as three raw float32 volumes
/// `prefix_u.raw`, `prefix_v.raw`, `prefix_w.raw` with one shared sidecar
/// `prefix_field.json`.
void save_field(const DisplacementField& field, const std::string& prefix);
DisplacementField load_field(const std::string& prefix);

}  // namespace morphflow

#endif  // MORPHFLOW_IO_HPP
