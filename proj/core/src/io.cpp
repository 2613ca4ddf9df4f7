#include "morphflow/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "morphflow/errors.hpp"

namespace morphflow {

namespace {

using ordered_json = nlohmann::ordered_json;

std::size_t dtype_size(RawDtype dtype) {
  switch (dtype) {
    case RawDtype::UInt8: return 1;
    case RawDtype::UInt16: return 2;
    case RawDtype::Float32: return 4;
  }
  return 0;
}

void check_extents(const std::array<int, 3>& e) {
  if (e[0] <= 0 || e[1] <= 0 || e[2] <= 0) {
    throw ValidationError("degenerate volume extents (" + std::to_string(e[0]) +
                          "," + std::to_string(e[1]) + "," + std::to_string(e[2]) +
                          ")");
  }
}

std::vector<char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + path);
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<char> buf(size);
  in.seekg(0);
  in.read(buf.data(), static_cast<std::streamsize>(size));
  if (!in) throw IoError("short read on " + path);
  return buf;
}

ordered_json lattice_to_json(const Volume& volume) {
  const auto& lat = volume.lattice;
  const Mat3 basis = lattice_basis(lat);
  ordered_json j;
  j["kind"] = to_string(lat.kind);
  j["basis"] = {{basis.col[0].x, basis.col[1].x, basis.col[2].x},
                {basis.col[0].y, basis.col[1].y, basis.col[2].y},
                {basis.col[0].z, basis.col[1].z, basis.col[2].z}};
  j["origin"] = {lat.origin.x, lat.origin.y, lat.origin.z};
  j["extents"] = {lat.extents[0], lat.extents[1], lat.extents[2]};
  j["level"] = lat.level;
  j["original_extents"] = {volume.original_extents[0], volume.original_extents[1],
                           volume.original_extents[2]};
  j["scale"] = lat.scale;
  j["dtype"] = "float32";
  return j;
}

LatticeDescriptor lattice_from_json(const ordered_json& j,
                                    std::array<int, 3>* original_extents) {
  LatticeDescriptor lat;
  lat.kind = lattice_kind_from_string(j.at("kind").get<std::string>());
  lat.scale = j.at("scale").get<double>();
  const auto& o = j.at("origin");
  lat.origin = {o[0].get<double>(), o[1].get<double>(), o[2].get<double>()};
  const auto& e = j.at("extents");
  lat.extents = {e[0].get<int>(), e[1].get<int>(), e[2].get<int>()};
  lat.level = j.at("level").get<int>();
  if (original_extents) {
    const auto& oe = j.at("original_extents");
    *original_extents = {oe[0].get<int>(), oe[1].get<int>(), oe[2].get<int>()};
  }
  return lat;
}

void write_float32(const std::vector<double>& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  std::vector<float> buf(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) buf[n] = static_cast<float>(data[n]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw IoError("write failed on " + path);
}

std::vector<double> read_float32(const std::string& path, std::int64_t count) {
  const auto buf = read_file(path);
  const std::size_t expected = static_cast<std::size_t>(count) * sizeof(float);
  if (buf.size() != expected) {
    throw IoError(path + ": expected " + std::to_string(expected) +
                  " bytes, found " + std::to_string(buf.size()));
  }
  std::vector<double> data(static_cast<std::size_t>(count));
  const float* src = reinterpret_cast<const float*>(buf.data());
  for (std::int64_t n = 0; n < count; ++n) data[static_cast<std::size_t>(n)] = src[n];
  return data;
}

ordered_json read_sidecar(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw IoError("missing sidecar " + path + ".json");
  ordered_json j;
  in >> j;
  return j;
}

}  // namespace

std::string to_string(RawDtype dtype) {
  switch (dtype) {
    case RawDtype::UInt8: return "uint8";
    case RawDtype::UInt16: return "uint16";
    case RawDtype::Float32: return "float32";
  }
  return "unknown";
}

RawDtype raw_dtype_from_string(const std::string& name) {
  if (name == "uint8") return RawDtype::UInt8;
  if (name == "uint16") return RawDtype::UInt16;
  if (name == "float32") return RawDtype::Float32;
  throw ValidationError("unknown dtype: " + name);
}

Volume load_raw(const std::string& path, const VolumeMeta& meta) {
  check_extents(meta.extents);
  const auto buf = read_file(path);
  const std::int64_t count = static_cast<std::int64_t>(meta.extents[0]) *
                             meta.extents[1] * meta.extents[2];
  const std::size_t expected = static_cast<std::size_t>(count) * dtype_size(meta.dtype);
  if (buf.size() != expected) {
    throw IoError(path + ": expected " + std::to_string(expected) +
                  " bytes for " + std::to_string(meta.extents[0]) + "x" +
                  std::to_string(meta.extents[1]) + "x" +
                  std::to_string(meta.extents[2]) + " " + to_string(meta.dtype) +
                  ", found " + std::to_string(buf.size()));
  }

  LatticeDescriptor lat;
  lat.kind = LatticeKind::Cartesian;
  lat.scale = 1.0;
  lat.extents = meta.extents;
  lat.level = 0;
  Volume vol(lat);

  switch (meta.dtype) {
    case RawDtype::UInt8: {
      const auto* src = reinterpret_cast<const std::uint8_t*>(buf.data());
      for (std::int64_t n = 0; n < count; ++n)
        vol.data[static_cast<std::size_t>(n)] = src[n] / 255.0;
      break;
    }
    case RawDtype::UInt16: {
      const auto* src = reinterpret_cast<const std::uint16_t*>(buf.data());
      for (std::int64_t n = 0; n < count; ++n)
        vol.data[static_cast<std::size_t>(n)] = src[n] / 65535.0;
      break;
    }
    case RawDtype::Float32: {
      const auto* src = reinterpret_cast<const float*>(buf.data());
      for (std::int64_t n = 0; n < count; ++n) {
        const float x = src[n];
        if (!std::isfinite(x)) {
          throw ValidationError(path + ": non-finite sample at linear index " +
                                std::to_string(n));
        }
        if (x < 0.0f || x > 1.0f) {
          throw ValidationError(path + ": float32 sample " + std::to_string(x) +
                                " outside [0,1] at linear index " + std::to_string(n));
        }
        vol.data[static_cast<std::size_t>(n)] = x;
      }
      break;
    }
  }
  return vol;
}

void save_raw(const Volume& volume, const std::string& path) {
  check_extents(volume.lattice.extents);
  write_float32(volume.data, path);
  std::ofstream side(path + ".json", std::ios::trunc);
  if (!side) throw IoError("cannot write sidecar " + path + ".json");
  side << lattice_to_json(volume).dump(2) << "\n";
}

Volume load_volume(const std::string& path) {
  const ordered_json j = read_sidecar(path);
  std::array<int, 3> orig{};
  const LatticeDescriptor lat = lattice_from_json(j, &orig);
  check_extents(lat.extents);
  Volume vol(lat);
  vol.original_extents = orig;
  vol.data = read_float32(path, lat.num_sites());
  return vol;
}

void save_field(const DisplacementField& field, const std::string& prefix) {
  check_extents(field.lattice.extents);
  write_float32(field.u, prefix + "_u.raw");
  write_float32(field.v, prefix + "_v.raw");
  write_float32(field.w, prefix + "_w.raw");
  Volume shape(field.lattice);  // sidecar metadata only
  std::ofstream side(prefix + "_field.json", std::ios::trunc);
  if (!side) throw IoError("cannot write sidecar " + prefix + "_field.json");
  side << lattice_to_json(shape).dump(2) << "\n";
}

DisplacementField load_field(const std::string& prefix) {
  std::ifstream in(prefix + "_field.json");
  if (!in) throw IoError("missing sidecar " + prefix + "_field.json");
  ordered_json j;
  in >> j;
  const LatticeDescriptor lat = lattice_from_json(j, nullptr);
  check_extents(lat.extents);
  DisplacementField field(lat);
  field.u = read_float32(prefix + "_u.raw", lat.num_sites());
  field.v = read_float32(prefix + "_v.raw", lat.num_sites());
  field.w = read_float32(prefix + "_w.raw", lat.num_sites());
  return field;
}

}  // namespace morphflow
