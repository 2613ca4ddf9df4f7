// Command-line front end: decompose, flow, metrics, strain, scanline, synth.
//
// Every subcommand accepts --config <file.json>; config values fill in flags
// the user did not pass explicitly (flags win). Numeric outputs are float32
// raw volumes with JSON sidecars; each run also writes a machine-readable
// report with echoed parameters, per-level records, and input checksums.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morphflow/errors.hpp"
#include "morphflow/io.hpp"
#include "morphflow/metrics.hpp"
#include "morphflow/morphflow.hpp"
#include "morphflow/parallel.hpp"
#include "morphflow/synth.hpp"

namespace mf = morphflow;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mf::IoError("cannot open for checksum: " + path);
  std::uint64_t hash = 1469598103934665603ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

ordered_json load_config(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  std::ifstream in(path);
  if (!in) throw mf::IoError("cannot open config: " + path);
  ordered_json cfg = ordered_json::parse(in, nullptr, true);
  if (!cfg.is_object()) throw mf::ValidationError("config must be a JSON object");
  return cfg;
}

/// Config values fill in options the command line left untouched.
template <typename T>
void merge_config(const CLI::App& cmd, const ordered_json& cfg,
                  const std::string& flag, const std::string& key, T& value) {
  if (cmd.count(flag) == 0 && cfg.contains(key)) {
    value = cfg.at(key).get<T>();
  }
}

struct InputMeta {
  std::vector<int> extents;
  std::string dtype = "uint8";
};

void add_meta_flags(CLI::App* cmd, InputMeta& meta) {
  cmd->add_option("--extents", meta.extents,
                  "Raw input extents nx ny nz (needed when no sidecar exists)")
      ->expected(3);
  cmd->add_option("--dtype", meta.dtype,
                  "Raw input sample type: uint8, uint16, float32");
}

mf::Volume load_input(const std::string& path, const InputMeta& meta) {
  if (std::filesystem::exists(path + ".json")) {
    return mf::load_volume(path);
  }
  if (meta.extents.size() != 3) {
    throw mf::ValidationError(path +
                              ": no sidecar found; pass --extents (and --dtype)");
  }
  mf::VolumeMeta vm;
  vm.extents = {meta.extents[0], meta.extents[1], meta.extents[2]};
  vm.dtype = mf::raw_dtype_from_string(meta.dtype);
  return mf::load_raw(path, vm);
}

ordered_json lattice_json(const mf::LatticeDescriptor& lat) {
  return ordered_json{{"kind", mf::to_string(lat.kind)},
                      {"scale", lat.scale},
                      {"extents", lat.extents},
                      {"level", lat.level}};
}

ordered_json trace_json(const mf::RunTrace& trace) {
  ordered_json levels = ordered_json::array();
  for (const auto& st : trace.stages) {
    levels.push_back(ordered_json{{"level", st.level},
                                  {"lattice", mf::to_string(st.lattice_kind)},
                                  {"extents", st.extents},
                                  {"energy_first_warp", st.energy_first},
                                  {"energy_last_warp", st.energy_last},
                                  {"wall_ms", st.wall_ms}});
  }
  return levels;
}

void write_json(const std::string& path, const ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw mf::IoError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

/// 8-bit binary PGM of one z-slice, values linearly mapped from [lo, hi].
void write_pgm_slice(const std::string& path, const std::vector<double>& data,
                     const mf::LatticeDescriptor& lat, int k, double lo,
                     double hi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mf::IoError("cannot write " + path);
  const int nx = lat.extents[0], ny = lat.extents[1];
  out << "P5\n" << nx << " " << ny << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = data[static_cast<std::size_t>(lat.linear(i, j, k))];
      const double t = std::clamp((v - lo) / span, 0.0, 1.0);
      out.put(static_cast<char>(static_cast<int>(t * 255.0 + 0.5)));
    }
  }
}

ordered_json residual_stats(const mf::Volume& res) {
  std::vector<double> sorted = res.data;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const std::size_t n = sorted.size();
  const std::size_t q90 = std::min(n - 1, static_cast<std::size_t>(0.9 * n));
  return ordered_json{{"mean", sum / static_cast<double>(n)},
                      {"max", sorted.back()},
                      {"quantile_90", sorted[q90]}};
}

int run_decompose(const CLI::App& cmd, const ordered_json& cfg,
                  std::string input, InputMeta meta, int levels,
                  std::string mode_name, std::string out_prefix) {
  merge_config(cmd, cfg, "--input", "input", input);
  merge_config(cmd, cfg, "--levels", "levels", levels);
  merge_config(cmd, cfg, "--mode", "mode", mode_name);
  merge_config(cmd, cfg, "--out-prefix", "out_prefix", out_prefix);
  const mf::LiftingMode mode = mf::lifting_mode_from_string(mode_name);

  const mf::Volume vol = load_input(input, meta);
  const mf::WaveletDecomposition deco = mf::analyze(vol, levels, mode);

  ordered_json manifest_levels = ordered_json::array();
  ordered_json outputs = ordered_json::array();
  mf::Volume approx = deco.coarsest;
  for (int lv = levels; lv >= 0; --lv) {
    const std::string path = out_prefix + "_L" + std::to_string(lv) + ".raw";
    mf::save_raw(approx, path);
    outputs.push_back(path);
    manifest_levels.push_back(
        ordered_json{{"level", lv}, {"lattice", lattice_json(approx.lattice)},
                     {"file", path}});
    if (lv > 0) {
      approx = mf::synthesize_step(
          approx, deco.details[static_cast<std::size_t>(levels - lv)], mode);
    }
  }

  ordered_json manifest{{"command", "decompose"},
                        {"parameters",
                         ordered_json{{"input", input},
                                      {"levels", levels},
                                      {"mode", mf::to_string(mode)}}},
                        {"levels", manifest_levels},
                        {"outputs", outputs},
                        {"version", kVersion},
                        {"input_checksums",
                         ordered_json{{input, fnv1a64_file(input)}}}};
  write_json(out_prefix + "_manifest.json", manifest);
  std::cout << out_prefix + "_manifest.json" << "\n";
  return 0;
}

int run_flow(const CLI::App& cmd, const ordered_json& cfg, std::string fixed_path,
             std::string moving_path, InputMeta meta, mf::MorphFlowConfig config,
             std::string mode_name, std::string pyramid_name,
             std::string out_prefix) {
  merge_config(cmd, cfg, "--fixed", "fixed", fixed_path);
  merge_config(cmd, cfg, "--moving", "moving", moving_path);
  merge_config(cmd, cfg, "--l-start", "l_start", config.l_start);
  merge_config(cmd, cfg, "--l-end", "l_end", config.l_end);
  merge_config(cmd, cfg, "--tau", "tau", config.solver.tau);
  merge_config(cmd, cfg, "--lambda", "lambda", config.solver.lambda);
  merge_config(cmd, cfg, "--theta", "theta", config.solver.theta);
  merge_config(cmd, cfg, "--warps", "warps", config.solver.warps);
  merge_config(cmd, cfg, "--iters", "iters", config.solver.inner_iters);
  merge_config(cmd, cfg, "--mode", "mode", mode_name);
  merge_config(cmd, cfg, "--pyramid", "pyramid", pyramid_name);
  merge_config(cmd, cfg, "--out-prefix", "out_prefix", out_prefix);
  config.mode = mf::lifting_mode_from_string(mode_name);
  const mf::PyramidKind pyramid = mf::pyramid_kind_from_string(pyramid_name);

  const mf::Volume fixed = load_input(fixed_path, meta);
  const mf::Volume moving = load_input(moving_path, meta);

  mf::RunTrace trace;
  const mf::DisplacementField field =
      mf::run_baseline(fixed, moving, pyramid, config, &trace);
  mf::save_field(field, out_prefix);

  ordered_json report{
      {"command", "flow"},
      {"parameters",
       ordered_json{{"fixed", fixed_path},
                    {"moving", moving_path},
                    {"l_start", config.l_start},
                    {"l_end", config.l_end},
                    {"mode", mf::to_string(config.mode)},
                    {"pyramid", mf::to_string(pyramid)},
                    {"tau", config.solver.tau},
                    {"lambda", config.solver.lambda},
                    {"theta", config.solver.theta},
                    {"warps", config.solver.warps},
                    {"iters", config.solver.inner_iters}}},
      {"levels", trace_json(trace)},
      {"outputs",
       ordered_json::array({out_prefix + "_u.raw", out_prefix + "_v.raw",
                            out_prefix + "_w.raw", out_prefix + "_field.json"})},
      {"version", kVersion},
      {"input_checksums",
       ordered_json{{fixed_path, fnv1a64_file(fixed_path)},
                    {moving_path, fnv1a64_file(moving_path)}}}};
  write_json(out_prefix + "_report.json", report);
  std::cout << out_prefix + "_report.json" << "\n";
  return 0;
}

int run_metrics(const CLI::App& cmd, const ordered_json& cfg, std::string a_path,
                std::string b_path, InputMeta meta, std::string field_prefix,
                int ssim_window, int ssim_levels, std::string residual_out,
                std::string report_path) {
  merge_config(cmd, cfg, "--a", "a", a_path);
  merge_config(cmd, cfg, "--b", "b", b_path);
  merge_config(cmd, cfg, "--field", "field", field_prefix);
  merge_config(cmd, cfg, "--ssim-window", "ssim_window", ssim_window);
  merge_config(cmd, cfg, "--ssim-levels", "ssim_levels", ssim_levels);
  merge_config(cmd, cfg, "--residual-out", "residual_out", residual_out);
  merge_config(cmd, cfg, "--report", "report", report_path);

  const mf::Volume a = load_input(a_path, meta);
  const mf::Volume b = load_input(b_path, meta);
  std::optional<mf::DisplacementField> field;
  if (!field_prefix.empty()) field = mf::load_field(field_prefix);

  const mf::Volume res =
      mf::residual(a, b, field ? &*field : nullptr);
  const mf::Volume compare = field ? mf::warp(b, *field) : b;

  mf::SsimParams sp;
  sp.window_edge = ssim_window;
  sp.levels_m = ssim_levels;

  ordered_json report{
      {"command", "metrics"},
      {"parameters",
       ordered_json{{"a", a_path},
                    {"b", b_path},
                    {"field", field_prefix},
                    {"ssim_window", ssim_window},
                    {"ssim_levels", ssim_levels}}},
      {"rmse", mf::rmse(a, compare)},
      {"ssim", mf::ssim(a, compare, sp)},
      {"ml_ssim", mf::ml_ssim(a, compare, sp)},
      {"residual", residual_stats(res)},
      {"outputs", ordered_json::array()},
      {"version", kVersion},
      {"input_checksums",
       ordered_json{{a_path, fnv1a64_file(a_path)},
                    {b_path, fnv1a64_file(b_path)}}}};
  if (!residual_out.empty()) {
    mf::save_raw(res, residual_out);
    report["outputs"].push_back(residual_out);
  }
  const std::string doc = report.dump(2) + "\n";
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw mf::IoError("cannot write " + report_path);
    out << doc;
  }
  std::cout << doc;
  return 0;
}

int run_strain(const CLI::App& cmd, const ordered_json& cfg,
               std::string field_prefix, std::string out_prefix) {
  merge_config(cmd, cfg, "--field", "field", field_prefix);
  merge_config(cmd, cfg, "--out-prefix", "out_prefix", out_prefix);

  const mf::DisplacementField field = mf::load_field(field_prefix);
  const mf::StrainField st = mf::strain(field);

  const std::pair<const char*, const std::vector<double>*> comps[6] = {
      {"e11", &st.e11}, {"e22", &st.e22}, {"e33", &st.e33},
      {"e12", &st.e12}, {"e13", &st.e13}, {"e23", &st.e23}};
  ordered_json outputs = ordered_json::array();
  for (const auto& [name, data] : comps) {
    mf::Volume comp(st.lattice);
    comp.data = *data;
    const std::string path = out_prefix + "_" + name + ".raw";
    mf::save_raw(comp, path);
    outputs.push_back(path);
  }
  const int k_mid = st.lattice.extents[2] / 2;
  double lo = st.e33.front(), hi = st.e33.front();
  for (double v : st.e33) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const std::string pgm =
      out_prefix + "_e33_slice" + std::to_string(k_mid) + ".pgm";
  write_pgm_slice(pgm, st.e33, st.lattice, k_mid, lo, hi);
  outputs.push_back(pgm);

  ordered_json report{{"command", "strain"},
                      {"parameters", ordered_json{{"field", field_prefix}}},
                      {"e33_range", ordered_json{{"min", lo}, {"max", hi}}},
                      {"outputs", outputs},
                      {"version", kVersion}};
  write_json(out_prefix + "_report.json", report);
  std::cout << out_prefix + "_report.json" << "\n";
  return 0;
}

int run_scanline(const CLI::App& cmd, const ordered_json& cfg, std::string input,
                 InputMeta meta, std::string axis_name, int slice, int line,
                 std::string out_path) {
  merge_config(cmd, cfg, "--input", "input", input);
  merge_config(cmd, cfg, "--axis", "axis", axis_name);
  merge_config(cmd, cfg, "--slice", "slice", slice);
  merge_config(cmd, cfg, "--line", "line", line);
  merge_config(cmd, cfg, "--out", "out", out_path);

  mf::Axis axis;
  if (axis_name == "x") axis = mf::Axis::X;
  else if (axis_name == "y") axis = mf::Axis::Y;
  else if (axis_name == "z") axis = mf::Axis::Z;
  else throw mf::ValidationError("axis must be x, y, or z");

  const mf::Volume vol = load_input(input, meta);
  const auto samples = mf::scanline(vol, axis, slice, line);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw mf::IoError("cannot write " + out_path);
    out = &file;
  }
  *out << "coordinate,grey\n";
  for (const auto& [coord, grey] : samples) {
    *out << coord << "," << grey << "\n";
  }
  return 0;
}

int run_synth(const CLI::App& cmd, const ordered_json& cfg, std::string preset,
              mf::PhantomSpec spec, std::vector<int> extents,
              std::string crack_axis, double crack_position,
              double crack_opening, double crack_grey,
              std::vector<double> translate, double crack_open_delta,
              std::string out_prefix) {
  merge_config(cmd, cfg, "--preset", "preset", preset);
  merge_config(cmd, cfg, "--seed", "seed", spec.seed);
  merge_config(cmd, cfg, "--out-prefix", "out_prefix", out_prefix);

  auto parse_axis = [](const std::string& name) {
    if (name == "x") return mf::Axis::X;
    if (name == "y") return mf::Axis::Y;
    if (name == "z") return mf::Axis::Z;
    throw mf::ValidationError("axis must be x, y, or z");
  };

  bool do_crack_open = false;
  mf::Axis deform_axis = mf::Axis::Z;
  double deform_position = 0.0;
  double deform_delta = 0.0;

  if (!preset.empty()) {
    if (preset == "crack32" || preset == "crack64") {
      const int n = preset == "crack32" ? 32 : 64;
      spec.extents = {n, n, n};
      spec.grain_count = n == 32 ? 12 : 60;
      spec.crack = mf::CrackSpec{mf::Axis::Z, n / 2.0, 2.0, 0.05};
      do_crack_open = true;
      deform_axis = mf::Axis::Z;
      deform_position = n / 2.0;
      deform_delta = 2.0;
    } else if (preset == "grains64") {
      spec.extents = {64, 64, 64};
      spec.grain_count = 60;
      translate = {1.0, 0.0, 0.0};
    } else {
      throw mf::ValidationError("unknown preset: " + preset);
    }
  } else {
    if (cmd.count("--extents") || cfg.contains("extents")) {
      merge_config(cmd, cfg, "--extents", "extents", extents);
      if (extents.size() != 3) {
        throw mf::ValidationError("--extents needs three values");
      }
      spec.extents = {extents[0], extents[1], extents[2]};
    }
    merge_config(cmd, cfg, "--grains", "grains", spec.grain_count);
    merge_config(cmd, cfg, "--radius-min", "radius_min", spec.grain_radius_min);
    merge_config(cmd, cfg, "--radius-max", "radius_max", spec.grain_radius_max);
    merge_config(cmd, cfg, "--grain-grey", "grain_grey", spec.grain_grey);
    merge_config(cmd, cfg, "--matrix-grey", "matrix_grey", spec.matrix_grey);
    merge_config(cmd, cfg, "--smooth", "smooth", spec.smooth_sigma);
    merge_config(cmd, cfg, "--noise", "noise", spec.noise_sigma);
    if (cmd.count("--crack-position") || cfg.contains("crack_position")) {
      merge_config(cmd, cfg, "--crack-axis", "crack_axis", crack_axis);
      merge_config(cmd, cfg, "--crack-position", "crack_position",
                   crack_position);
      merge_config(cmd, cfg, "--crack-opening", "crack_opening", crack_opening);
      merge_config(cmd, cfg, "--crack-grey", "crack_grey", crack_grey);
      spec.crack = mf::CrackSpec{parse_axis(crack_axis), crack_position,
                                 crack_opening, crack_grey};
    }
    if (cmd.count("--crack-open") || cfg.contains("crack_open")) {
      merge_config(cmd, cfg, "--crack-open", "crack_open", crack_open_delta);
      if (!spec.crack) {
        throw mf::ValidationError("--crack-open requires a crack definition");
      }
      do_crack_open = true;
      deform_axis = spec.crack->axis;
      deform_position = spec.crack->position;
      deform_delta = crack_open_delta;
    } else if (cmd.count("--translate") || cfg.contains("translate")) {
      merge_config(cmd, cfg, "--translate", "translate", translate);
      if (translate.size() != 3) {
        throw mf::ValidationError("--translate needs three values");
      }
    }
  }

  const mf::Volume fixed = mf::make_phantom(spec);
  mf::Volume moving = fixed;
  mf::DisplacementField truth(fixed.lattice);
  if (do_crack_open) {
    std::tie(moving, truth) =
        mf::deform_crack_open(fixed, deform_axis, deform_position, deform_delta);
  } else if (translate.size() == 3 &&
             (translate[0] != 0 || translate[1] != 0 || translate[2] != 0)) {
    std::tie(moving, truth) = mf::deform_translate(
        fixed, {translate[0], translate[1], translate[2]});
  }

  mf::save_raw(fixed, out_prefix + "_fixed.raw");
  mf::save_raw(moving, out_prefix + "_moving.raw");
  mf::save_field(truth, out_prefix + "_truth");

  ordered_json crack_doc = nullptr;
  if (spec.crack) {
    const char* names[3] = {"x", "y", "z"};
    crack_doc = ordered_json{{"axis", names[static_cast<int>(spec.crack->axis)]},
                             {"position", spec.crack->position},
                             {"opening", spec.crack->opening},
                             {"grey", spec.crack->grey}};
  }
  ordered_json doc{
      {"command", "synth"},
      {"parameters",
       ordered_json{{"preset", preset},
                    {"extents", spec.extents},
                    {"grain_count", spec.grain_count},
                    {"grain_radius_min", spec.grain_radius_min},
                    {"grain_radius_max", spec.grain_radius_max},
                    {"grain_grey", spec.grain_grey},
                    {"matrix_grey", spec.matrix_grey},
                    {"crack", crack_doc},
                    {"smooth_sigma", spec.smooth_sigma},
                    {"noise_sigma", spec.noise_sigma},
                    {"seed", spec.seed},
                    {"crack_open", do_crack_open ? ordered_json(deform_delta)
                                                 : ordered_json(nullptr)},
                    {"translate", translate.size() == 3
                                      ? ordered_json(translate)
                                      : ordered_json(nullptr)}}},
      {"outputs",
       ordered_json::array({out_prefix + "_fixed.raw", out_prefix + "_moving.raw",
                            out_prefix + "_truth_u.raw",
                            out_prefix + "_truth_v.raw",
                            out_prefix + "_truth_w.raw"})},
      {"version", kVersion}};
  write_json(out_prefix + "_spec.json", doc);
  std::cout << out_prefix + "_spec.json" << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volumetric optical flow with morphological multiresolution"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  int threads = 0;
  app.add_option("--config", config_path,
                 "JSON config; values fill in flags not given explicitly")
      ->envname("MORPHFLOW_CONFIG");
  app.add_option("--threads", threads, "Cap on worker threads (0 = hardware)");

  // decompose
  auto* dec = app.add_subcommand("decompose",
                                 "Multi-level lifting decomposition of a volume");
  std::string dec_input, dec_mode = "min", dec_prefix = "decomposed";
  int dec_levels = 3;
  InputMeta dec_meta;
  dec->add_option("--input", dec_input, "Input volume");
  add_meta_flags(dec, dec_meta);
  dec->add_option("--levels", dec_levels, "Number of lifting steps");
  dec->add_option("--mode", dec_mode, "Lifting mode: min or max");
  dec->add_option("--out-prefix", dec_prefix, "Output path prefix");

  // flow
  auto* flow = app.add_subcommand("flow", "Estimate a 3D displacement field");
  std::string flow_fixed, flow_moving, flow_mode = "min",
              flow_pyramid = "morph", flow_prefix = "flow";
  InputMeta flow_meta;
  mf::MorphFlowConfig flow_config;
  flow->add_option("--fixed", flow_fixed, "Fixed (reference) volume");
  flow->add_option("--moving", flow_moving, "Moving volume");
  add_meta_flags(flow, flow_meta);
  flow->add_option("--l-start", flow_config.l_start, "Coarsest lifting depth");
  flow->add_option("--l-end", flow_config.l_end, "Finest lifting depth");
  flow->add_option("--mode", flow_mode, "Lifting mode: min or max");
  flow->add_option("--tau", flow_config.solver.tau, "Primal step size");
  flow->add_option("--lambda", flow_config.solver.lambda, "Data weight");
  flow->add_option("--theta", flow_config.solver.theta, "Coupling parameter");
  flow->add_option("--warps", flow_config.solver.warps, "Warps per level");
  flow->add_option("--iters", flow_config.solver.inner_iters,
                   "Inner iterations per warp");
  flow->add_option("--pyramid", flow_pyramid,
                   "Multiresolution scheme: morph, gauss, haar");
  flow->add_option("--out-prefix", flow_prefix, "Output path prefix");

  // metrics
  auto* met = app.add_subcommand("metrics", "Residual, RMSE, SSIM, ML-SSIM");
  std::string met_a, met_b, met_field, met_residual_out, met_report;
  InputMeta met_meta;
  int met_window = 7, met_levels = 3;
  met->add_option("--a", met_a, "Reference volume");
  met->add_option("--b", met_b, "Comparison volume");
  add_meta_flags(met, met_meta);
  met->add_option("--field", met_field,
                  "Displacement field prefix; b is warped before comparison");
  met->add_option("--ssim-window", met_window, "SSIM window edge");
  met->add_option("--ssim-levels", met_levels, "ML-SSIM level count");
  met->add_option("--residual-out", met_residual_out,
                  "Write the residual volume here");
  met->add_option("--report", met_report, "Also write the JSON report here");

  // strain
  auto* str = app.add_subcommand("strain",
                                 "Strain tensor of a displacement field");
  std::string str_field, str_prefix = "strain";
  str->add_option("--field", str_field, "Displacement field prefix");
  str->add_option("--out-prefix", str_prefix, "Output path prefix");

  // scanline
  auto* scan = app.add_subcommand("scanline", "Grey-value profile as CSV");
  std::string scan_input, scan_axis = "x", scan_out;
  InputMeta scan_meta;
  int scan_slice = 0, scan_line = 0;
  scan->add_option("--input", scan_input, "Input volume");
  add_meta_flags(scan, scan_meta);
  scan->add_option("--axis", scan_axis, "Profile axis: x, y, or z");
  scan->add_option("--slice", scan_slice, "Slice index");
  scan->add_option("--line", scan_line, "Line index inside the slice");
  scan->add_option("--out", scan_out, "CSV path (default: stdout)");

  // synth
  auto* syn = app.add_subcommand("synth",
                                 "Generate a phantom pair with ground truth");
  std::string syn_preset, syn_crack_axis = "z", syn_prefix = "phantom";
  mf::PhantomSpec syn_spec;
  std::vector<int> syn_extents;
  std::vector<double> syn_translate;
  double syn_crack_position = 0.0, syn_crack_opening = 2.0,
         syn_crack_grey = 0.05, syn_crack_open = 0.0;
  syn->add_option("--preset", syn_preset,
                  "Named configuration: crack32, crack64, grains64");
  syn->add_option("--extents", syn_extents, "Volume extents nx ny nz")
      ->expected(3);
  syn->add_option("--grains", syn_spec.grain_count, "Number of spheres");
  syn->add_option("--radius-min", syn_spec.grain_radius_min, "Min radius");
  syn->add_option("--radius-max", syn_spec.grain_radius_max, "Max radius");
  syn->add_option("--grain-grey", syn_spec.grain_grey, "Sphere grey value");
  syn->add_option("--matrix-grey", syn_spec.matrix_grey, "Background grey");
  syn->add_option("--crack-axis", syn_crack_axis, "Crack plane normal axis");
  syn->add_option("--crack-position", syn_crack_position,
                  "Crack plane coordinate");
  syn->add_option("--crack-opening", syn_crack_opening, "Crack slab width");
  syn->add_option("--crack-grey", syn_crack_grey, "Crack grey value");
  syn->add_option("--smooth", syn_spec.smooth_sigma,
                  "Gaussian blur sigma applied before noise");
  syn->add_option("--noise", syn_spec.noise_sigma, "Gaussian noise sigma");
  syn->add_option("--seed", syn_spec.seed, "RNG seed");
  syn->add_option("--translate", syn_translate,
                  "Rigid ground-truth shift tx ty tz")
      ->expected(3);
  syn->add_option("--crack-open", syn_crack_open,
                  "Opening displacement across the crack plane");
  syn->add_option("--out-prefix", syn_prefix, "Output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const ordered_json cfg = load_config(config_path);
    if (app.count("--threads") == 0 && cfg.contains("threads")) {
      threads = cfg.at("threads").get<int>();
    }
    if (threads > 0) mf::set_thread_cap(threads);

    if (dec->parsed()) {
      return run_decompose(*dec, cfg, dec_input, dec_meta, dec_levels, dec_mode,
                           dec_prefix);
    }
    if (flow->parsed()) {
      return run_flow(*flow, cfg, flow_fixed, flow_moving, flow_meta,
                      flow_config, flow_mode, flow_pyramid, flow_prefix);
    }
    if (met->parsed()) {
      return run_metrics(*met, cfg, met_a, met_b, met_meta, met_field,
                         met_window, met_levels, met_residual_out, met_report);
    }
    if (str->parsed()) return run_strain(*str, cfg, str_field, str_prefix);
    if (scan->parsed()) {
      return run_scanline(*scan, cfg, scan_input, scan_meta, scan_axis,
                          scan_slice, scan_line, scan_out);
    }
    if (syn->parsed()) {
      return run_synth(*syn, cfg, syn_preset, syn_spec, syn_extents,
                       syn_crack_axis, syn_crack_position, syn_crack_opening,
                       syn_crack_grey, syn_translate, syn_crack_open,
                       syn_prefix);
    }
    std::cerr << "error: no subcommand given\n";
    return 2;
  } catch (const mf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mf::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
