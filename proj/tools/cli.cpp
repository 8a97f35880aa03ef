#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bev/bin_codec.hpp"
#include "bev/errors.hpp"
#include "bev/eval.hpp"
#include "bev/raster.hpp"
#include "bev/records.hpp"
#include "bev/rectify.hpp"
#include "bev/sphere_codec.hpp"
#include "bev/synthetic_camera.hpp"
#include "bev/warp.hpp"

namespace bev::cli {

namespace {

using nlohmann::json;
constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Malformed flag values; reported as usage errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

Vec3 parse_line_flag(const std::string& text, const char* flag) {
  const auto v = parse_list(text, flag);
  if (v.size() != 3) throw UsageError(std::string(flag) + " expects a,b,c");
  return {v[0], v[1], v[2]};
}

Vec3 parse_point_flag(const std::string& text, const char* flag) {
  const auto v = parse_list(text, flag);
  if (v.size() == 2) return {v[0], v[1], 1.0};
  if (v.size() == 3) return {v[0], v[1], v[2]};
  throw UsageError(std::string(flag) + " expects x,y or x,y,w");
}

ImageSize parse_size(const std::string& text, const char* flag) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0;
    std::size_t b = 0;
    const int w = std::stoi(text.substr(0, x), &a);
    const int h = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1 || w < 1 || h < 1) throw std::invalid_argument(text);
    return {w, h};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects WxH with positive integers, got '" + text + "'");
  }
}

json matrix_json(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) a.push_back(m(i, k));
  return a;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_output(path);
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

/// f, tilt and roll from a horizon and a finite vertical vanishing point.
std::optional<CameraParams> recover_camera(const GeometryRecord& g) {
  if (!g.vertical_vp) return std::nullopt;
  try {
    const FocalEstimate est = focal_from_horizon_and_vp(g.horizon, *g.vertical_vp, g.image);
    const Vec2 p = g.image.centre();
    const double tilt =
        0.5 * (tilt_from_vertical_vp(est.focal, *g.vertical_vp, p) + tilt_from_horizon(est.focal, g.horizon, p));
    return CameraParams{est.focal, tilt, roll_from_horizon(g.horizon)};
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

std::optional<CameraParams> camera_of(const GeometryRecord& g) { return g.camera ? g.camera : recover_camera(g); }

// ---------------------------------------------------------------- rectify

struct RectifyOptions {
  std::string image;
  std::string size;
  std::string horizon;
  std::string vpz;
  std::string vpx;
  std::string from;
  std::string id;
  std::optional<double> focal;
  std::optional<double> fov_deg;
  std::optional<double> align;
  std::string canvas{"1000x1000"};
  double depth_ratio{20.0};
  bool nearest{false};
  bool alpha{false};
  unsigned threads{1};
  std::string out;
  std::string sidecar;
  int benchmark{0};
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

int cmd_rectify(const RectifyOptions& o, std::ostream& out) {
  RectifyInput in;
  std::optional<RasterImage> src;
  if (!o.image.empty()) src = read_image(o.image);

  if (!o.from.empty()) {
    const std::vector<GeometryRecord> recs = read_geometry(o.from);
    const GeometryRecord* pick = nullptr;
    for (const GeometryRecord& r : recs) {
      if (o.id.empty() || r.id == o.id) {
        pick = &r;
        break;
      }
    }
    if (pick == nullptr) throw FormatError(o.from + ": no record" + (o.id.empty() ? std::string() : " with id '" + o.id + "'"));
    in.horizon = pick->horizon;
    in.vertical_vp = pick->vertical_vp;
    in.image = pick->image;
    in.align_angle = pick->theta_align;
  }
  if (!o.horizon.empty()) in.horizon = HomogeneousLine{parse_line_flag(o.horizon, "--horizon")};
  else if (o.from.empty()) throw UsageError("rectify needs --horizon or --from");
  if (!o.vpz.empty()) in.vertical_vp = HomogeneousPoint{parse_point_flag(o.vpz, "--vpz")};

  if (!o.size.empty()) in.image = parse_size(o.size, "--size");
  else if (src) in.image = {src->width(), src->height()};
  if (src && (src->width() != in.image.width || src->height() != in.image.height)) {
    throw UsageError("image is " + std::to_string(src->width()) + "x" + std::to_string(src->height()) +
                     " but the geometry refers to " + std::to_string(in.image.width) + "x" + std::to_string(in.image.height));
  }
  if (in.image.width < 1) throw UsageError("rectify needs --image or --size");

  if (o.focal && o.fov_deg) throw UsageError("--focal and --fov are mutually exclusive");
  if (o.focal) in.focal = *o.focal;
  if (o.fov_deg) in.focal = focal_from_fov(*o.fov_deg * kDegToRad, in.image.width);
  if (o.align && !o.vpx.empty()) throw UsageError("--align and --vpx are mutually exclusive");
  if (o.align) in.align_angle = *o.align;
  if (!o.vpx.empty()) {
    in.align_angle = encode_horizontal_vp(in.horizon, HomogeneousPoint{parse_point_flag(o.vpx, "--vpx")},
                                          CodecFrame(in.image));
  }
  const ImageSize canvas = parse_size(o.canvas, "--canvas");
  in.canvas = {canvas.width, canvas.height, o.depth_ratio};

  const auto t0 = std::chrono::steady_clock::now();
  RectifyResult r = rectify(in);
  const double geometry_ms = elapsed_ms(t0);

  json side = {
      {"focal", r.focal},
      {"fov_deg", fov_from_focal(r.focal, in.image.width) / kDegToRad},
      {"tilt", r.tilt},
      {"roll", r.roll},
      {"tilt_from_vp", r.tilt_from_vp ? json(*r.tilt_from_vp) : json(nullptr)},
      {"tilt_from_horizon", r.tilt_from_horizon ? json(*r.tilt_from_horizon) : json(nullptr)},
      {"collinearity_residual", r.collinearity_residual},
      {"condition", std::isfinite(r.condition) ? json(r.condition) : json(nullptr)},
      {"align_rotation", r.align_rotation},
      {"scale", r.scale},
      {"canvas", {r.canvas_width, r.canvas_height}},
      {"retained", {r.retained.v.x(), r.retained.v.y(), r.retained.v.z()}},
      {"H", matrix_json(r.H.m)},
      {"H_rot", matrix_json(r.H_rot.m)},
  };

  WarpSpec spec;
  spec.H = r.H;
  spec.width = r.canvas_width;
  spec.height = r.canvas_height;
  spec.mode = o.nearest ? Sampling::Nearest : Sampling::Bilinear;
  spec.retained = r.retained;
  spec.alpha_output = o.alpha;
  spec.threads = o.threads;

  if (src && !o.out.empty()) {
    const RasterImage dst = warp(*src, spec);
    write_image(dst, o.out);
  }
  const std::string sidecar = !o.sidecar.empty() ? o.sidecar : (o.out.empty() ? std::string() : o.out + ".json");
  if (sidecar.empty()) out << side.dump(2) << '\n';
  else write_text(sidecar, side.dump(2) + "\n");

  if (o.benchmark > 0) {
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < o.benchmark; ++i) r = rectify(in);
    const double geo = elapsed_ms(start) / o.benchmark;
    out << "geometry: " << geo << " ms/image (first call " << geometry_ms << " ms)\n";
    if (src) {
      start = std::chrono::steady_clock::now();
      for (int i = 0; i < o.benchmark; ++i) (void)warp(*src, spec);
      out << "warp " << src->width() << "x" << src->height() << " -> " << spec.width << "x" << spec.height << ", "
          << spec.threads << " thread(s): " << elapsed_ms(start) / o.benchmark << " ms/image\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- generate

int cmd_generate(std::size_t n, std::uint64_t seed, std::optional<double> min_tilt_deg, const std::string& path,
                 std::ostream& out) {
  SamplingConfig cfg;
  cfg.seed = seed;
  if (min_tilt_deg) {
    cfg.min_tilt = *min_tilt_deg * kDegToRad;
    if (!(cfg.min_tilt >= 0.0 && cfg.min_tilt < cfg.max_tilt)) throw UsageError("--min-tilt-deg must lie in [0, 40)");
  }
  const DatasetManifest manifest{cfg, seed, n};
  const std::vector<AnnotationRecord> records = generate_dataset(cfg, n);
  if (path.empty() || path == "-") {
    write_dataset(out, manifest, records);
  } else {
    std::ofstream file = open_output(path);
    write_dataset(file, manifest, records);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- encode / decode

BinSpec alignment_bins(int bins) { return {bins, 0.5 * std::numbers::pi}; }

int cmd_encode(const std::string& in_path, const std::string& out_path, int bins, bool one_hot, std::ostream& out,
               std::ostream& err) {
  const BinSpec spec{bins, 1.0};
  const BinSpec align = alignment_bins(bins);
  spec.validate();
  const Dataset data = read_dataset(in_path);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty() && out_path != "-") {
    file = open_output(out_path);
    sink = &file;
  }
  std::size_t clamped = 0;
  for (const AnnotationRecord& rec : data.records) {
    const double values[4] = {rec.encoded.horizon.qx, rec.encoded.horizon.qy, rec.encoded.vertical_vp.qx,
                              rec.encoded.vertical_vp.qy};
    BinTarget targets[4];
    for (int i = 0; i < 4; ++i) {
      targets[i] = encode_scalar(values[i], spec);
      clamped += targets[i].clamped ? 1 : 0;
    }
    const BinTarget a = encode_scalar(rec.theta_align, align);
    clamped += a.clamped ? 1 : 0;
    if (one_hot) {
      ProbabilityRecord p;
      p.id = rec.camera_id;
      p.image = rec.camera.intrinsics.size;
      for (int i = 0; i < 4; ++i) {
        p.probabilities[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(bins), 0.0);
        p.probabilities[static_cast<std::size_t>(i)][static_cast<std::size_t>(targets[i].index)] = 1.0;
      }
      p.alignment = std::vector<double>(static_cast<std::size_t>(bins), 0.0);
      (*p.alignment)[static_cast<std::size_t>(a.index)] = 1.0;
      *sink << probabilities_to_json(p) << '\n';
    } else {
      json j = {{"id", rec.camera_id},
                {"bins", {targets[0].index, targets[1].index, targets[2].index, targets[3].index}},
                {"alignment", a.index}};
      *sink << j.dump() << '\n';
    }
  }
  if (!*sink) throw IoError("failed writing encoded targets");
  if (clamped > 0) err << "encode: " << clamped << " value(s) clamped to the boundary bins\n";
  return kExitOk;
}

// Quantized codes on or past the circle are the limit of lines approaching the principal
// point; the library refuses them, but for model output that limit is the useful answer.
HomogeneousLine decode_horizon(const EncodedLine& q, const CodecFrame& frame) {
  try {
    return decode_line(q, frame).normalized();
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::BoundaryUndefined || q.norm() == 0.0) throw;
    return frame.from_normalized_line(Vec3(q.qx, q.qy, 0.0)).normalized();
  }
}

int cmd_decode(const std::string& in_path, const std::string& out_path, int bins, int top_c, const std::string& size,
               std::ostream& out) {
  const BinSpec spec{bins, 1.0};
  const BinSpec align = alignment_bins(bins);
  spec.validate();
  std::optional<ImageSize> fallback;
  if (!size.empty()) fallback = parse_size(size, "--size");

  const std::vector<std::string> lines = read_lines(in_path);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty() && out_path != "-") {
    file = open_output(out_path);
    sink = &file;
  }
  for (std::size_t n = 0; n < lines.size(); ++n) {
    ProbabilityRecord p;
    try {
      p = probabilities_from_json(lines[n]);
    } catch (const FormatError& e) {
      throw FormatError(in_path + ":" + std::to_string(n + 1) + ": " + e.what());
    }
    GeometryRecord g;
    g.id = p.id;
    if (p.image) g.image = *p.image;
    else if (fallback) g.image = *fallback;
    else throw UsageError("record '" + p.id + "' has no width/height; pass --size");

    double q[4];
    for (std::size_t i = 0; i < 4; ++i) q[i] = decode_topc(p.probabilities[i], top_c, spec);
    const CodecFrame frame(g.image);
    g.horizon = decode_horizon({q[0], q[1]}, frame);
    // Bin centres can land just outside the disk; such codes mean a point at infinity.
    EncodedPoint vz{q[2], q[3]};
    if (const double n = vz.norm(); n > frame.radius) vz = {vz.qx * frame.radius / n, vz.qy * frame.radius / n};
    g.vertical_vp = decode_point(vz, frame);
    if (p.alignment) g.theta_align = decode_topc(*p.alignment, top_c, align);
    g.camera = recover_camera(g);
    *sink << geometry_to_json(g) << '\n';
  }
  if (!*sink) throw IoError("failed writing predictions");
  return kExitOk;
}

// ---------------------------------------------------------------- eval / video

int cmd_eval(const std::string& gt_path, const std::string& pred_path, double tau, const std::string& csv,
             const std::string& summary_path, std::ostream& out) {
  const std::vector<GeometryRecord> gt = read_geometry(gt_path);
  const std::vector<GeometryRecord> pred = read_geometry(pred_path);
  std::map<std::string, const GeometryRecord*> by_id;
  for (const GeometryRecord& p : pred) {
    if (!by_id.emplace(p.id, &p).second) throw FormatError(pred_path + ": duplicate id '" + p.id + "'");
  }
  if (gt.empty()) throw FormatError(gt_path + ": no records");

  EvaluationSummary s;
  std::vector<double> errors;
  errors.reserve(gt.size());
  ParameterErrors sum;
  for (const GeometryRecord& g : gt) {
    const auto it = by_id.find(g.id);
    if (it == by_id.end()) throw FormatError(pred_path + ": no prediction for '" + g.id + "'");
    const GeometryRecord& p = *it->second;
    errors.push_back(horizon_error(g.horizon, p.horizon, g.image));

    const auto gc = camera_of(g);
    const auto pc = camera_of(p);
    if (gc && pc) {
      const ParameterErrors e = parameter_errors(*gc, *pc, g.image);
      sum.fov_deg += e.fov_deg;
      sum.tilt_deg += e.tilt_deg;
      sum.roll_deg += e.roll_deg;
      ++s.parameter_samples;
    } else {
      ++s.failures;
    }
  }
  s.images = errors.size();
  s.curve = auc(errors, tau);
  double total = 0.0;
  for (double e : errors) total += e;
  s.mean_horizon_error = total / static_cast<double>(errors.size());
  if (s.parameter_samples > 0) {
    const double k = static_cast<double>(s.parameter_samples);
    s.mean_parameter_errors = {sum.fov_deg / k, sum.tilt_deg / k, sum.roll_deg / k};
  }

  out << format_report(s);
  if (!csv.empty()) write_text(csv, curve_csv(s.curve));
  if (!summary_path.empty()) {
    json j = {{"images", s.images},
              {"auc", s.curve.auc},
              {"cutoff", s.curve.cutoff},
              {"mean_horizon_error", s.mean_horizon_error},
              {"parameter_samples", s.parameter_samples},
              {"mean_fov_error_deg", s.mean_parameter_errors.fov_deg},
              {"mean_tilt_error_deg", s.mean_parameter_errors.tilt_deg},
              {"mean_roll_error_deg", s.mean_parameter_errors.roll_deg},
              {"failures", s.failures}};
    write_text(summary_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_video(const std::string& in_path, std::optional<double> ref_focal, const std::string& trace, std::ostream& out) {
  const std::vector<GeometryRecord> frames = read_geometry(in_path);
  std::vector<CameraParams> params;
  params.reserve(frames.size());
  std::size_t skipped = 0;
  for (const GeometryRecord& g : frames) {
    if (const auto c = camera_of(g)) params.push_back(*c);
    else ++skipped;
  }
  if (params.empty()) throw GeometryError(ErrorCode::EmptyInput, "no frame yields camera parameters");
  const RunningCameraEstimate est = video_average(params, ref_focal);
  const CameraParams m = est.mean();
  char line[200];
  std::snprintf(line, sizeof line, "frames %zu (skipped %zu)\nfocal %.6f\ntilt_deg %.6f\nroll_deg %.6f\n", est.frames(),
                skipped, m.focal, m.tilt / kDegToRad, m.roll / kDegToRad);
  out << line;
  if (!trace.empty()) {
    if (!ref_focal) throw UsageError("--trace requires --ref-focal");
    std::ostringstream csv;
    csv << "frames,relative_focal_error\n";
    csv.precision(10);
    const auto& t = est.focal_error_trace();
    for (std::size_t i = 0; i < t.size(); ++i) csv << (i + 1) << ',' << t[i] << '\n';
    write_text(trace, csv.str());
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bird's-eye-view rectification from horizon and vertical vanishing point"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bevtool 1.0");

  RectifyOptions ro;
  CLI::App* rect = app.add_subcommand("rectify", "Warp an image (or just compute H) to a bird's-eye view");
  rect->add_option("--image", ro.image, "Source image (PNG, PPM or PGM)");
  rect->add_option("--size", ro.size, "Image size WxH when no image is given");
  rect->add_option("--horizon", ro.horizon, "Horizon line a,b,c in pixels");
  rect->add_option("--vpz", ro.vpz, "Vertical vanishing point x,y[,w] in pixels");
  rect->add_option("--from", ro.from, "Take geometry from a dataset or prediction file");
  rect->add_option("--id", ro.id, "Record id to use with --from (default: first)");
  rect->add_option("--focal", ro.focal, "Known focal length in pixels");
  rect->add_option("--fov", ro.fov_deg, "Known horizontal field of view in degrees");
  rect->add_option("--align", ro.align, "Alignment angle of a horizontal vanishing point (radians)");
  rect->add_option("--vpx", ro.vpx, "Horizontal vanishing point x,y[,w] to align with the canvas x-axis");
  rect->add_option("--canvas", ro.canvas, "Canvas size WxH")->capture_default_str();
  rect->add_option("--depth-ratio", ro.depth_ratio, "Max far/near magnification ratio")->capture_default_str();
  rect->add_flag("--nearest", ro.nearest, "Nearest-neighbour sampling");
  rect->add_flag("--alpha", ro.alpha, "Emit an alpha channel (0 where unmapped)");
  rect->add_option("--threads", ro.threads, "Warp threads (0 = all cores)")->capture_default_str();
  rect->add_option("--out", ro.out, "Output image (.png, .ppm or .pgm)");
  rect->add_option("--sidecar", ro.sidecar, "Parameter record path (default: <out>.json, or stdout)");
  rect->add_option("--benchmark", ro.benchmark, "Repeat geometry and warp N times and report timings")
      ->check(CLI::NonNegativeNumber);

  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::optional<double> gen_min_tilt;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Sample synthetic cameras and write annotation records");
  gen->add_option("--n", gen_n, "Number of records")->required();
  gen->add_option("--seed", gen_seed, "Dataset seed")->capture_default_str();
  gen->add_option("--min-tilt-deg", gen_min_tilt, "Exclusive lower tilt bound in degrees");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::string enc_in;
  std::string enc_out;
  int enc_bins = 500;
  bool enc_one_hot = false;
  CLI::App* enc = app.add_subcommand("encode", "Turn annotation records into bin targets");
  enc->add_option("--in", enc_in, "Dataset file")->required();
  enc->add_option("--out", enc_out, "Output file (default stdout)");
  enc->add_option("--bins", enc_bins, "Bins per scalar")->capture_default_str();
  enc->add_flag("--one-hot", enc_one_hot, "Write one-hot probability records instead of indices");

  std::string dec_in;
  std::string dec_out;
  std::string dec_size;
  int dec_bins = 500;
  int dec_top_c = 11;
  CLI::App* dec = app.add_subcommand("decode", "Turn model probability vectors into geometry records");
  dec->add_option("--in", dec_in, "Probability records")->required();
  dec->add_option("--out", dec_out, "Output file (default stdout)");
  dec->add_option("--bins", dec_bins, "Bins per scalar")->capture_default_str();
  dec->add_option("--top-c", dec_top_c, "Bins averaged per scalar")->capture_default_str();
  dec->add_option("--size", dec_size, "Image size WxH for records without one");

  std::string ev_gt;
  std::string ev_pred;
  std::string ev_csv;
  std::string ev_summary;
  double ev_tau = kDefaultAucCutoff;
  CLI::App* ev = app.add_subcommand("eval", "Horizon AUC and camera parameter errors");
  ev->add_option("--gt", ev_gt, "Ground-truth records")->required();
  ev->add_option("--pred", ev_pred, "Predicted records")->required();
  ev->add_option("--tau", ev_tau, "AUC error cutoff")->capture_default_str();
  ev->add_option("--csv", ev_csv, "Write the AUC curve as CSV");
  ev->add_option("--summary", ev_summary, "Write a JSON summary");

  std::string vid_in;
  std::string vid_trace;
  std::optional<double> vid_ref;
  CLI::App* vid = app.add_subcommand("video", "Average per-frame camera parameters of one stream");
  vid->add_option("--in", vid_in, "Per-frame geometry records")->required();
  vid->add_option("--ref-focal", vid_ref, "Reference focal length for the error trace");
  vid->add_option("--trace", vid_trace, "Write frames,relative_focal_error CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (rect->parsed()) return cmd_rectify(ro, out);
    if (gen->parsed()) return cmd_generate(gen_n, gen_seed, gen_min_tilt, gen_out, out);
    if (enc->parsed()) return cmd_encode(enc_in, enc_out, enc_bins, enc_one_hot, out, err);
    if (dec->parsed()) return cmd_decode(dec_in, dec_out, dec_bins, dec_top_c, dec_size, out);
    if (ev->parsed()) return cmd_eval(ev_gt, ev_pred, ev_tau, ev_csv, ev_summary, out);
    if (vid->parsed()) return cmd_video(vid_in, vid_ref, vid_trace, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << '\n';
    return kExitGeometry;
  }
  return kExitUsage;
}

}  // namespace bev::cli
