#include "bev/records.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace bev {

namespace {

using nlohmann::json;

json parse_line(std::string_view line) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw FormatError("record is not a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

// Numbers serialise non-finite values as null; read null back as NaN.
double number(const json& j, const char* what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw FormatError(std::string("field '") + what + "' must be a number");
  return j.get<double>();
}

double number_field(const json& j, const char* key) { return number(field(j, key), key); }

std::optional<double> optional_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw FormatError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& j, const char* key, std::size_t expected = 0) {
  if (!j.is_array()) throw FormatError(std::string("field '") + key + "' must be an array");
  if (expected != 0 && j.size() != expected) {
    throw FormatError(std::string("field '") + key + "' must have " + std::to_string(expected) + " entries");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(number(v, key));
  return out;
}

Vec3 vec3_field(const json& j, const char* key) {
  const std::vector<double> v = numbers(field(j, key), key, 3);
  return {v[0], v[1], v[2]};
}

json vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

ImageSize image_size(int w, int h) {
  if (w < 1 || h < 1) throw FormatError("image dimensions must be >= 1");
  return {w, h};
}

json config_to_json(const SamplingConfig& c) {
  json sizes = json::array();
  for (const ImageSize& s : c.sizes) sizes.push_back(json::array({s.width, s.height}));
  return {{"min_height", c.min_height}, {"max_height", c.max_height}, {"min_tilt", c.min_tilt},
          {"max_tilt", c.max_tilt},     {"roll_sigma", c.roll_sigma}, {"roll_limit", c.roll_limit},
          {"min_fov", c.min_fov},       {"max_fov", c.max_fov},       {"sizes", sizes},
          {"seed", c.seed}};
}

SamplingConfig config_from_json(const json& j) {
  SamplingConfig c;
  c.min_height = number_field(j, "min_height");
  c.max_height = number_field(j, "max_height");
  c.min_tilt = number_field(j, "min_tilt");
  c.max_tilt = number_field(j, "max_tilt");
  c.roll_sigma = number_field(j, "roll_sigma");
  c.roll_limit = number_field(j, "roll_limit");
  c.min_fov = number_field(j, "min_fov");
  c.max_fov = number_field(j, "max_fov");
  c.sizes.clear();
  for (const json& s : field(j, "sizes")) {
    if (!s.is_array() || s.size() != 2) throw FormatError("config sizes must be [w, h] pairs");
    c.sizes.push_back(image_size(s[0].get<int>(), s[1].get<int>()));
  }
  if (const auto it = j.find("seed"); it != j.end()) c.seed = it->get<std::uint64_t>();
  return c;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
}

}  // namespace

std::string annotation_to_json(const AnnotationRecord& rec) {
  const CameraModel& cam = rec.camera;
  json r = json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r.push_back(rec.rotation.m(i, k));
  json j = {
      {"camera_id", rec.camera_id},
      {"intrinsics", {{"f", cam.intrinsics.focal}, {"w", cam.intrinsics.size.width}, {"h", cam.intrinsics.size.height}}},
      {"extrinsics", {{"tilt", cam.tilt}, {"roll", cam.roll}, {"yaw", cam.yaw}, {"height", cam.height}}},
      {"R", r},
      {"v_x", vec3(rec.vx.v)},
      {"v_y", vec3(rec.vy.v)},
      {"v_z", vec3(rec.vz.v)},
      {"horizon", vec3(rec.horizon.v)},
      {"encoded", json::array({rec.encoded.horizon.qx, rec.encoded.horizon.qy, rec.encoded.vertical_vp.qx,
                               rec.encoded.vertical_vp.qy})},
      {"theta_align", rec.theta_align},
  };
  return j.dump();
}

AnnotationRecord annotation_from_json(std::string_view line) {
  const json j = parse_line(line);
  return guarded([&] {
    AnnotationRecord rec;
    rec.camera_id = string_field(j, "camera_id");
    const json& in = field(j, "intrinsics");
    rec.camera.intrinsics.focal = number_field(in, "f");
    rec.camera.intrinsics.size = image_size(int_field(in, "w"), int_field(in, "h"));
    if (!(rec.camera.intrinsics.focal > 0.0)) throw FormatError("focal length must be positive");
    const json& ex = field(j, "extrinsics");
    rec.camera.tilt = number_field(ex, "tilt");
    rec.camera.roll = number_field(ex, "roll");
    rec.camera.yaw = number_field(ex, "yaw");
    rec.camera.height = number_field(ex, "height");
    const std::vector<double> r = numbers(field(j, "R"), "R", 9);
    for (int i = 0; i < 9; ++i) rec.rotation.m(i / 3, i % 3) = r[static_cast<std::size_t>(i)];
    rec.vx = HomogeneousPoint{vec3_field(j, "v_x")};
    rec.vy = HomogeneousPoint{vec3_field(j, "v_y")};
    rec.vz = HomogeneousPoint{vec3_field(j, "v_z")};
    rec.horizon = HomogeneousLine{vec3_field(j, "horizon")};
    const std::vector<double> e = numbers(field(j, "encoded"), "encoded", 4);
    rec.encoded.horizon = {e[0], e[1]};
    rec.encoded.vertical_vp = {e[2], e[3]};
    rec.theta_align = number_field(j, "theta_align");
    return rec;
  });
}

std::string manifest_to_json(const DatasetManifest& m) {
  json j = {{"manifest", {{"seed", m.seed}, {"count", m.count}, {"config", config_to_json(m.config)}}}};
  return j.dump();
}

std::optional<DatasetManifest> manifest_from_json(std::string_view line) {
  const json j = parse_line(line);
  const auto it = j.find("manifest");
  if (it == j.end()) return std::nullopt;
  return guarded([&] {
    DatasetManifest m;
    m.seed = field(*it, "seed").get<std::uint64_t>();
    m.count = field(*it, "count").get<std::size_t>();
    m.config = config_from_json(field(*it, "config"));
    return std::optional<DatasetManifest>(m);
  });
}

void write_dataset(std::ostream& out, const DatasetManifest& manifest, const std::vector<AnnotationRecord>& records) {
  out << manifest_to_json(manifest) << '\n';
  for (const AnnotationRecord& r : records) out << annotation_to_json(r) << '\n';
  if (!out) throw IoError("failed writing dataset");
}

GeometryRecord geometry_from_annotation(const AnnotationRecord& rec) {
  GeometryRecord g;
  g.id = rec.camera_id;
  g.image = rec.camera.intrinsics.size;
  g.horizon = rec.horizon;
  g.vertical_vp = rec.vz;
  g.theta_align = rec.theta_align;
  g.camera = CameraParams{rec.camera.intrinsics.focal, rec.camera.tilt, rec.camera.roll};
  return g;
}

GeometryRecord geometry_from_json(std::string_view line) {
  const json j = parse_line(line);
  if (j.contains("camera_id")) return geometry_from_annotation(annotation_from_json(line));
  return guarded([&] {
    GeometryRecord g;
    g.id = string_field(j, "id");
    g.image = image_size(int_field(j, "width"), int_field(j, "height"));
    g.horizon = HomogeneousLine{vec3_field(j, "horizon")};
    if (j.contains("v_z") && !j["v_z"].is_null()) g.vertical_vp = HomogeneousPoint{vec3_field(j, "v_z")};
    g.theta_align = optional_number(j, "theta_align");
    const auto f = optional_number(j, "focal");
    const auto t = optional_number(j, "tilt");
    const auto r = optional_number(j, "roll");
    if (f && t && r) g.camera = CameraParams{*f, *t, *r};
    return g;
  });
}

std::string geometry_to_json(const GeometryRecord& g) {
  json j = {{"id", g.id}, {"width", g.image.width}, {"height", g.image.height}, {"horizon", vec3(g.horizon.v)}};
  if (g.vertical_vp) j["v_z"] = vec3(g.vertical_vp->v);
  if (g.theta_align) j["theta_align"] = *g.theta_align;
  if (g.camera) {
    j["focal"] = g.camera->focal;
    j["tilt"] = g.camera->tilt;
    j["roll"] = g.camera->roll;
  }
  return j.dump();
}

ProbabilityRecord probabilities_from_json(std::string_view line) {
  const json j = parse_line(line);
  return guarded([&] {
    ProbabilityRecord p;
    p.id = string_field(j, "id");
    const json& probs = field(j, "probabilities");
    if (!probs.is_array() || probs.size() != 4) throw FormatError("'probabilities' must hold 4 vectors");
    for (std::size_t i = 0; i < 4; ++i) p.probabilities[i] = numbers(probs[i], "probabilities");
    if (j.contains("alignment") && !j["alignment"].is_null()) p.alignment = numbers(j["alignment"], "alignment");
    if (j.contains("width") || j.contains("height")) p.image = image_size(int_field(j, "width"), int_field(j, "height"));
    return p;
  });
}

std::string probabilities_to_json(const ProbabilityRecord& p) {
  json probs = json::array();
  for (const auto& v : p.probabilities) probs.push_back(v);
  json j = {{"id", p.id}, {"probabilities", probs}};
  if (p.alignment) j["alignment"] = *p.alignment;
  if (p.image) {
    j["width"] = p.image->width;
    j["height"] = p.image->height;
  }
  return j.dump();
}

namespace {

struct NumberedLine {
  std::size_t number;
  std::string text;
};

std::vector<NumberedLine> read_numbered(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<NumberedLine> lines;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back({n, std::move(line)});
  }
  if (in.bad()) throw IoError("failed reading " + path.string());
  return lines;
}

}  // namespace

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> out;
  for (NumberedLine& l : read_numbered(path)) out.push_back(std::move(l.text));
  return out;
}

namespace {

template <typename F>
auto at_line(const std::filesystem::path& path, std::size_t n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ":" + std::to_string(n) + ": " + e.what());
  }
}

}  // namespace

Dataset read_dataset(const std::filesystem::path& path) {
  Dataset d;
  const std::vector<NumberedLine> lines = read_numbered(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    at_line(path, lines[i].number, [&] {
      if (i == 0) {
        d.manifest = manifest_from_json(lines[i].text);
        if (d.manifest) return;
      }
      d.records.push_back(annotation_from_json(lines[i].text));
    });
  }
  return d;
}

std::vector<GeometryRecord> read_geometry(const std::filesystem::path& path) {
  std::vector<GeometryRecord> out;
  const std::vector<NumberedLine> lines = read_numbered(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    at_line(path, lines[i].number, [&] {
      if (i == 0 && manifest_from_json(lines[i].text)) return;
      out.push_back(geometry_from_json(lines[i].text));
    });
  }
  return out;
}

}  // namespace bev
