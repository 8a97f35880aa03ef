#pragma once

// Line-delimited JSON interchange: dataset files, prediction files and model outputs.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bev/eval.hpp"
#include "bev/synthetic_camera.hpp"

namespace bev {

struct DatasetManifest {
  SamplingConfig config;
  std::uint64_t seed{0};
  std::size_t count{0};
};

/// One line of a dataset file: {"camera_id", "intrinsics", "extrinsics", "R", "v_x", "v_y",
/// "v_z", "horizon", "encoded", "theta_align"}.
std::string annotation_to_json(const AnnotationRecord& rec);
AnnotationRecord annotation_from_json(std::string_view line);

/// {"manifest": {"seed", "count", "config"}}.
std::string manifest_to_json(const DatasetManifest& manifest);
/// Nullopt when the line is not a manifest line.
std::optional<DatasetManifest> manifest_from_json(std::string_view line);

void write_dataset(std::ostream& out, const DatasetManifest& manifest, const std::vector<AnnotationRecord>& records);

/// Per-image geometry as consumed by eval, video and rectify: either an annotation line or a
/// prediction line {"id", "width", "height", "horizon", "v_z", "theta_align"?, "focal"?,
/// "tilt"?, "roll"?}.
struct GeometryRecord {
  std::string id;
  ImageSize image;
  HomogeneousLine horizon;
  std::optional<HomogeneousPoint> vertical_vp;
  std::optional<double> theta_align;
  std::optional<CameraParams> camera;
};

GeometryRecord geometry_from_annotation(const AnnotationRecord& rec);
GeometryRecord geometry_from_json(std::string_view line);
std::string geometry_to_json(const GeometryRecord& rec);

/// Model output: {"id", "probabilities": [4 vectors], "alignment"?: vector, "width"?, "height"?}.
/// Vector order: horizon qx, horizon qy, vertical VP qx, vertical VP qy.
struct ProbabilityRecord {
  std::string id;
  std::array<std::vector<double>, 4> probabilities;
  std::optional<std::vector<double>> alignment;
  std::optional<ImageSize> image;
};

ProbabilityRecord probabilities_from_json(std::string_view line);
std::string probabilities_to_json(const ProbabilityRecord& rec);

/// Non-empty lines of a text file. Throws IoError if unreadable.
std::vector<std::string> read_lines(const std::filesystem::path& path);

struct Dataset {
  std::optional<DatasetManifest> manifest;
  std::vector<AnnotationRecord> records;
};

Dataset read_dataset(const std::filesystem::path& path);
/// Geometry lines of a file; a leading manifest line is skipped.
std::vector<GeometryRecord> read_geometry(const std::filesystem::path& path);

}  // namespace bev
