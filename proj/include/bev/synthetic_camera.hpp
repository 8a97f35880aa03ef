#pragma once

// Randomised pinhole cameras and their exact vanishing geometry.
//
// World frame: X east, Y north, Z up; the ground is Z = 0 and the camera sits at
// (0, 0, height). At zero angles the camera looks north, level with the ground.
// The world-to-camera rotation is rotation_from_angles(tilt, roll, yaw) * kWorldToLevel.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bev/geometry.hpp"
#include "bev/sphere_codec.hpp"

namespace bev {

/// World (X east, Y north, Z up) to level camera (x right, y down, z forward).
Mat3 world_to_level_camera();

struct SamplingConfig {
  double min_height{1.7};
  double max_height{20.0};
  double min_tilt{0.0};           // exclusive lower bound, radians
  double max_tilt{0.6981317007977318};  // 40 degrees
  double roll_sigma{0.08726646259971647};  // 5 degrees
  double roll_limit{0.5235987755982988};   // 30 degrees
  double min_fov{0.2617993877991494};      // 15 degrees
  double max_fov{2.007128639793479};       // 115 degrees
  std::vector<ImageSize> sizes{{640, 480}, {1280, 720}, {1920, 1080}, {1000, 1000}};
  std::uint64_t seed{0};
};

struct CameraModel {
  CameraIntrinsics intrinsics;
  double tilt{0.0};
  double roll{0.0};
  double yaw{0.0};
  double height{1.7};

  /// World-to-camera rotation.
  [[nodiscard]] Rotation3 rotation() const;
  [[nodiscard]] Vec3 centre() const { return {0.0, 0.0, height}; }
  /// Camera-frame coordinates of a world point.
  [[nodiscard]] Vec3 to_camera(const Vec3& world) const;
  [[nodiscard]] HomogeneousPoint project(const Vec3& world) const;
};

struct AnnotationRecord {
  std::string camera_id;
  CameraModel camera;
  Rotation3 rotation;
  HomogeneousPoint vx;
  HomogeneousPoint vy;
  HomogeneousPoint vz;
  HomogeneousLine horizon;  // normalized
  EncodedGeometry encoded;
  double theta_align{0.0};
};

/// Independent stream for record `index` of a dataset seeded with `seed`.
std::mt19937_64 camera_rng(std::uint64_t seed, std::uint64_t index);

CameraModel sample_camera(const SamplingConfig& cfg, std::mt19937_64& rng);

AnnotationRecord ground_truth(const CameraModel& cam, std::string camera_id = {});

/// Records 0..n-1 of the dataset defined by cfg.seed; record i depends only on (seed, i).
std::vector<AnnotationRecord> generate_dataset(const SamplingConfig& cfg, std::size_t n);

struct GridSpec {
  Vec2 origin{0.0, 0.0};  // world XY of grid node (0, 0)
  double spacing{1.0};    // metres
  int nx{5};
  int ny{5};
};

struct GridCorrespondence {
  Vec2 world;
  Vec2 image;
};

struct GridProjection {
  std::vector<GridCorrespondence> visible;
  std::vector<Vec2> behind;  // world XY of nodes at or behind the camera plane
};

/// Full pinhole projection K [R | t] of ground-plane (Z = 0) grid nodes.
GridProjection project_ground_grid(const CameraModel& cam, const GridSpec& grid);

/// Ground point (Z = 0) seen at a pixel; throws DegenerateCamera if the ray misses the ground.
Vec2 backproject_to_ground(const CameraModel& cam, const Vec2& pixel);

}  // namespace bev
