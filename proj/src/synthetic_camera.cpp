#include "bev/synthetic_camera.hpp"

#include <Eigen/Dense>
#include <cstdio>
#include <numbers>

#include "bev/rectify.hpp"

namespace bev {

Mat3 world_to_level_camera() {
  Mat3 b;
  b << 1.0, 0.0, 0.0,
       0.0, 0.0, -1.0,
       0.0, 1.0, 0.0;
  return b;
}

Rotation3 CameraModel::rotation() const {
  return Rotation3{rotation_from_angles(tilt, roll, yaw).m * world_to_level_camera()};
}

Vec3 CameraModel::to_camera(const Vec3& world) const { return rotation().m * (world - centre()); }

HomogeneousPoint CameraModel::project(const Vec3& world) const {
  return HomogeneousPoint{intrinsics.K() * to_camera(world)};
}

std::mt19937_64 camera_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

CameraModel sample_camera(const SamplingConfig& cfg, std::mt19937_64& rng) {
  if (cfg.sizes.empty()) throw GeometryError(ErrorCode::InvalidArgument, "sampling config has no image sizes");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> roll_dist(0.0, cfg.roll_sigma);
  std::uniform_int_distribution<std::size_t> size_dist(0, cfg.sizes.size() - 1);

  CameraModel cam;
  cam.height = cfg.min_height + unit(rng) * (cfg.max_height - cfg.min_height);
  // unit() is in [0, 1), so the tilt lands in (min_tilt, max_tilt].
  cam.tilt = cfg.max_tilt - unit(rng) * (cfg.max_tilt - cfg.min_tilt);
  do {
    cam.roll = roll_dist(rng);
  } while (std::abs(cam.roll) > cfg.roll_limit);
  const double fov = cfg.min_fov + unit(rng) * (cfg.max_fov - cfg.min_fov);
  cam.yaw = 2.0 * std::numbers::pi * unit(rng);
  cam.intrinsics.size = cfg.sizes[size_dist(rng)];
  cam.intrinsics.focal = focal_from_fov(fov, cam.intrinsics.size.width);
  return cam;
}

AnnotationRecord ground_truth(const CameraModel& cam, std::string camera_id) {
  AnnotationRecord rec;
  rec.camera_id = std::move(camera_id);
  rec.camera = cam;
  rec.rotation = cam.rotation();

  const Mat3 k = cam.intrinsics.K();
  rec.vx = HomogeneousPoint{k * rec.rotation.column(0)};
  rec.vy = HomogeneousPoint{k * rec.rotation.column(1)};
  rec.vz = HomogeneousPoint{k * rec.rotation.column(2)};

  const CodecFrame frame(cam.intrinsics.size);
  const HomogeneousLine h = cross(rec.vx, rec.vy);
  if (h.is_at_infinity()) {
    rec.horizon = HomogeneousLine::at_infinity();
    rec.theta_align = 0.0;
  } else {
    rec.horizon = h.normalized();
    rec.theta_align = encode_horizontal_vp(rec.horizon, rec.vx, frame);
  }
  rec.encoded.horizon = encode_line(rec.horizon, frame);
  rec.encoded.vertical_vp = encode_point(rec.vz, frame);
  return rec;
}

std::vector<AnnotationRecord> generate_dataset(const SamplingConfig& cfg, std::size_t n) {
  std::vector<AnnotationRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = camera_rng(cfg.seed, i);
    char id[32];
    std::snprintf(id, sizeof id, "cam-%06zu", i);
    out.push_back(ground_truth(sample_camera(cfg, rng), id));
  }
  return out;
}

GridProjection project_ground_grid(const CameraModel& cam, const GridSpec& grid) {
  if (!(cam.height > 0.0)) throw GeometryError(ErrorCode::DegenerateCamera, "camera must be above the ground");
  if (!(cam.intrinsics.focal > 0.0)) throw GeometryError(ErrorCode::DegenerateCamera, "focal length must be positive");

  const Mat3 r = cam.rotation().m;
  const Mat3 k = cam.intrinsics.K();
  const Vec3 c = cam.centre();
  GridProjection out;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Vec2 xy = grid.origin + grid.spacing * Vec2(i, j);
      const Vec3 xc = r * (Vec3(xy.x(), xy.y(), 0.0) - c);
      if (xc.z() <= 0.0) {
        out.behind.push_back(xy);
        continue;
      }
      out.visible.push_back({xy, (k * xc).hnormalized()});
    }
  }
  return out;
}

Vec2 backproject_to_ground(const CameraModel& cam, const Vec2& pixel) {
  const Vec3 ray = cam.rotation().m.transpose() * (cam.intrinsics.K_inverse() * Vec3(pixel.x(), pixel.y(), 1.0));
  if (!(ray.z() < 0.0)) throw GeometryError(ErrorCode::DegenerateCamera, "pixel ray does not reach the ground");
  const double t = -cam.height / ray.z();
  return cam.centre().head<2>() + t * ray.head<2>();
}

}  // namespace bev
