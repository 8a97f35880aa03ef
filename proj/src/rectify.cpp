#include "bev/rectify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bev/sphere_codec.hpp"

namespace bev {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
// |b| / ||(a, b)|| below which a horizon is treated as vertical.
constexpr double kVerticalTolerance = 1e-12;

double fold_half_turn(double angle) {
  while (angle > kHalfPi) angle -= std::numbers::pi;
  while (angle <= -kHalfPi) angle += std::numbers::pi;
  return angle;
}

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

// Clip a convex polygon to the half-plane line . (x, 1) >= 0.
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Vec3& line) {
  std::vector<Vec2> out;
  const auto side = [&](const Vec2& p) { return line.x() * p.x() + line.y() * p.y() + line.z(); };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const double sa = side(a);
    const double sb = side(b);
    if (sa >= 0.0) out.push_back(a);
    if ((sa >= 0.0) != (sb >= 0.0)) out.push_back(a + (sa / (sa - sb)) * (b - a));
  }
  return out;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * std::abs(twice);
}

void validate_image(ImageSize image) {
  if (image.width <= 0 || image.height <= 0) {
    throw GeometryError(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
}

double local_scale(const Homography& h, const Vec2& at, const Vec2& direction) {
  const Vec3 y = h.m * Vec3(at.x(), at.y(), 1.0);
  const Vec3 dy = h.m.col(0) * direction.x() + h.m.col(1) * direction.y();
  const Vec2 d = (dy.head<2>() * y.z() - y.head<2>() * dy.z()) / (y.z() * y.z());
  return d.norm();
}

}  // namespace

double focal_from_fov(double fov, double width) {
  if (!(fov > 0.0 && fov < std::numbers::pi)) throw GeometryError(ErrorCode::InvalidArgument, "field of view outside (0, pi)");
  return 0.5 * width / std::tan(0.5 * fov);
}

double fov_from_focal(double focal, double width) {
  if (!(focal > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "focal length must be positive");
  return 2.0 * std::atan(0.5 * width / focal);
}

FocalEstimate focal_from_horizon_and_vp(const HomogeneousLine& horizon, const HomogeneousPoint& vertical_vp,
                                        ImageSize image) {
  validate_image(image);
  if (vertical_vp.is_at_infinity()) {
    throw GeometryError(ErrorCode::VzAtInfinity, "camera is untilted; supply the focal length");
  }
  if (horizon.is_at_infinity()) {
    throw GeometryError(ErrorCode::FocalUnrecoverable, "horizon at infinity (nadir view); supply the focal length");
  }
  const Vec2 p = image.centre();
  const Vec2 to_vp = vertical_vp.euclidean() - p;
  const Vec2 to_foot = horizon.foot_of_perpendicular(p) - p;
  const double dv = to_vp.norm();
  const double dh = to_foot.norm();
  if (dv == 0.0 || dh == 0.0 || to_vp.dot(to_foot) >= 0.0) {
    throw GeometryError(ErrorCode::SameSide, "v_z and the horizon must lie on opposite sides of the principal point");
  }
  FocalEstimate est;
  est.focal = std::sqrt(dv * dh);
  const double cross = to_vp.x() * to_foot.y() - to_vp.y() * to_foot.x();
  est.collinearity_residual = std::atan2(std::abs(cross), -to_vp.dot(to_foot));
  return est;
}

double roll_from_horizon(const HomogeneousLine& horizon) {
  const double a = horizon.v.x();
  const double b = horizon.v.y();
  const double n = std::hypot(a, b);
  if (n == 0.0 || std::abs(b) / n < kVerticalTolerance) {
    throw GeometryError(ErrorCode::VerticalHorizon, "horizon is vertical or at infinity");
  }
  return fold_half_turn(std::atan2(-a, b)) + 0.0;  // no negative zero
}

double tilt_from_vertical_vp(double focal, const HomogeneousPoint& vertical_vp, const Vec2& principal_point) {
  if (!(focal > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "focal length must be positive");
  if (vertical_vp.is_at_infinity()) return 0.0;
  return std::atan2(focal, (vertical_vp.euclidean() - principal_point).norm());
}

double tilt_from_horizon(double focal, const HomogeneousLine& horizon, const Vec2& principal_point) {
  if (!(focal > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "focal length must be positive");
  if (horizon.is_at_infinity()) return kHalfPi;
  return std::atan2(std::abs(horizon.signed_distance(principal_point)), focal);
}

Homography roll_homography(double focal, double roll, ImageSize image) {
  const CameraIntrinsics intr{focal, image};
  return Homography{intr.K() * rotation_z(-roll) * intr.K_inverse()};
}

Homography build_rotation_homography(double focal, double tilt, double roll, ImageSize image) {
  validate_image(image);
  if (!(focal > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "focal length must be positive");
  if (!(tilt > 0.0 && tilt <= kHalfPi)) throw GeometryError(ErrorCode::InvalidArgument, "tilt outside (0, pi/2]");
  const CameraIntrinsics intr{focal, image};
  return Homography{intr.K() * rotation_x(kHalfPi - tilt) * rotation_z(-roll) * intr.K_inverse()};
}

CanvasFit fit_canvas(const Homography& h_rot, ImageSize image, const CanvasSpec& canvas, double canvas_rotation) {
  validate_image(image);
  if (canvas.width < 1 || canvas.height < 1) throw GeometryError(ErrorCode::InvalidArgument, "canvas dimensions must be >= 1");
  if (!(canvas.max_depth_ratio >= 1.0)) throw GeometryError(ErrorCode::InvalidArgument, "depth ratio must be >= 1");

  const double w = image.width;
  const double h = image.height;
  std::vector<Vec2> region{{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}};

  CanvasFit fit;
  fit.width = canvas.width;
  fit.height = canvas.height;

  // Points with positive third coordinate under h_rot lie on the ground side of the horizon.
  const Vec3 ground = h_rot.m.row(2).transpose();
  const double n = std::hypot(ground.x(), ground.y());
  if (n <= 1e-15 * std::abs(ground.z())) {
    if (ground.z() <= 0.0) throw GeometryError(ErrorCode::EmptyRegion, "no source pixels on the ground side");
    fit.retained = HomogeneousLine::at_infinity();
  } else {
    const Vec3 unit = ground / n;
    double nearest = -std::numeric_limits<double>::infinity();
    for (const Vec2& c : region) nearest = std::max(nearest, unit.x() * c.x() + unit.y() * c.y() + unit.z());
    if (!(nearest > 0.0)) throw GeometryError(ErrorCode::EmptyRegion, "image lies entirely above the horizon");
    fit.margin = nearest / canvas.max_depth_ratio;
    fit.retained = HomogeneousLine{unit - Vec3(0.0, 0.0, fit.margin)};
    region = clip_polygon(region, fit.retained.v);
    if (region.size() < 3 || polygon_area(region) <= 0.0) {
      throw GeometryError(ErrorCode::EmptyRegion, "horizon margin leaves no source rows");
    }
  }
  fit.region = region;

  const Mat3 r0 = rotation_z(canvas_rotation);
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Vec2& c : region) {
    const Vec3 y = r0 * (h_rot.m * Vec3(c.x(), c.y(), 1.0)).hnormalized().homogeneous();
    min_x = std::min(min_x, y.x());
    max_x = std::max(max_x, y.x());
    min_y = std::min(min_y, y.y());
    max_y = std::max(max_y, y.y());
  }
  const double box_w = max_x - min_x;
  const double box_h = max_y - min_y;
  if (!(box_w > 0.0 && box_h > 0.0) || !std::isfinite(box_w) || !std::isfinite(box_h)) {
    throw GeometryError(ErrorCode::EmptyRegion, "retained region maps to a degenerate box");
  }

  const double s = std::min(canvas.width / box_w, canvas.height / box_h);
  const Vec2 centre(0.5 * canvas.width, 0.5 * canvas.height);
  const Vec2 t = centre - s * Vec2(0.5 * (min_x + max_x), 0.5 * (min_y + max_y));

  // R_align * T_scene must equal [s*R0, t]; T_scene = [s*I, R0^-1 (t - c) + c].
  const Vec2 ts = r0.topLeftCorner<2, 2>().transpose() * (t - centre) + centre;
  fit.scene = Homography{translation(ts.x(), ts.y())};
  fit.scene.m(0, 0) = s;
  fit.scene.m(1, 1) = s;
  fit.align = Homography{in_plane_rotation(canvas_rotation, centre)};
  return fit;
}

double canvas_rotation_for_vp(const Homography& h_rot, const HomogeneousPoint& vp) {
  const Vec3 y = h_rot.m * vp.v;
  if (y.head<2>().isZero()) throw GeometryError(ErrorCode::InvalidArgument, "vanishing point maps to the origin");
  return fold_half_turn(std::atan2(y.y(), y.x()));
}

RectifyResult rectify(const RectifyInput& input) {
  validate_image(input.image);
  const Vec2 p = input.image.centre();
  const HomogeneousLine& horizon = input.horizon;
  if (input.focal && !(*input.focal > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "focal length must be positive");

  RectifyResult result;
  if (horizon.is_at_infinity()) {
    if (!input.focal) throw GeometryError(ErrorCode::FocalUnrecoverable, "nadir view needs a supplied focal length");
    result.focal = *input.focal;
    result.tilt = kHalfPi;
    result.roll = 0.0;
    result.tilt_from_horizon = kHalfPi;
    result.H_rot = Homography::identity();
  } else {
    result.roll = roll_from_horizon(horizon);
    const Vec2 to_foot = rotate(horizon.foot_of_perpendicular(p) - p, -result.roll);
    if (to_foot.isZero()) throw GeometryError(ErrorCode::ZeroTilt, "horizon passes through the principal point");
    if (to_foot.y() > 0.0) throw GeometryError(ErrorCode::UpwardTilt, "horizon lies below the principal point");

    const bool finite_vp = input.vertical_vp && !input.vertical_vp->is_at_infinity();
    if (input.vertical_vp && !finite_vp && !input.focal) {
      throw GeometryError(ErrorCode::VzAtInfinity, "camera is untilted; supply the focal length");
    }
    if (finite_vp) {
      const Vec2 to_vp = rotate(input.vertical_vp->euclidean() - p, -result.roll);
      if (to_vp.y() < 0.0) throw GeometryError(ErrorCode::UpwardTilt, "vertical vanishing point lies above the principal point");
      const FocalEstimate est = focal_from_horizon_and_vp(horizon, *input.vertical_vp, input.image);
      result.collinearity_residual = est.collinearity_residual;
      result.focal = input.focal ? *input.focal : est.focal;
    } else if (input.focal) {
      result.focal = *input.focal;
    } else {
      throw GeometryError(ErrorCode::FocalUnrecoverable, "need either v_z or the focal length");
    }

    result.tilt_from_horizon = tilt_from_horizon(result.focal, horizon, p);
    if (finite_vp) {
      result.tilt_from_vp = tilt_from_vertical_vp(result.focal, *input.vertical_vp, p);
      result.tilt = 0.5 * (*result.tilt_from_vp + *result.tilt_from_horizon);
    } else {
      result.tilt = *result.tilt_from_horizon;
    }
    result.H_rot = build_rotation_homography(result.focal, result.tilt, result.roll, input.image);
  }

  if (input.align_angle) {
    const HomogeneousPoint vp = decode_horizontal_vp(horizon, *input.align_angle, CodecFrame(input.image));
    result.align_rotation = -canvas_rotation_for_vp(result.H_rot, vp);
  }

  CanvasFit fit = fit_canvas(result.H_rot, input.image, input.canvas, result.align_rotation);
  result.H = fit.align * fit.scene * result.H_rot;
  result.canvas_width = fit.width;
  result.canvas_height = fit.height;
  result.retained = fit.retained;
  result.region = std::move(fit.region);
  result.scale = local_scale(result.H, p, Vec2(std::cos(result.roll), std::sin(result.roll)));

  const double t = std::tan(result.tilt);
  result.condition = result.tilt >= kHalfPi ? std::numeric_limits<double>::infinity() : std::max(t * t, 1.0 / (t * t));
  return result;
}

double horizon_annihilation_residual(const RectifyResult& result, const HomogeneousLine& horizon) {
  const Vec3 l = result.H.inverse().m.transpose() * horizon.v;
  return std::hypot(l.x(), l.y()) / std::abs(l.z()) * std::max(result.canvas_width, result.canvas_height);
}

}  // namespace bev
