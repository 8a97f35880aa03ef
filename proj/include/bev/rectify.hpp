#pragma once

// Bird's-eye rectification from the horizon line and the vertical vanishing point.
//
// The final map is
//
//     H = R_align * T_scene * K * R_tilt * K^-1 * Roll
//
// where Roll = K * Rz(-roll) * K^-1 levels the horizon by rotating the image
// about the principal point, R_tilt rotates the camera about its x-axis until
// it looks straight down, T_scene is a uniform scale plus translation that
// fits the retained ground region onto the output canvas, and R_align is an
// optional in-plane canvas rotation that aligns a principal horizontal
// direction with the canvas x-axis.

#include <optional>
#include <vector>

#include "bev/geometry.hpp"

namespace bev {

struct CanvasSpec {
  int width{1000};
  int height{1000};
  /// The source region is clipped so its farthest row is magnified at most this many
  /// times more than its nearest row.
  double max_depth_ratio{20.0};
};

struct RectifyInput {
  HomogeneousLine horizon;
  std::optional<HomogeneousPoint> vertical_vp;
  ImageSize image;
  std::optional<double> focal;
  /// Sphere-codec angle of a principal horizontal vanishing point on the horizon.
  std::optional<double> align_angle;
  CanvasSpec canvas{};
};

struct FocalEstimate {
  double focal{0.0};
  /// Angle in radians by which p, v_z and the horizon's normal foot miss collinearity.
  double collinearity_residual{0.0};
  [[nodiscard]] bool collinear(double tol = 1e-3) const { return collinearity_residual <= tol; }
};

struct CanvasFit {
  Homography scene;       // T_scene: [s 0 tx; 0 s ty; 0 0 1]
  Homography align;       // R_align about the canvas centre
  int width{0};
  int height{0};
  /// Source pixels x are retained iff retained.v . (x, 1) >= 0.
  HomogeneousLine retained;
  double margin{0.0};     // pixels between the horizon and the retained region
  std::vector<Vec2> region;  // retained source polygon
};

struct RectifyResult {
  Homography H;           // source pixels -> canvas pixels, positive w on the ground
  Homography H_rot;
  double focal{0.0};
  double tilt{0.0};       // radians below the horizontal, (0, pi/2]
  double roll{0.0};       // radians
  std::optional<double> tilt_from_vp;
  std::optional<double> tilt_from_horizon;
  double collinearity_residual{0.0};
  double align_rotation{0.0};  // canvas rotation applied by R_align, radians
  int canvas_width{0};
  int canvas_height{0};
  /// Canvas pixels per source pixel at the principal point, along the horizon direction.
  double scale{0.0};
  /// max/min of |v_z - p| and d(p, h), i.e. max(tan^2, cot^2) of the tilt. Unbounded as the
  /// tilt approaches 0 (v_z recedes) or pi/2 (horizon recedes).
  double condition{1.0};
  HomogeneousLine retained;
  std::vector<Vec2> region;
};

double focal_from_fov(double fov, double width);
double fov_from_focal(double focal, double width);

/// f = sqrt(|v_z - p| * d(p, h)), the positive solution of h ~ omega * v_z.
FocalEstimate focal_from_horizon_and_vp(const HomogeneousLine& horizon, const HomogeneousPoint& vertical_vp,
                                        ImageSize image);

/// atan2(-a, b) folded into (-pi/2, pi/2].
double roll_from_horizon(const HomogeneousLine& horizon);

double tilt_from_vertical_vp(double focal, const HomogeneousPoint& vertical_vp, const Vec2& principal_point);
double tilt_from_horizon(double focal, const HomogeneousLine& horizon, const Vec2& principal_point);

/// K * Rz(-roll) * K^-1: rotation of the image about the principal point.
Homography roll_homography(double focal, double roll, ImageSize image);
/// H_rot = K * R_tilt * K^-1 * Roll. The identity for tilt = pi/2, roll = 0.
Homography build_rotation_homography(double focal, double tilt, double roll, ImageSize image);

/// Fits the retained ground region, mapped by h_rot and rotated by canvas_rotation about
/// the canvas centre, into the canvas. The horizon is read off h_rot's third row.
CanvasFit fit_canvas(const Homography& h_rot, ImageSize image, const CanvasSpec& canvas,
                     double canvas_rotation = 0.0);

/// Direction angle, folded into (-pi/2, pi/2], at which a horizontal VP appears after h_rot.
double canvas_rotation_for_vp(const Homography& h_rot, const HomogeneousPoint& vp);

RectifyResult rectify(const RectifyInput& input);

/// ||(l_x, l_y)|| / |l_z| * max(canvas dims) for l = H^-T h: zero when the horizon maps to
/// the line at infinity.
double horizon_annihilation_residual(const RectifyResult& result, const HomogeneousLine& horizon);

}  // namespace bev
