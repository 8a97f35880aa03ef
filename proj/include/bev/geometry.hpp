#pragma once

// Homogeneous 2D geometry and 3D rotations.
//
// Camera axes: x right, y down, z forward. Pixel centres sit at integer+0.5,
// so an image of size w x h covers [0,w] x [0,h] and the principal point is
// exactly (w/2, h/2).

#include <Eigen/Core>

#include "bev/errors.hpp"

namespace bev {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct ImageSize {
  int width{0};
  int height{0};

  [[nodiscard]] Vec2 centre() const { return {0.5 * width, 0.5 * height}; }
  [[nodiscard]] double half_diagonal() const;
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Projective point (x, y, w). w == 0 is a point at infinity.
struct HomogeneousPoint {
  Vec3 v{0.0, 0.0, 1.0};

  HomogeneousPoint() = default;
  explicit HomogeneousPoint(const Vec3& coords) : v(coords) {}
  HomogeneousPoint(double x, double y, double w = 1.0) : v(x, y, w) {}

  [[nodiscard]] static HomogeneousPoint at_infinity(double dx, double dy) { return {dx, dy, 0.0}; }

  [[nodiscard]] bool is_at_infinity() const { return v.z() == 0.0; }
  /// Pixel coordinates; throws InfiniteInput for points at infinity.
  [[nodiscard]] Vec2 euclidean() const;
  /// Scaled so the largest-magnitude entry is +1.
  [[nodiscard]] HomogeneousPoint canonical() const;
};

/// Projective line a*x + b*y + c = 0. (0, 0, c) is the line at infinity.
struct HomogeneousLine {
  Vec3 v{0.0, 0.0, 1.0};

  HomogeneousLine() = default;
  explicit HomogeneousLine(const Vec3& coeffs) : v(coeffs) {}
  HomogeneousLine(double a, double b, double c) : v(a, b, c) {}

  [[nodiscard]] static HomogeneousLine at_infinity() { return {0.0, 0.0, 1.0}; }

  [[nodiscard]] bool is_at_infinity() const { return v.x() == 0.0 && v.y() == 0.0; }
  /// a^2 + b^2 = 1 with b > 0 (or b == 0, a > 0). Throws InfiniteInput for the line at infinity.
  [[nodiscard]] HomogeneousLine normalized() const;
  [[nodiscard]] HomogeneousLine canonical() const;
  /// Signed value a*x + b*y + c of the normalized line at a finite point.
  [[nodiscard]] double signed_distance(const Vec2& p) const;
  /// Foot of the perpendicular from p onto the line.
  [[nodiscard]] Vec2 foot_of_perpendicular(const Vec2& p) const;
};

struct Rotation3 {
  Mat3 m{Mat3::Identity()};

  [[nodiscard]] Vec3 column(int i) const { return m.col(i); }
  /// Orthonormality and det = +1 within tol.
  [[nodiscard]] bool is_valid(double tol = 1e-12) const;
};

/// Nonsingular 3x3 map between image planes, defined up to scale.
struct Homography {
  Mat3 m{Mat3::Identity()};

  Homography() = default;
  explicit Homography(const Mat3& matrix) : m(matrix) {}

  [[nodiscard]] static Homography identity() { return Homography{}; }
  [[nodiscard]] Homography inverse() const;
  /// Scaled so the largest-magnitude entry equals +1.
  [[nodiscard]] Homography canonical() const;
  [[nodiscard]] Homography operator*(const Homography& rhs) const { return Homography{m * rhs.m}; }
};

/// Square pixels, zero skew, principal point at the image centre.
struct CameraIntrinsics {
  double focal{1.0};
  ImageSize size;

  [[nodiscard]] Mat3 K() const;
  [[nodiscard]] Mat3 K_inverse() const;
  [[nodiscard]] Vec2 principal_point() const { return size.centre(); }
  /// Image of the absolute conic, (K K^T)^-1.
  [[nodiscard]] Mat3 omega() const;
};

HomogeneousLine cross(const HomogeneousPoint& p, const HomogeneousPoint& q);
HomogeneousPoint cross(const HomogeneousLine& l, const HomogeneousLine& m);

Mat3 rotation_x(double angle);
Mat3 rotation_y(double angle);
Mat3 rotation_z(double angle);

/// R = Rz(roll) * Rx(tilt) * Ry(yaw), expressed in camera axes.
Rotation3 rotation_from_angles(double tilt, double roll, double yaw);

/// H * p without dehomogenization.
HomogeneousPoint apply_homography(const Homography& h, const HomogeneousPoint& p);
/// Maps a line through H (H^-T * l).
HomogeneousLine apply_homography(const Homography& h, const HomogeneousLine& l);

double point_line_distance(const HomogeneousPoint& p, const HomogeneousLine& l);

/// Sine of the angle between two 3-vectors taken as projective entities (0 when proportional).
double projective_residual(const Vec3& a, const Vec3& b);

/// Translation and uniform scale helpers used to assemble canvas transforms.
Mat3 translation(double tx, double ty);
Mat3 in_plane_rotation(double angle, const Vec2& centre);

}  // namespace bev
