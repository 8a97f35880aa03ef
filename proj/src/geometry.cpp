#include "bev/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace bev {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroResult: return "ZeroResult";
    case ErrorCode::InfiniteInput: return "InfiniteInput";
    case ErrorCode::OutsideDisk: return "OutsideDisk";
    case ErrorCode::BoundaryUndefined: return "BoundaryUndefined";
    case ErrorCode::NotOnHorizon: return "NotOnHorizon";
    case ErrorCode::SameSide: return "SameSide";
    case ErrorCode::VzAtInfinity: return "VzAtInfinity";
    case ErrorCode::ZeroTilt: return "ZeroTilt";
    case ErrorCode::FocalUnrecoverable: return "FocalUnrecoverable";
    case ErrorCode::VerticalHorizon: return "VerticalHorizon";
    case ErrorCode::UpwardTilt: return "UpwardTilt";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::VerticalLine: return "VerticalLine";
    case ErrorCode::DegenerateCamera: return "DegenerateCamera";
    case ErrorCode::SingularH: return "SingularH";
  }
  return "Unknown";
}

namespace {

// Relative threshold below which a cross product is treated as zero.
constexpr double kParallelTolerance = 1e-14;

Vec3 scale_largest_to_one(const Vec3& v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  return v / v(i);
}

Vec3 checked_cross(const Vec3& u, const Vec3& v) {
  const Vec3 r = u.cross(v);
  if (r.norm() <= kParallelTolerance * u.norm() * v.norm()) {
    throw GeometryError(ErrorCode::ZeroResult, "entities are parallel");
  }
  return r;
}

}  // namespace

double ImageSize::half_diagonal() const { return 0.5 * std::hypot(width, height); }

Vec2 HomogeneousPoint::euclidean() const {
  if (is_at_infinity()) throw GeometryError(ErrorCode::InfiniteInput, "point at infinity has no pixel position");
  return v.head<2>() / v.z();
}

HomogeneousPoint HomogeneousPoint::canonical() const { return HomogeneousPoint{scale_largest_to_one(v)}; }

HomogeneousLine HomogeneousLine::normalized() const {
  const double n = std::hypot(v.x(), v.y());
  if (n == 0.0) throw GeometryError(ErrorCode::InfiniteInput, "line at infinity cannot be normalized");
  Vec3 out = v / n;
  if (out.y() < 0.0 || (out.y() == 0.0 && out.x() < 0.0)) out = -out;
  return HomogeneousLine{out};
}

HomogeneousLine HomogeneousLine::canonical() const { return HomogeneousLine{scale_largest_to_one(v)}; }

double HomogeneousLine::signed_distance(const Vec2& p) const {
  const HomogeneousLine n = normalized();
  return n.v.x() * p.x() + n.v.y() * p.y() + n.v.z();
}

Vec2 HomogeneousLine::foot_of_perpendicular(const Vec2& p) const {
  const HomogeneousLine n = normalized();
  return p - n.signed_distance(p) * n.v.head<2>();
}

bool Rotation3::is_valid(double tol) const {
  const Mat3 gram = m.transpose() * m;
  return (gram - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

Homography Homography::inverse() const {
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-300) throw GeometryError(ErrorCode::SingularH, "homography is singular");
  return Homography{m.inverse()};
}

Homography Homography::canonical() const {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  return Homography{m / m(r, c)};
}

Mat3 CameraIntrinsics::K() const {
  const Vec2 p = principal_point();
  Mat3 k;
  k << focal, 0.0, p.x(),
       0.0, focal, p.y(),
       0.0, 0.0, 1.0;
  return k;
}

Mat3 CameraIntrinsics::K_inverse() const {
  const Vec2 p = principal_point();
  Mat3 k;
  k << 1.0 / focal, 0.0, -p.x() / focal,
       0.0, 1.0 / focal, -p.y() / focal,
       0.0, 0.0, 1.0;
  return k;
}

Mat3 CameraIntrinsics::omega() const {
  const Mat3 ki = K_inverse();
  return ki.transpose() * ki;
}

HomogeneousLine cross(const HomogeneousPoint& p, const HomogeneousPoint& q) {
  return HomogeneousLine{checked_cross(p.v, q.v)};
}

HomogeneousPoint cross(const HomogeneousLine& l, const HomogeneousLine& m) {
  return HomogeneousPoint{checked_cross(l.v, m.v)};
}

Mat3 rotation_x(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return r;
}

Mat3 rotation_y(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return r;
}

Mat3 rotation_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Rotation3 rotation_from_angles(double tilt, double roll, double yaw) {
  return Rotation3{rotation_z(roll) * rotation_x(tilt) * rotation_y(yaw)};
}

HomogeneousPoint apply_homography(const Homography& h, const HomogeneousPoint& p) {
  return HomogeneousPoint{h.m * p.v};
}

HomogeneousLine apply_homography(const Homography& h, const HomogeneousLine& l) {
  return HomogeneousLine{h.inverse().m.transpose() * l.v};
}

double point_line_distance(const HomogeneousPoint& p, const HomogeneousLine& l) {
  if (l.is_at_infinity()) throw GeometryError(ErrorCode::InfiniteInput, "distance to the line at infinity");
  return std::abs(l.signed_distance(p.euclidean()));
}

double projective_residual(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  return (a / na).cross(b / nb).norm();
}

Mat3 translation(double tx, double ty) {
  Mat3 t = Mat3::Identity();
  t(0, 2) = tx;
  t(1, 2) = ty;
  return t;
}

Mat3 in_plane_rotation(double angle, const Vec2& centre) {
  return translation(centre.x(), centre.y()) * rotation_z(angle) * translation(-centre.x(), -centre.y());
}

}  // namespace bev
