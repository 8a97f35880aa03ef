#include "bev/sphere_codec.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bev {

namespace {

// Codes closer than this to the boundary circle are treated as on it.
constexpr double kBoundaryTolerance = 1e-12;
// Point codes this close to the circle (relative) are rounding away from it.
constexpr double kCircleUlps = 4.0 * std::numeric_limits<double>::epsilon();
// Maximum normalized distance between a horizontal VP and the horizon.
constexpr double kIncidenceTolerance = 1e-6;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

struct HorizonFrame {
  Vec2 foot;       // normal foot from the principal point, normalized units
  Vec2 tangent;    // unit direction along the horizon, counterclockwise of the foot
  Vec2 normal;     // unit normal (a, b) of the normalized line
  double offset;   // ||C - foot|| in 3D
};

HorizonFrame horizon_frame(const HomogeneousLine& horizon, const CodecFrame& frame) {
  const Vec3 l = frame.to_normalized(horizon);
  const double nab = std::hypot(l.x(), l.y());
  if (nab == 0.0) throw GeometryError(ErrorCode::InfiniteInput, "horizon is the line at infinity");

  const EncodedLine code = encode_line(horizon, frame);
  const double qn = std::hypot(code.qx, code.qy);
  // The line code points away from the normal foot; its reversal gives the foot direction
  // and carries the tie-break for lines through the principal point.
  const Vec2 foot_dir = -Vec2(code.qx, code.qy) / qn;

  HorizonFrame hf;
  hf.normal = Vec2(l.x(), l.y()) / nab;
  hf.foot = -(l.z() / nab) * hf.normal;
  hf.tangent = Vec2(-foot_dir.y(), foot_dir.x());
  hf.offset = std::hypot(hf.foot.norm(), frame.radius);
  return hf;
}

}  // namespace

CodecFrame::CodecFrame(ImageSize image, double r) : size(image), radius(r), half_diagonal_(image.half_diagonal()) {
  if (!(half_diagonal_ > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(radius > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "sphere radius must be positive");
}

Vec3 CodecFrame::to_normalized(const HomogeneousPoint& p) const {
  const Vec2 c = size.centre();
  const double w = p.v.z();
  return {(p.v.x() - c.x() * w) / half_diagonal_, (p.v.y() - c.y() * w) / half_diagonal_, w};
}

HomogeneousPoint CodecFrame::from_normalized(const Vec3& p) const {
  const Vec2 c = size.centre();
  return {p.x() * half_diagonal_ + c.x() * p.z(), p.y() * half_diagonal_ + c.y() * p.z(), p.z()};
}

Vec3 CodecFrame::to_normalized(const HomogeneousLine& l) const {
  const Vec2 c = size.centre();
  return {l.v.x() * half_diagonal_, l.v.y() * half_diagonal_, l.v.x() * c.x() + l.v.y() * c.y() + l.v.z()};
}

HomogeneousLine CodecFrame::from_normalized_line(const Vec3& l) const {
  const Vec2 c = size.centre();
  const double a = l.x() / half_diagonal_;
  const double b = l.y() / half_diagonal_;
  return {a, b, l.z() - a * c.x() - b * c.y()};
}

double EncodedPoint::norm() const { return std::hypot(qx, qy); }
double EncodedLine::norm() const { return std::hypot(qx, qy); }

namespace {

// Scaling to length r can round one ulp past the circle; pull such codes back inside.
Vec2 onto_disk(Vec2 q, double r) {
  while (std::hypot(q.x(), q.y()) > r) q *= 1.0 - std::numeric_limits<double>::epsilon();
  return q;
}

}  // namespace

EncodedPoint encode_point(const HomogeneousPoint& p, const CodecFrame& frame) {
  if (p.v.isZero()) throw GeometryError(ErrorCode::InvalidArgument, "zero homogeneous point");
  const Vec3 n = frame.to_normalized(p);
  const double r = frame.radius;

  if (n.z() == 0.0) {
    // Boundary limit; direction d and -d are the same point, canonical half-plane dy > 0.
    Vec2 d(n.x(), n.y());
    if (d.y() < 0.0 || (d.y() == 0.0 && d.x() < 0.0)) d = -d;
    d = onto_disk(d * (r / d.norm()), r);
    return {d.x(), d.y()};
  }

  const double s = sign_of(n.z()) * r / std::hypot(n.x(), n.y(), r * n.z());
  const Vec2 q = onto_disk(Vec2(s * n.x(), s * n.y()), r);
  return {q.x(), q.y()};
}

HomogeneousPoint decode_point(const EncodedPoint& q, const CodecFrame& frame) {
  const double r = frame.radius;
  const double qn = q.norm();
  if (qn > r + kBoundaryTolerance) throw GeometryError(ErrorCode::OutsideDisk, "point code outside the disk");
  if (qn >= r * (1.0 - kCircleUlps)) return frame.from_normalized(Vec3(q.qx, q.qy, 0.0));
  const double depth = std::sqrt((r - qn) * (r + qn));  // -s_z
  return frame.from_normalized(Vec3(r * q.qx, r * q.qy, depth));
}

EncodedLine encode_line(const HomogeneousLine& l, const CodecFrame& frame) {
  if (l.v.isZero()) throw GeometryError(ErrorCode::InvalidArgument, "zero homogeneous line");
  const double r = frame.radius;
  const Vec3 ln = frame.to_normalized(l);
  const Vec3 normal(ln.x(), ln.y(), -ln.z() / r);

  double sigma = 0.0;
  if (normal.z() != 0.0) {
    sigma = -sign_of(normal.z());
  } else if (normal.y() != 0.0) {
    sigma = -sign_of(normal.y());
  } else {
    sigma = sign_of(normal.x());
  }
  const Vec3 s = sigma * r * normal / normal.norm();
  const Vec2 q = onto_disk(s.head<2>(), r);
  return {q.x(), q.y()};
}

HomogeneousLine decode_line(const EncodedLine& q, const CodecFrame& frame) {
  const double r = frame.radius;
  const double qn = q.norm();
  if (qn >= r - kBoundaryTolerance) {
    throw GeometryError(ErrorCode::BoundaryUndefined, "line code on the boundary circle is ambiguous");
  }
  const double sz = -std::sqrt((r - qn) * (r + qn));
  return frame.from_normalized_line(Vec3(q.qx, q.qy, -r * sz));
}

double encode_horizontal_vp(const HomogeneousLine& horizon, const HomogeneousPoint& vp, const CodecFrame& frame) {
  const HorizonFrame hf = horizon_frame(horizon, frame);
  const Vec3 p = frame.to_normalized(vp);
  const double r = frame.radius;

  if (p.z() == 0.0) {
    const Vec2 d(p.x(), p.y());
    if (std::abs(hf.normal.dot(d)) > kIncidenceTolerance * d.norm()) {
      throw GeometryError(ErrorCode::NotOnHorizon, "direction is not parallel to the horizon");
    }
    const double along = hf.tangent.dot(d);
    const double across = hf.foot.dot(d) / hf.offset;
    return std::atan2(std::abs(along), sign_of(along) * across);
  }

  const Vec2 x = p.head<2>() / p.z();
  if (std::abs(hf.normal.dot(x - hf.foot)) > kIncidenceTolerance) {
    throw GeometryError(ErrorCode::NotOnHorizon, "vanishing point is not on the horizon");
  }
  // v1 = (x, -r) from C; its component along (foot, -r)/offset and along the tangent.
  const double across = (x.dot(hf.foot) + r * r) / hf.offset;
  const double along = hf.tangent.dot(x);
  return std::atan2(along, across);
}

HomogeneousPoint decode_horizontal_vp(const HomogeneousLine& horizon, double angle, const CodecFrame& frame) {
  if (!(std::abs(angle) <= 0.5 * std::numbers::pi)) {
    throw GeometryError(ErrorCode::InvalidArgument, "alignment angle outside [-pi/2, pi/2]");
  }
  const HorizonFrame hf = horizon_frame(horizon, frame);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec2 xy = c * hf.foot + hf.offset * s * hf.tangent;
  return frame.from_normalized(Vec3(xy.x(), xy.y(), c));
}

}  // namespace bev
