#pragma once

// Finite encoding of image points and lines, including entities at infinity.
//
// Coordinates are shifted to the principal point and divided by the image
// half-diagonal. A sphere of radius r = 1 rests on the image plane with its
// centre at (0, 0, r). A point P is encoded by the orthogonal projection of
// the intersection of segment C->P with the sphere; a line by the orthogonal
// projection of the lower-hemisphere end of the normal to the plane through
// C and the line. Every code lies in the closed disk of radius r.

#include "bev/geometry.hpp"

namespace bev {

struct CodecFrame {
  ImageSize size;
  double radius{1.0};

  explicit CodecFrame(ImageSize image, double r = 1.0);

  [[nodiscard]] double scale() const { return half_diagonal_; }
  [[nodiscard]] Vec3 to_normalized(const HomogeneousPoint& p) const;
  [[nodiscard]] HomogeneousPoint from_normalized(const Vec3& p) const;
  [[nodiscard]] Vec3 to_normalized(const HomogeneousLine& l) const;
  [[nodiscard]] HomogeneousLine from_normalized_line(const Vec3& l) const;

 private:
  double half_diagonal_;
};

struct EncodedPoint {
  double qx{0.0};
  double qy{0.0};
  [[nodiscard]] double norm() const;
};

struct EncodedLine {
  double qx{0.0};
  double qy{0.0};
  [[nodiscard]] double norm() const;
};

/// Four regression targets: horizon code then vertical-VP code.
struct EncodedGeometry {
  EncodedLine horizon;
  EncodedPoint vertical_vp;
};

EncodedPoint encode_point(const HomogeneousPoint& p, const CodecFrame& frame);
/// Codes on the boundary circle decode to points at infinity.
HomogeneousPoint decode_point(const EncodedPoint& q, const CodecFrame& frame);

EncodedLine encode_line(const HomogeneousLine& l, const CodecFrame& frame);
/// Boundary codes (lines through the principal point) are rejected with BoundaryUndefined.
HomogeneousLine decode_line(const EncodedLine& q, const CodecFrame& frame);

/// Signed angle in (-pi/2, pi/2) between C->vp and the normal from C to the horizon.
/// Positive when vp is counterclockwise of the normal foot as seen from C.
double encode_horizontal_vp(const HomogeneousLine& horizon, const HomogeneousPoint& vp, const CodecFrame& frame);
HomogeneousPoint decode_horizontal_vp(const HomogeneousLine& horizon, double angle, const CodecFrame& frame);

}  // namespace bev
