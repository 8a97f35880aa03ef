#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bev {

enum class ErrorCode {
  InvalidArgument,
  ZeroResult,          // cross product of parallel entities
  InfiniteInput,       // finite point or line required
  OutsideDisk,         // point code outside the radius-r disk
  BoundaryUndefined,   // line code on the boundary circle
  NotOnHorizon,        // horizontal VP is not incident with the horizon
  SameSide,            // v_z and horizon on the same side of the principal point
  VzAtInfinity,        // untilted camera, focal length unrecoverable from v_z
  ZeroTilt,            // horizon passes through the principal point
  FocalUnrecoverable,  // nadir view without a supplied focal length
  VerticalHorizon,     // roll near +-90 degrees
  UpwardTilt,          // camera looks above the horizon
  EmptyRegion,         // no source pixels below the horizon margin
  AllZero,             // selected probability mass is zero
  EmptyInput,
  VerticalLine,        // horizon error undefined for near-vertical lines
  DegenerateCamera,
  SingularH,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Raised by every geometric routine whose precondition fails.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// File system and decoding failures (unreadable files, unsupported formats).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record or file whose content does not match the expected schema.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace bev
