#pragma once

// Inverse-mapping homography warp.

#include <cstdint>
#include <optional>

#include "bev/geometry.hpp"
#include "bev/raster.hpp"

namespace bev {

enum class Sampling { Bilinear, Nearest };

struct WarpSpec {
  Homography H;  // source -> canvas
  int width{1};
  int height{1};
  std::uint8_t fill{0};
  Sampling mode{Sampling::Bilinear};
  /// Source points x with retained.v . (x, 1) < 0 are left unmapped.
  std::optional<HomogeneousLine> retained;
  /// Add an alpha channel that is 0 on unmapped pixels and 255 elsewhere.
  bool alpha_output{false};
  /// Worker threads; 0 picks hardware concurrency. Output does not depend on this.
  unsigned threads{1};
};

RasterImage warp(const RasterImage& src, const WarpSpec& spec);

}  // namespace bev
