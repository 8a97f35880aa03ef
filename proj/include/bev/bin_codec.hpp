#pragma once

// Regression-by-classification: scalars in [-r, r] to one of b equal bins, and
// probability vectors back to scalars via a weighted mean of the top-c bins.

#include <span>

namespace bev {

struct BinSpec {
  int bins{500};
  double radius{1.0};

  [[nodiscard]] double width() const { return 2.0 * radius / bins; }
  [[nodiscard]] double centre(int index) const { return -radius + (index + 0.5) * width(); }
  void validate() const;
};

struct BinTarget {
  int index{0};
  bool clamped{false};  // value was outside [-r, r]
};

BinTarget encode_scalar(double value, const BinSpec& spec);

/// Weighted mean of the centres of the c most probable bins (ties to the lower index).
double decode_topc(std::span<const double> probabilities, int c, const BinSpec& spec);

}  // namespace bev
