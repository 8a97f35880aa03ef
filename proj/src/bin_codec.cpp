#include "bev/bin_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bev/errors.hpp"

namespace bev {

void BinSpec::validate() const {
  if (bins < 2) throw GeometryError(ErrorCode::InvalidArgument, "bin count must be >= 2");
  if (!(radius > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "bin radius must be positive");
}

BinTarget encode_scalar(double value, const BinSpec& spec) {
  spec.validate();
  if (std::isnan(value)) throw GeometryError(ErrorCode::InvalidArgument, "cannot bin NaN");
  BinTarget t;
  if (value < -spec.radius || value > spec.radius) {
    t.clamped = true;
    value = std::clamp(value, -spec.radius, spec.radius);
  }
  const auto index = static_cast<int>(std::floor((value + spec.radius) * spec.bins / (2.0 * spec.radius)));
  t.index = std::clamp(index, 0, spec.bins - 1);
  return t;
}

double decode_topc(std::span<const double> probabilities, int c, const BinSpec& spec) {
  spec.validate();
  if (probabilities.size() != static_cast<std::size_t>(spec.bins)) {
    throw GeometryError(ErrorCode::InvalidArgument, "probability vector length does not match the bin count");
  }
  if (c < 1 || c > spec.bins) throw GeometryError(ErrorCode::InvalidArgument, "top-c count outside [1, bins]");
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw GeometryError(ErrorCode::InvalidArgument, "probabilities must be finite and >= 0");
  }

  std::vector<int> order(probabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + c, order.end(), [&](int a, int b) {
    return probabilities[a] > probabilities[b] || (probabilities[a] == probabilities[b] && a < b);
  });

  double mass = 0.0;
  double weighted = 0.0;
  for (int k = 0; k < c; ++k) {
    const int i = order[k];
    mass += probabilities[i];
    weighted += probabilities[i] * spec.centre(i);
  }
  if (mass == 0.0) throw GeometryError(ErrorCode::AllZero, "selected bins carry no probability mass");
  return weighted / mass;
}

}  // namespace bev
