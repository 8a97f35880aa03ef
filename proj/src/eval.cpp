#include "bev/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "bev/rectify.hpp"

namespace bev {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// y(x) of a non-vertical line.
double height_at(const HomogeneousLine& l, double x) {
  const double a = l.v.x();
  const double b = l.v.y();
  const double n = std::hypot(a, b);
  if (n == 0.0 || std::abs(b) / n < 1e-12) throw GeometryError(ErrorCode::VerticalLine, "horizon is vertical or at infinity");
  return -(a * x + l.v.z()) / b;
}

}  // namespace

double horizon_error(const HomogeneousLine& gt, const HomogeneousLine& est, ImageSize image) {
  if (image.width <= 0 || image.height <= 0) throw GeometryError(ErrorCode::InvalidArgument, "image dimensions must be positive");
  // Both heights are affine in x, so the maximum gap is at an end of the image.
  double worst = 0.0;
  for (double x : {0.0, static_cast<double>(image.width)}) {
    worst = std::max(worst, std::abs(height_at(gt, x) - height_at(est, x)));
  }
  return worst / image.height;
}

AucCurve auc(std::span<const double> errors, double cutoff) {
  if (errors.empty()) throw GeometryError(ErrorCode::EmptyInput, "no horizon errors");
  if (!(cutoff > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "AUC cutoff must be positive");

  std::vector<double> sorted(errors.begin(), errors.end());
  for (double e : sorted) {
    if (!(e >= 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "horizon errors must be >= 0");
  }
  std::sort(sorted.begin(), sorted.end());

  AucCurve curve;
  curve.cutoff = cutoff;
  const double n = static_cast<double>(sorted.size());
  double area = 0.0;
  for (double e : sorted) area += cutoff - std::min(e, cutoff);
  curve.auc = area / (n * cutoff);

  // Empirical CDF F(t) = #{e <= t} / n at 0, at each distinct error below the cutoff, and at the cutoff.
  const auto cdf = [&](double t) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) / n;
  };
  curve.thresholds.push_back(0.0);
  curve.fractions.push_back(cdf(0.0));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double t = sorted[i];
    if (t <= curve.thresholds.back()) continue;
    if (t >= cutoff) break;
    curve.thresholds.push_back(t);
    curve.fractions.push_back(cdf(t));
  }
  curve.thresholds.push_back(cutoff);
  curve.fractions.push_back(cdf(cutoff));
  return curve;
}

ParameterErrors parameter_errors(const CameraParams& gt, const CameraParams& est, ImageSize image) {
  ParameterErrors e;
  e.fov_deg = std::abs(fov_from_focal(gt.focal, image.width) - fov_from_focal(est.focal, image.width)) * kRadToDeg;
  e.tilt_deg = std::abs(gt.tilt - est.tilt) * kRadToDeg;
  e.roll_deg = std::abs(gt.roll - est.roll) * kRadToDeg;
  return e;
}

RunningCameraEstimate::RunningCameraEstimate(double reference_focal) : reference_(reference_focal) {
  if (!(reference_focal > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "reference focal length must be positive");
}

void RunningCameraEstimate::add(const CameraParams& frame) {
  ++count_;
  sum_focal_ += frame.focal;
  sum_tilt_ += frame.tilt;
  sum_roll_ += frame.roll;
  if (reference_) trace_.push_back(std::abs(sum_focal_ / count_ - *reference_) / *reference_);
}

CameraParams RunningCameraEstimate::mean() const {
  if (count_ == 0) throw GeometryError(ErrorCode::EmptyInput, "no frames averaged");
  const double n = static_cast<double>(count_);
  return {sum_focal_ / n, sum_tilt_ / n, sum_roll_ / n};
}

RunningCameraEstimate video_average(std::span<const CameraParams> frames, std::optional<double> reference_focal) {
  if (frames.empty()) throw GeometryError(ErrorCode::EmptyInput, "video stream has no frames");
  RunningCameraEstimate est = reference_focal ? RunningCameraEstimate(*reference_focal) : RunningCameraEstimate();
  for (const CameraParams& f : frames) est.add(f);
  return est;
}

std::string format_report(const EvaluationSummary& s) {
  std::ostringstream out;
  char line[160];
  out << "metric                         value\n";
  out << "-----------------------------  ------------\n";
  std::snprintf(line, sizeof line, "%-29s  %zu\n", "images", s.images);
  out << line;
  std::snprintf(line, sizeof line, "%-29s  %.4f\n", "horizon AUC", s.curve.auc);
  out << line;
  std::snprintf(line, sizeof line, "%-29s  %.4f\n", "AUC cutoff", s.curve.cutoff);
  out << line;
  std::snprintf(line, sizeof line, "%-29s  %.6f\n", "mean horizon error", s.mean_horizon_error);
  out << line;
  if (s.parameter_samples > 0) {
    std::snprintf(line, sizeof line, "%-29s  %zu\n", "parameter samples", s.parameter_samples);
    out << line;
    std::snprintf(line, sizeof line, "%-29s  %.4f\n", "mean FOV error (deg)", s.mean_parameter_errors.fov_deg);
    out << line;
    std::snprintf(line, sizeof line, "%-29s  %.4f\n", "mean tilt error (deg)", s.mean_parameter_errors.tilt_deg);
    out << line;
    std::snprintf(line, sizeof line, "%-29s  %.4f\n", "mean roll error (deg)", s.mean_parameter_errors.roll_deg);
    out << line;
  }
  if (s.failures > 0) {
    std::snprintf(line, sizeof line, "%-29s  %zu\n", "parameter recovery failures", s.failures);
    out << line;
  }
  return out.str();
}

std::string curve_csv(const AucCurve& curve) {
  std::ostringstream out;
  out << "threshold,fraction\n";
  out.precision(10);
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) out << curve.thresholds[i] << ',' << curve.fractions[i] << '\n';
  return out.str();
}

}  // namespace bev
