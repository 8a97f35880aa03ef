#pragma once

// Horizon AUC, camera-parameter errors and per-stream parameter averaging.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bev/geometry.hpp"

namespace bev {

/// Default error cutoff for the horizon AUC.
inline constexpr double kDefaultAucCutoff = 0.25;

struct HorizonErrorSample {
  std::string image_id;
  double error{0.0};  // max |y_gt - y_est| over the image width, divided by the height
};

struct AucCurve {
  std::vector<double> thresholds;  // ascending, from 0 to the cutoff
  std::vector<double> fractions;   // fraction of images with error <= threshold
  double auc{0.0};
  double cutoff{kDefaultAucCutoff};
};

struct CameraParams {
  double focal{0.0};
  double tilt{0.0};
  double roll{0.0};
};

struct ParameterErrors {
  double fov_deg{0.0};
  double tilt_deg{0.0};
  double roll_deg{0.0};
};

double horizon_error(const HomogeneousLine& gt, const HomogeneousLine& est, ImageSize image);

/// Exact area under the empirical CDF of min(error, cutoff) on [0, cutoff], divided by cutoff.
AucCurve auc(std::span<const double> errors, double cutoff = kDefaultAucCutoff);

ParameterErrors parameter_errors(const CameraParams& gt, const CameraParams& est, ImageSize image);

/// Running arithmetic means of per-frame (f, tilt, roll) for one stream.
class RunningCameraEstimate {
 public:
  RunningCameraEstimate() = default;
  /// With a reference focal length, each frame appends |mean_f - ref| / ref to the trace.
  explicit RunningCameraEstimate(double reference_focal);

  void add(const CameraParams& frame);

  [[nodiscard]] std::size_t frames() const { return count_; }
  [[nodiscard]] CameraParams mean() const;
  [[nodiscard]] const std::vector<double>& focal_error_trace() const { return trace_; }
  [[nodiscard]] std::optional<double> reference_focal() const { return reference_; }

 private:
  std::size_t count_{0};
  double sum_focal_{0.0};
  double sum_tilt_{0.0};
  double sum_roll_{0.0};
  std::optional<double> reference_;
  std::vector<double> trace_;
};

RunningCameraEstimate video_average(std::span<const CameraParams> frames,
                                    std::optional<double> reference_focal = std::nullopt);

struct EvaluationSummary {
  std::size_t images{0};
  AucCurve curve;
  double mean_horizon_error{0.0};
  std::size_t parameter_samples{0};
  ParameterErrors mean_parameter_errors;
  std::size_t failures{0};  // predictions whose parameters could not be recovered
};

/// Plain-text table of the summary.
std::string format_report(const EvaluationSummary& summary);
/// Two-column CSV "threshold,fraction".
std::string curve_csv(const AucCurve& curve);

}  // namespace bev
