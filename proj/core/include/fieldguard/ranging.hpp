#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "fieldguard/optics.hpp"

namespace fieldguard {

/// Linear pixel-to-ground model: every pixel covers range x IFOV meters,
/// whatever the true depth of the object. The fixed range is the model's
/// dominant systematic error source.
class RangingModel {
public:
    explicit RangingModel(CameraIntrinsics intrinsics);

    const CameraIntrinsics& intrinsics() const noexcept { return intrinsics_; }
    double ifov() const noexcept { return ifov_; }
    double meters_per_pixel() const noexcept { return meters_per_pixel_; }

private:
    CameraIntrinsics intrinsics_;
    double ifov_;
    double meters_per_pixel_;
};

/// Ground distance for a pixel separation: range x IFOV x d.
/// Throws DomainError for negative or non-finite `d_px`.
double actual_distance(const RangingModel& model, double d_px);

/// Exact inverse of actual_distance.
double pixel_distance_for(const RangingModel& model, double ad_m);

/// 100 (obtained - actual) / actual. Throws DomainError when actual <= 0.
double percent_error(double obtained, double actual);

class ErrorRecord {
public:
    ErrorRecord(std::string label, double obtained_m, double actual_m);

    const std::string& label() const noexcept { return label_; }
    double obtained_m() const noexcept { return obtained_; }
    double actual_m() const noexcept { return actual_; }
    double percent_error() const noexcept { return percent_; }

private:
    std::string label_;
    double obtained_;
    double actual_;
    double percent_;
};

struct ErrorSummary {
    std::optional<double> mean_positive;
    std::optional<double> mean_negative;
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;
    std::size_t zero_count = 0;
};

/// Means of the strictly positive and strictly negative percent errors.
/// A mean is absent (not zero) when its subset is empty.
ErrorSummary summarize_errors(std::span<const ErrorRecord> records);

/// Same aggregation over bare percentages, e.g. values already rounded for
/// publication.
ErrorSummary summarize_percent_errors(std::span<const double> percents);

/// Extra time the animal needs to cover the overestimate,
/// (obtained - actual) / speed. Negative means the trigger fired early.
double deterrence_delay(double obtained_m, double actual_m, double animal_speed_mps);

}  // namespace fieldguard
