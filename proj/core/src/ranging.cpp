#include "fieldguard/ranging.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fieldguard/errors.hpp"

namespace fieldguard {

RangingModel::RangingModel(CameraIntrinsics intrinsics)
    : intrinsics_(std::move(intrinsics)),
      ifov_(fieldguard::ifov(intrinsics_)),
      meters_per_pixel_(intrinsics_.range_m() * ifov_) {}

double actual_distance(const RangingModel& model, double d_px) {
    if (!std::isfinite(d_px) || d_px < 0.0) {
        throw DomainError("pixel distance must be finite and non-negative");
    }
    return model.intrinsics().range_m() * model.ifov() * d_px;
}

double pixel_distance_for(const RangingModel& model, double ad_m) {
    if (!std::isfinite(ad_m) || ad_m < 0.0) {
        throw DomainError("ground distance must be finite and non-negative");
    }
    return ad_m / (model.intrinsics().range_m() * model.ifov());
}

double percent_error(double obtained, double actual) {
    if (!std::isfinite(actual) || actual <= 0.0) {
        throw DomainError("actual distance must be positive");
    }
    return 100.0 * (obtained - actual) / actual;
}

ErrorRecord::ErrorRecord(std::string label, double obtained_m, double actual_m)
    : label_(std::move(label)),
      obtained_(obtained_m),
      actual_(actual_m),
      percent_(fieldguard::percent_error(obtained_m, actual_m)) {}

ErrorSummary summarize_percent_errors(std::span<const double> percents) {
    ErrorSummary summary;
    double pos_sum = 0.0;
    double neg_sum = 0.0;
    for (const double p : percents) {
        if (p > 0.0) {
            pos_sum += p;
            ++summary.positive_count;
        } else if (p < 0.0) {
            neg_sum += p;
            ++summary.negative_count;
        } else {
            ++summary.zero_count;
        }
    }
    if (summary.positive_count > 0) {
        summary.mean_positive = pos_sum / static_cast<double>(summary.positive_count);
    }
    if (summary.negative_count > 0) {
        summary.mean_negative = neg_sum / static_cast<double>(summary.negative_count);
    }
    return summary;
}

ErrorSummary summarize_errors(std::span<const ErrorRecord> records) {
    std::vector<double> percents;
    percents.reserve(records.size());
    for (const auto& r : records) {
        percents.push_back(r.percent_error());
    }
    return summarize_percent_errors(percents);
}

double deterrence_delay(double obtained_m, double actual_m, double animal_speed_mps) {
    if (!std::isfinite(animal_speed_mps) || animal_speed_mps <= 0.0) {
        throw DomainError("animal speed must be positive");
    }
    return (obtained_m - actual_m) / animal_speed_mps;
}

}  // namespace fieldguard
