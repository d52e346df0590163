#include "fieldguard/optics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fieldguard/errors.hpp"

namespace fieldguard {
namespace {

// Slack for the inclusive cone boundary so that points exactly on it are not
// lost to rounding in atan2 and boresight normalization.
constexpr double kBoundaryToleranceRad = 1e-12;

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError(std::string(name) + " must be positive and finite, got " +
                          std::to_string(value));
    }
}

}  // namespace

CameraIntrinsics::CameraIntrinsics(std::string camera_id, double focal_length_mm,
                                   double pixel_pitch_um, double range_m, int image_width,
                                   int image_height)
    : camera_id_(std::move(camera_id)),
      focal_length_m_(focal_length_mm * 1e-3),
      pixel_pitch_m_(pixel_pitch_um * 1e-6),
      range_m_(range_m),
      image_width_(image_width),
      image_height_(image_height) {
    require_positive(focal_length_mm, "focal_length_mm");
    require_positive(pixel_pitch_um, "pixel_pitch_um");
    require_positive(range_m, "range_m");
    if (image_width < 1 || image_height < 1) {
        throw DomainError("image dimensions must be at least 1x1");
    }
}

FovGeometry::FovGeometry(double half_width_m, double perpendicular_distance_m)
    : half_width_(half_width_m), perpendicular_distance_(perpendicular_distance_m), half_angle_(0.0) {
    require_positive(half_width_m, "half_width_d");
    require_positive(perpendicular_distance_m, "perpendicular_distance_p");
    half_angle_ = std::atan(half_width_m / perpendicular_distance_m);
}

FovGeometry FovGeometry::from_half_angle(double perpendicular_distance_m, double half_angle_rad) {
    if (!(half_angle_rad > 0.0 && half_angle_rad < kPi / 2.0)) {
        throw DomainError("half angle must lie in (0, pi/2)");
    }
    return FovGeometry(perpendicular_distance_m * std::tan(half_angle_rad), perpendicular_distance_m);
}

CameraPose::CameraPose(Vec2 position, Vec2 boresight, double angle_of_view_rad)
    : position_(position), boresight_(boresight), angle_of_view_(angle_of_view_rad) {
    if (!std::isfinite(position.x) || !std::isfinite(position.y)) {
        throw DomainError("camera position must be finite");
    }
    const double n = norm(boresight);
    if (!std::isfinite(n) || n == 0.0) {
        throw DomainError("boresight must be a non-zero finite vector");
    }
    // Leave already-unit vectors alone so serialized poses round-trip exactly.
    if (std::abs(n - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
        boresight_ = (1.0 / n) * boresight;
    }
    if (!(angle_of_view_rad > 0.0 && angle_of_view_rad < kPi)) {
        throw DomainError("angle of view must lie in (0, pi)");
    }
}

double angle_of_view(double half_width_m, double perpendicular_distance_m) {
    return FovGeometry(half_width_m, perpendicular_distance_m).angle_of_view_rad();
}

double ifov(const CameraIntrinsics& intrinsics) {
    return intrinsics.pixel_pitch_m() / intrinsics.focal_length_m();
}

double sensor_angle_of_view(const CameraIntrinsics& intrinsics) {
    const double half_sensor = 0.5 * intrinsics.image_width() * intrinsics.pixel_pitch_m();
    return angle_of_view(half_sensor, intrinsics.focal_length_m());
}

bool in_field_of_view(const CameraPose& pose, const CameraIntrinsics& intrinsics, Vec2 point) {
    if (!std::isfinite(point.x) || !std::isfinite(point.y)) {
        throw DomainError("point must be finite");
    }
    const Vec2 offset = point - pose.position();
    const double dist = norm(offset);
    if (dist == 0.0) {
        return true;
    }
    if (dist > intrinsics.range_m()) {
        return false;
    }
    const double off_axis =
        std::abs(std::atan2(cross(pose.boresight(), offset), dot(pose.boresight(), offset)));
    return off_axis <= 0.5 * pose.angle_of_view_rad() + kBoundaryToleranceRad;
}

}  // namespace fieldguard
