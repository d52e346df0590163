#pragma once

#include <string>

#include "fieldguard/geometry.hpp"

namespace fieldguard {

/// Camera datasheet parameters. Focal length is given in millimeters and
/// pixel pitch in micrometers; both are converted to meters once, here.
class CameraIntrinsics {
public:
    /// Throws DomainError when any quantity is non-positive or non-finite.
    CameraIntrinsics(std::string camera_id, double focal_length_mm, double pixel_pitch_um,
                     double range_m, int image_width, int image_height);

    const std::string& camera_id() const noexcept { return camera_id_; }
    double focal_length_mm() const noexcept { return focal_length_m_ * 1e3; }
    double pixel_pitch_um() const noexcept { return pixel_pitch_m_ * 1e6; }
    double focal_length_m() const noexcept { return focal_length_m_; }
    double pixel_pitch_m() const noexcept { return pixel_pitch_m_; }
    /// Distance at which detail can be captured; a user-supplied calibration.
    double range_m() const noexcept { return range_m_; }
    int image_width() const noexcept { return image_width_; }
    int image_height() const noexcept { return image_height_; }

private:
    std::string camera_id_;
    double focal_length_m_;
    double pixel_pitch_m_;
    double range_m_;
    int image_width_;
    int image_height_;
};

/// The right triangle between the camera, the reference plane at
/// perpendicular distance P and the edge of the view at half-width D.
class FovGeometry {
public:
    FovGeometry(double half_width_m, double perpendicular_distance_m);

    /// Rebuilds the geometry from P and the half angle (D = P tan x).
    static FovGeometry from_half_angle(double perpendicular_distance_m, double half_angle_rad);

    double half_width_m() const noexcept { return half_width_; }
    double perpendicular_distance_m() const noexcept { return perpendicular_distance_; }
    double half_angle_rad() const noexcept { return half_angle_; }
    /// Full horizontal extent 2D at the reference plane.
    double full_width_m() const noexcept { return 2.0 * half_width_; }
    double angle_of_view_rad() const noexcept { return 2.0 * half_angle_; }

private:
    double half_width_;
    double perpendicular_distance_;
    double half_angle_;
};

/// Camera placement on the ground plane.
class CameraPose {
public:
    /// `boresight` is normalized; a zero vector or an angle of view outside
    /// (0, pi) throws DomainError.
    CameraPose(Vec2 position, Vec2 boresight, double angle_of_view_rad);

    Vec2 position() const noexcept { return position_; }
    Vec2 boresight() const noexcept { return boresight_; }
    double angle_of_view_rad() const noexcept { return angle_of_view_; }

private:
    Vec2 position_;
    Vec2 boresight_;
    double angle_of_view_;
};

/// Full angle subtended by the camera, 2 atan(D / P).
double angle_of_view(double half_width_m, double perpendicular_distance_m);

/// Angle subtended by one pixel: pixel pitch over focal length (radians,
/// small-angle model).
double ifov(const CameraIntrinsics& intrinsics);

/// Horizontal angle of view implied by the sensor width and focal length.
double sensor_angle_of_view(const CameraIntrinsics& intrinsics);

/// True when `point` lies inside the view cone (boundary inclusive) and
/// within the camera's range. The camera position itself counts as inside.
bool in_field_of_view(const CameraPose& pose, const CameraIntrinsics& intrinsics, Vec2 point);

}  // namespace fieldguard
