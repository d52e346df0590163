#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fieldguard/errors.hpp"
#include "fieldguard/optics.hpp"

namespace fg = fieldguard;

namespace {

fg::CameraIntrinsics camera(double focal_mm = 4.0, double pitch_um = 4.0, double range_m = 500.0) {
    return fg::CameraIntrinsics("c1", focal_mm, pitch_um, range_m, 1920, 1080);
}

}  // namespace

TEST(AngleOfView, RightAngleWhenHalfWidthEqualsDistance) {
    EXPECT_DOUBLE_EQ(fg::angle_of_view(10.0, 10.0), fg::kPi / 2.0);
}

TEST(AngleOfView, SixtyDegreeHalfAngle) {
    EXPECT_NEAR(fg::angle_of_view(std::sqrt(3.0) * 10.0, 10.0), 2.0 * fg::kPi / 3.0, 1e-12);
}

TEST(AngleOfView, HalfWidthFiveAtTen) {
    // 2 atan(0.5), 30-digit reference value.
    EXPECT_NEAR(fg::angle_of_view(5.0, 10.0), 0.927295218001612232, 1e-15);
}

TEST(AngleOfView, RejectsNonPositive) {
    EXPECT_THROW(fg::angle_of_view(0.0, 10.0), fg::DomainError);
    EXPECT_THROW(fg::angle_of_view(10.0, -1.0), fg::DomainError);
    EXPECT_THROW(fg::angle_of_view(NAN, 1.0), fg::DomainError);
}

TEST(AngleOfView, MonotoneAndScaleFree) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 1000.0);
    for (int i = 0; i < 200; ++i) {
        const double d = u(rng), p = u(rng), k = u(rng);
        const double a = fg::angle_of_view(d, p);
        EXPECT_GT(a, 0.0);
        EXPECT_LT(a, fg::kPi);
        EXPECT_NEAR(fg::angle_of_view(k * d, k * p), a, 1e-12);
        EXPECT_GT(fg::angle_of_view(d * 1.01, p), a);
        EXPECT_LT(fg::angle_of_view(d, p * 1.01), a);
    }
}

TEST(FovGeometry, TangentAndRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 500.0);
    for (int i = 0; i < 100; ++i) {
        const fg::FovGeometry g(u(rng), u(rng));
        EXPECT_NEAR(std::tan(g.half_angle_rad()), g.half_width_m() / g.perpendicular_distance_m(),
                    1e-12 * g.half_width_m() / g.perpendicular_distance_m());
        const auto back = fg::FovGeometry::from_half_angle(g.perpendicular_distance_m(), g.half_angle_rad());
        EXPECT_NEAR(back.half_width_m(), g.half_width_m(), 1e-9 * g.half_width_m());
        EXPECT_DOUBLE_EQ(g.full_width_m(), 2.0 * g.half_width_m());
    }
}

TEST(Ifov, DatasheetUnits) {
    EXPECT_DOUBLE_EQ(fg::ifov(camera(4.0, 4.0)), 0.001);
    EXPECT_DOUBLE_EQ(fg::ifov(camera(8.0, 2.0)), 0.00025);
    // 5.86 um / 12 mm by hand: 0.00586 / 12 = 4.88333...e-4
    EXPECT_NEAR(fg::ifov(camera(12.0, 5.86)), 4.8833333333333333e-4, 1e-18);
}

TEST(Ifov, LinearInPitchInverseInFocal) {
    const double base = fg::ifov(camera(6.0, 3.0));
    EXPECT_NEAR(fg::ifov(camera(6.0, 6.0)), 2.0 * base, 1e-18);
    EXPECT_NEAR(fg::ifov(camera(12.0, 3.0)), 0.5 * base, 1e-18);
}

TEST(CameraIntrinsics, RejectsInvalid) {
    EXPECT_THROW(fg::CameraIntrinsics("c", 0.0, 4.0, 10.0, 10, 10), fg::DomainError);
    EXPECT_THROW(fg::CameraIntrinsics("c", 4.0, -1.0, 10.0, 10, 10), fg::DomainError);
    EXPECT_THROW(fg::CameraIntrinsics("c", 4.0, 4.0, 0.0, 10, 10), fg::DomainError);
    EXPECT_THROW(fg::CameraIntrinsics("c", 4.0, 4.0, 10.0, 0, 10), fg::DomainError);
}

TEST(CameraPose, NormalizesBoresightAndChecksAngle) {
    const fg::CameraPose pose({1.0, 2.0}, {3.0, 4.0}, 1.0);
    EXPECT_NEAR(fg::norm(pose.boresight()), 1.0, 1e-12);
    EXPECT_THROW(fg::CameraPose({0, 0}, {0, 0}, 1.0), fg::DomainError);
    EXPECT_THROW(fg::CameraPose({0, 0}, {1, 0}, 0.0), fg::DomainError);
    EXPECT_THROW(fg::CameraPose({0, 0}, {1, 0}, fg::kPi), fg::DomainError);
}

TEST(InFieldOfView, BoundaryInclusive) {
    const fg::CameraPose pose({0, 0}, {1, 0}, fg::kPi / 2.0);
    const auto intr = camera();
    EXPECT_TRUE(fg::in_field_of_view(pose, intr, {5, 5}));
    EXPECT_TRUE(fg::in_field_of_view(pose, intr, {5, -5}));
    EXPECT_FALSE(fg::in_field_of_view(pose, intr, {5, 6}));  // atan(6/5) = 50.19 deg
    EXPECT_FALSE(fg::in_field_of_view(pose, intr, {1000, 0}));
    EXPECT_TRUE(fg::in_field_of_view(pose, intr, {500, 0}));
    EXPECT_TRUE(fg::in_field_of_view(pose, intr, {0, 0}));
    EXPECT_FALSE(fg::in_field_of_view(pose, intr, {-1, 0}));
}

TEST(InFieldOfView, RotationInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-400.0, 400.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * fg::kPi);
    std::uniform_real_distribution<double> aov(0.2, 3.0);
    const auto intr = camera();
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const fg::Vec2 pos{coord(rng), coord(rng)};
        const fg::Vec2 bore = fg::rotate({1.0, 0.0}, angle(rng));
        const fg::Vec2 pt{coord(rng), coord(rng)};
        const double a = aov(rng);
        const double r = angle(rng);
        const fg::CameraPose p1(pos, bore, a);
        const fg::CameraPose p2(fg::rotate(pos, r), fg::rotate(bore, r), a);
        // Skip points within rounding distance of the cone edge or range circle.
        const fg::Vec2 off = pt - pos;
        const double off_axis = std::abs(std::atan2(fg::cross(bore, off), fg::dot(bore, off)));
        if (std::abs(off_axis - a / 2) < 1e-9 || std::abs(fg::norm(off) - intr.range_m()) < 1e-6) continue;
        EXPECT_EQ(fg::in_field_of_view(p1, intr, pt), fg::in_field_of_view(p2, intr, fg::rotate(pt, r)));
        ++checked;
    }
    EXPECT_GT(checked, 400);
}

TEST(SensorAngleOfView, FromSensorWidth) {
    // 1920 px * 4 um = 7.68 mm sensor; half 3.84 mm over 4 mm focal.
    EXPECT_NEAR(fg::sensor_angle_of_view(camera()), 2.0 * std::atan(3.84 / 4.0), 1e-12);
}
