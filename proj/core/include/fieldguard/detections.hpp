#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fieldguard {

/// Center-form pixel box. Image origin is top-left, x to the right, y down.
/// Boxes may extend past the image bounds; nothing is clamped.
class BBox {
public:
    BBox(double cx, double cy, double w, double h);

    double cx() const noexcept { return cx_; }
    double cy() const noexcept { return cy_; }
    double w() const noexcept { return w_; }
    double h() const noexcept { return h_; }

    double left() const noexcept { return cx_ - 0.5 * w_; }
    double right() const noexcept { return cx_ + 0.5 * w_; }
    double top() const noexcept { return cy_ - 0.5 * h_; }
    double bottom() const noexcept { return cy_ + 0.5 * h_; }
    double area() const noexcept { return w_ * h_; }

    friend bool operator==(const BBox&, const BBox&) = default;

private:
    double cx_;
    double cy_;
    double w_;
    double h_;
};

class Detection {
public:
    Detection(BBox bbox, std::string class_label, double confidence);

    const BBox& bbox() const noexcept { return bbox_; }
    const std::string& class_label() const noexcept { return class_label_; }
    double confidence() const noexcept { return confidence_; }

    friend bool operator==(const Detection&, const Detection&) = default;

private:
    BBox bbox_;
    std::string class_label_;
    double confidence_;
};

/// One camera frame worth of detections; the unit of the wire protocol.
struct DetectionFrame {
    std::string camera_id;
    std::uint64_t frame_index = 0;
    std::int64_t timestamp_ms = 0;
    std::vector<Detection> detections;

    friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

struct NmsParams {
    double iou_threshold = 0.45;
    double confidence_threshold = 0.5;
};

/// Euclidean distance between box centers, in pixels.
double center_distance_px(const BBox& a, const BBox& b);

/// Intersection over union of two axis-aligned boxes; 0 when disjoint.
double iou(const BBox& a, const BBox& b);

/// Greedy class-wise non-maximum suppression.
///
/// Detections below `confidence_threshold` are dropped. The survivors are
/// visited by descending confidence (ties keep input order); each one is
/// kept unless an already-kept detection of the same class overlaps it with
/// IoU strictly greater than `iou_threshold`. The result is ordered by
/// descending confidence. Throws DomainError if a threshold is outside [0, 1].
std::vector<Detection> nms(std::span<const Detection> detections, const NmsParams& params);

}  // namespace fieldguard
