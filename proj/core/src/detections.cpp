#include "fieldguard/detections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fieldguard/errors.hpp"

namespace fieldguard {

BBox::BBox(double cx, double cy, double w, double h) : cx_(cx), cy_(cy), w_(w), h_(h) {
    if (!std::isfinite(cx) || !std::isfinite(cy)) {
        throw DomainError("bbox center must be finite");
    }
    if (!std::isfinite(w) || !std::isfinite(h) || w <= 0.0 || h <= 0.0) {
        throw DomainError("bbox width and height must be positive");
    }
}

Detection::Detection(BBox bbox, std::string class_label, double confidence)
    : bbox_(bbox), class_label_(std::move(class_label)), confidence_(confidence) {
    if (class_label_.empty()) {
        throw DomainError("detection class label must not be empty");
    }
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw DomainError("detection confidence must lie in [0, 1], got " +
                          std::to_string(confidence));
    }
}

double center_distance_px(const BBox& a, const BBox& b) {
    return std::hypot(a.cx() - b.cx(), a.cy() - b.cy());
}

double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
    const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<Detection> nms(std::span<const Detection> detections, const NmsParams& params) {
    const auto in_unit = [](double t) { return t >= 0.0 && t <= 1.0; };
    if (!in_unit(params.iou_threshold) || !in_unit(params.confidence_threshold)) {
        throw DomainError("NMS thresholds must lie in [0, 1]");
    }

    std::vector<std::size_t> order;
    order.reserve(detections.size());
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (detections[i].confidence() >= params.confidence_threshold) {
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].confidence() > detections[b].confidence();
    });

    std::vector<Detection> kept;
    for (const std::size_t i : order) {
        const Detection& candidate = detections[i];
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return k.class_label() == candidate.class_label() &&
                   iou(k.bbox(), candidate.bbox()) > params.iou_threshold;
        });
        if (!suppressed) {
            kept.push_back(candidate);
        }
    }
    return kept;
}

}  // namespace fieldguard
