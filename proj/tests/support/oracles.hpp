#pragma once

// Slow reference implementations used only by tests. None of these call into
// the library's geometry or NMS code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldguard/detections.hpp"

namespace oracle {

struct Box {
    double cx, cy, w, h;
};

inline Box box_of(const fieldguard::Detection& d) {
    return {d.bbox().cx(), d.bbox().cy(), d.bbox().w(), d.bbox().h()};
}

/// Overlap from explicit corner coordinates.
inline double iou(const Box& a, const Box& b) {
    const double ax0 = a.cx - a.w / 2, ax1 = a.cx + a.w / 2, ay0 = a.cy - a.h / 2, ay1 = a.cy + a.h / 2;
    const double bx0 = b.cx - b.w / 2, bx1 = b.cx + b.w / 2, by0 = b.cy - b.h / 2, by1 = b.cy + b.h / 2;
    const double ix = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
    const double iy = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    return inter / (a.w * a.h + b.w * b.h - inter);
}

/// Enumerates every subset of the confidence-surviving detections and
/// returns the one that is a fixed point of the greedy rule: a detection is
/// in the set exactly when no higher-priority member of the same class
/// overlaps it by more than the threshold. Priority is descending
/// confidence, then input position. Output in priority order.
inline std::vector<std::size_t> brute_force_nms(const std::vector<fieldguard::Detection>& dets,
                                                double iou_threshold, double confidence_threshold) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dets[i].confidence() >= confidence_threshold) cand.push_back(i);
    }
    const auto before = [&](std::size_t a, std::size_t b) {
        if (dets[a].confidence() != dets[b].confidence()) return dets[a].confidence() > dets[b].confidence();
        return a < b;
    };
    std::vector<std::vector<std::size_t>> fixed_points;
    const std::size_t n = cand.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            bool blocked = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (!(mask & (1u << j)) || j == i) continue;
                const auto a = cand[j], b = cand[i];
                if (before(a, b) && dets[a].class_label() == dets[b].class_label() &&
                    iou(box_of(dets[a]), box_of(dets[b])) > iou_threshold) {
                    blocked = true;
                }
            }
            const bool member = (mask & (1u << i)) != 0;
            ok = (member == !blocked);
        }
        if (ok) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) s.push_back(cand[i]);
            }
            std::sort(s.begin(), s.end(), before);
            fixed_points.push_back(s);
        }
    }
    // The greedy rule has exactly one fixed point; anything else is an oracle bug.
    if (fixed_points.size() != 1) {
        throw std::logic_error("NMS oracle found " + std::to_string(fixed_points.size()) + " fixed points");
    }
    return fixed_points.front();
}

struct SpeakerPoint {
    std::uint32_t id;
    double cx, cy;
};

/// Full distance table, then the minimum, then the smallest id among the
/// minima. `scale` multiplies every entry.
inline std::optional<std::uint32_t> exhaustive_nearest(double ax, double ay,
                                                       const std::vector<SpeakerPoint>& speakers,
                                                       double scale = 1.0) {
    if (speakers.empty()) return std::nullopt;
    std::vector<double> table;
    for (const auto& s : speakers) table.push_back(scale * std::sqrt((ax - s.cx) * (ax - s.cx) + (ay - s.cy) * (ay - s.cy)));
    const double best = *std::min_element(table.begin(), table.end());
    std::uint32_t id = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < speakers.size(); ++i) {
        if (table[i] == best) id = std::min(id, speakers[i].id);
    }
    return id;
}

/// Random detections on a small canvas so that overlaps are common.
inline std::vector<fieldguard::Detection> random_detections(std::mt19937_64& rng, std::size_t max_count) {
    std::uniform_int_distribution<std::size_t> count(0, max_count);
    std::uniform_real_distribution<double> pos(0.0, 60.0);
    std::uniform_real_distribution<double> size(5.0, 40.0);
    std::uniform_int_distribution<int> conf_step(0, 10);  // coarse grid forces ties
    std::uniform_int_distribution<int> cls(0, 2);
    const char* labels[] = {"bear", "cow", "speaker"};
    std::vector<fieldguard::Detection> out;
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(fieldguard::BBox(pos(rng), pos(rng), size(rng), size(rng)), labels[cls(rng)],
                         conf_step(rng) / 10.0);
    }
    return out;
}

}  // namespace oracle
