#include "thermtouch/hand_detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "thermtouch/imgproc.hpp"
#include "thermtouch/parallel.hpp"

namespace thermtouch {

namespace {

constexpr std::size_t kMaxFingertips = 10;

Point extreme_point(const Contour& c, Extremity which) {
    Point best = c.points.front();
    for (const Point p : c.points) {
        bool better = false;
        switch (which) {
            case Extremity::Top: better = p.y < best.y; break;
            case Extremity::Bottom: better = p.y > best.y; break;
            case Extremity::Left: better = p.x < best.x; break;
            case Extremity::Right: better = p.x > best.x; break;
        }
        if (better) best = p;
    }
    return best;
}

Point nearest_on_contour(const Contour& c, double x, double y) {
    Point best = c.points.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const Point p : c.points) {
        const double d = (p.x - x) * (p.x - x) + (p.y - y) * (p.y - y);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

int find_root(std::vector<int>& parent, int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
        parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        i = parent[static_cast<std::size_t>(i)];
    }
    return i;
}

}  // namespace

std::optional<Contour> detect_hand(const BinaryMask& mask, const FingertipConfig& cfg) {
    auto contours = find_contours(mask);
    const Contour* best = nullptr;
    for (const auto& c : contours) {
        // Strict comparison keeps the earliest contour (raster order) on ties.
        if (best == nullptr || c.area > best->area) best = &c;
    }
    if (best == nullptr || best->area < cfg.min_hand_area) return std::nullopt;
    return *best;
}

std::vector<Point> detect_fingertips(const Contour& hand, const FingertipConfig& cfg) {
    if (hand.points.empty()) return {};
    const auto hull = convex_hull(hand.points);
    const auto defects = convexity_defects(hand, hull);

    std::vector<Point> candidates;
    for (const auto& d : defects) {
        if (d.depth >= cfg.depth_thresh) {
            candidates.push_back(hand.points[static_cast<std::size_t>(d.start_idx)]);
            candidates.push_back(hand.points[static_cast<std::size_t>(d.end_idx)]);
        }
    }
    if (candidates.empty()) {
        if (hand.area >= cfg.min_hand_area) return {extreme_point(hand, cfg.fallback)};
        return {};
    }

    // Single-linkage grouping: adjacent defects share hull vertices, and
    // neighbouring hull vertices on one rounded fingertip sit a few px apart.
    const int n = static_cast<int>(candidates.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    const double r2 = cfg.merge_radius * cfg.merge_radius;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Point a = candidates[static_cast<std::size_t>(i)];
            const Point b = candidates[static_cast<std::size_t>(j)];
            const double d2 = static_cast<double>((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
            if (d2 < r2) parent[static_cast<std::size_t>(find_root(parent, j))] = find_root(parent, i);
        }
    }

    std::vector<int> order;  // roots in order of first appearance
    std::vector<double> sx(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sy(static_cast<std::size_t>(n), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const int r = find_root(parent, i);
        if (cnt[static_cast<std::size_t>(r)] == 0) order.push_back(r);
        sx[static_cast<std::size_t>(r)] += candidates[static_cast<std::size_t>(i)].x;
        sy[static_cast<std::size_t>(r)] += candidates[static_cast<std::size_t>(i)].y;
        ++cnt[static_cast<std::size_t>(r)];
    }

    std::vector<Point> tips;
    for (const int r : order) {
        const double cx = std::round(sx[static_cast<std::size_t>(r)] / cnt[static_cast<std::size_t>(r)]);
        const double cy = std::round(sy[static_cast<std::size_t>(r)] / cnt[static_cast<std::size_t>(r)]);
        const Point p = nearest_on_contour(hand, cx, cy);
        if (std::find(tips.begin(), tips.end(), p) == tips.end()) tips.push_back(p);
        if (tips.size() == kMaxFingertips) break;
    }
    return tips;
}

GrayImage preprocess(const ThermalFrame& frame, const PreprocessConfig& cfg) {
    return normalize(gaussian_blur(to_gray(frame), cfg.blur_sigma, cfg.blur_radius));
}

BinaryMask segment(const GrayImage& normalized, const PreprocessConfig& cfg) {
    return morph_close(morph_open(threshold(normalized, cfg.threshold)));
}

FrameAnalysis analyze_frames(std::span<const ThermalFrame> frames, const PreprocessConfig& pre,
                             const FingertipConfig& cfg, unsigned threads) {
    FrameAnalysis out;
    const std::size_t n = frames.size();
    out.observations.resize(n);
    out.normalized.resize(n);
    out.masks.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const ThermalFrame& f = frames[i];
        HandObservation& obs = out.observations[i];
        obs.frame_index = f.index;
        try {
            out.normalized[i] = preprocess(f, pre);
        } catch (const DegenerateFrame&) {
            obs.skipped = true;
            out.normalized[i] = GrayImage(f.width, f.height);
            out.masks[i] = BinaryMask(f.width, f.height);
            return;
        }
        out.masks[i] = segment(out.normalized[i], pre);
        obs.hand = detect_hand(out.masks[i], cfg);
        if (obs.hand) obs.fingertips = detect_fingertips(*obs.hand, cfg);
    });
    return out;
}

std::vector<HandObservation> per_frame_pass(std::span<const ThermalFrame> frames, const PreprocessConfig& pre,
                                            const FingertipConfig& cfg, unsigned threads) {
    return analyze_frames(frames, pre, cfg, threads).observations;
}

}  // namespace thermtouch
