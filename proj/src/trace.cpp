#include "thermtouch/trace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "thermtouch/imgproc.hpp"

namespace thermtouch {

namespace {

float residual_at(const GrayImage& frame, const GrayImage& base, double x, double y) {
    const int cx = static_cast<int>(std::lround(x));
    const int cy = static_cast<int>(std::lround(y));
    double sum = 0.0;
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const int px = cx + dx;
            const int py = cy + dy;
            if (px < 0 || py < 0 || px >= frame.width || py >= frame.height) continue;
            sum += std::clamp(frame.at(px, py) - base.at(px, py), 0.0F, 1.0F);
            ++n;
        }
    }
    return n == 0 ? 0.0F : static_cast<float>(sum / n);
}

bool covered(const BinaryMask& guard, double x, double y) {
    const int px = static_cast<int>(std::lround(x));
    const int py = static_cast<int>(std::lround(y));
    return guard.inside(px, py) && guard.at(px, py);
}

double segment_distance(const TracePoint& p, const TracePoint& a, const TracePoint& b) {
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double u = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(p.x - (a.x + u * vx), p.y - (a.y + u * vy));
}

void douglas_peucker(const std::vector<TracePoint>& pts, std::size_t lo, std::size_t hi, double tol,
                     std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    double worst = -1.0;
    std::size_t at = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double d = segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > worst) {
            worst = d;
            at = i;
        }
    }
    if (worst <= tol) return;
    keep[at] = true;
    douglas_peucker(pts, lo, at, tol, keep);
    douglas_peucker(pts, at, hi, tol, keep);
}

}  // namespace

std::vector<TracePoint> simplify_polyline(const std::vector<TracePoint>& points, double tolerance) {
    if (points.size() <= 2 || tolerance <= 0.0) return points;
    std::vector<bool> keep(points.size(), false);
    keep.front() = keep.back() = true;
    douglas_peucker(points, 0, points.size() - 1, tolerance, keep);
    std::vector<TracePoint> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (keep[i]) out.push_back(points[i]);
    }
    return out;
}

double polyline_length(const std::vector<TracePoint>& points) {
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        len += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
    }
    return len;
}

int baseline_frame(const FrameAnalysis& analysis) {
    const auto& obs = analysis.observations;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs[i].skipped && !obs[i].hand) return static_cast<int>(i);
    }
    throw MissingBaseline("no hand-free frame to use as trace baseline");
}

std::vector<TracePolyline> build_trace(const FrameAnalysis& analysis, const TraceConfig& cfg) {
    const int b = baseline_frame(analysis);
    const GrayImage& base = analysis.normalized[static_cast<std::size_t>(b)];
    const int w = base.width;
    const int h = base.height;

    std::vector<int> stamp(static_cast<std::size_t>(w) * h, -1);
    for (std::size_t f = static_cast<std::size_t>(b) + 1; f < analysis.normalized.size(); ++f) {
        if (analysis.observations[f].skipped) continue;
        const GrayImage& img = analysis.normalized[f];
        const BinaryMask guard = dilate_disk(analysis.masks[f], cfg.hand_guard);
        for (std::size_t i = 0; i < stamp.size(); ++i) {
            if (stamp[i] >= 0 || guard.bits[i]) continue;
            if (img.values[i] - base.values[i] > cfg.residual_floor) stamp[i] = static_cast<int>(f);
        }
    }

    BinaryMask trail(w, h);
    for (std::size_t i = 0; i < stamp.size(); ++i) trail.bits[i] = stamp[i] >= 0 ? 1 : 0;
    std::vector<int> labels;
    const int n = label_components(trail, labels);

    // Split every group into pieces of 8-connected pixels sharing one stamp.
    // Only the largest piece per (group, stamp) is kept: late, isolated
    // stamps come from faint trail edges crossing the floor through noise.
    std::vector<std::map<int, std::array<double, 3>>> groups(static_cast<std::size_t>(n) + 1);
    std::vector<std::uint8_t> seen(stamp.size(), 0);
    std::vector<Point> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (labels[i] == 0 || seen[i]) continue;
            std::array<double, 3> acc{};
            queue.assign(1, Point{x, y});
            seen[i] = 1;
            while (!queue.empty()) {
                const Point p = queue.back();
                queue.pop_back();
                acc[0] += p.x;
                acc[1] += p.y;
                acc[2] += 1.0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                        if (seen[j] || stamp[j] != stamp[i]) continue;
                        seen[j] = 1;
                        queue.push_back({nx, ny});
                    }
                }
            }
            auto& best = groups[static_cast<std::size_t>(labels[i])][stamp[i]];
            if (acc[2] > best[2]) best = acc;
        }
    }

    std::vector<TracePolyline> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l) {
        TracePolyline pl;
        double pixels = 0.0;
        for (const auto& [frame, acc] : groups[static_cast<std::size_t>(l)]) {
            pixels += acc[2];
            if (acc[2] >= cfg.min_stamp_pixels) pl.points.push_back({acc[0] / acc[2], acc[1] / acc[2], frame});
        }
        if (pixels < cfg.min_pixels) continue;
        pl.points = simplify_polyline(pl.points, cfg.simplify_tolerance);
        pl.length = polyline_length(pl.points);
        out.push_back(std::move(pl));
    }
    return out;
}

bool trace_decay_check(const TracePolyline& polyline, const FrameAnalysis& analysis, const TraceConfig& cfg) {
    if (polyline.points.size() <= 1) return true;
    const int b = baseline_frame(analysis);
    const GrayImage& base = analysis.normalized[static_cast<std::size_t>(b)];
    const TracePoint& oldest = polyline.points.front();
    const TracePoint& newest = polyline.points.back();

    for (std::size_t f = static_cast<std::size_t>(std::max(newest.frame, b)); f < analysis.normalized.size(); ++f) {
        if (analysis.observations[f].skipped) continue;
        const BinaryMask guard = dilate_disk(analysis.masks[f], cfg.hand_guard);
        if (covered(guard, oldest.x, oldest.y) || covered(guard, newest.x, newest.y)) continue;
        const float old_r = residual_at(analysis.normalized[f], base, oldest.x, oldest.y);
        const float new_r = residual_at(analysis.normalized[f], base, newest.x, newest.y);
        return old_r + cfg.decay_margin <= new_r;
    }
    return false;
}

}  // namespace thermtouch
