#include "thermtouch/roi.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "thermtouch/imgproc.hpp"

namespace thermtouch {

namespace {

// Summed-area table over the per-pixel count of remaining points, so each
// candidate is scored in O(1) instead of rescanning the point list.
class CoverageTable {
public:
    CoverageTable(int width, int height) : w_(width), h_(height), sat_(static_cast<std::size_t>(w_ + 1) * (h_ + 1)) {}

    void rebuild(const FingertipHistory& pts, const std::vector<bool>& remaining) {
        std::fill(sat_.begin(), sat_.end(), 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (remaining[i]) ++cell(pts[i].x + 1, pts[i].y + 1);
        }
        for (int y = 1; y <= h_; ++y) {
            for (int x = 1; x <= w_; ++x) {
                cell(x, y) += cell(x - 1, y) + cell(x, y - 1) - cell(x - 1, y - 1);
            }
        }
    }

    int count(const Roi& r) const {
        const int x0 = r.x;
        const int y0 = r.y;
        const int x1 = r.x + r.size;
        const int y1 = r.y + r.size;
        return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
    }

private:
    int& cell(int x, int y) { return sat_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    int at(int x, int y) const { return sat_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }

    int w_;
    int h_;
    std::vector<int> sat_;
};

}  // namespace

FingertipHistory collect_history(std::span<const HandObservation> observations) {
    FingertipHistory h;
    for (const auto& obs : observations) {
        for (const Point p : obs.fingertips) h.push_back({p.x, p.y, obs.frame_index});
    }
    return h;
}

Roi roi_centered(int cx, int cy, int size, int width, int height) {
    Roi r;
    r.size = size;
    r.x = std::clamp(cx - size / 2, 0, width - size);
    r.y = std::clamp(cy - size / 2, 0, height - size);
    return r;
}

std::vector<Roi> select_rois(const FingertipHistory& history, int size, int width, int height) {
    if (size < 4 || size > std::min(width, height)) {
        throw std::invalid_argument("select_rois: roi size must be in [4, min(width, height)]");
    }
    for (const auto& p : history) {
        if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
            throw std::invalid_argument("select_rois: fingertip outside frame");
        }
    }

    std::vector<bool> remaining(history.size(), true);
    std::size_t left = history.size();
    std::vector<Roi> rois;
    CoverageTable table(width, height);

    while (left > 0) {
        table.rebuild(history, remaining);
        int best_count = 0;
        Roi best;
        for (std::size_t i = 0; i < history.size(); ++i) {
            if (!remaining[i]) continue;
            const Roi cand = roi_centered(history[i].x, history[i].y, size, width, height);
            const int c = table.count(cand);
            if (c <= best_count) continue;
            const bool blocked =
                std::any_of(rois.begin(), rois.end(), [&](const Roi& r) { return r.intersects(cand); });
            if (blocked) continue;
            best_count = c;
            best = cand;
        }
        if (best_count == 0) break;
        best.id = static_cast<int>(rois.size());
        for (std::size_t i = 0; i < history.size(); ++i) {
            if (remaining[i] && best.contains(history[i].x, history[i].y)) {
                remaining[i] = false;
                --left;
            }
        }
        rois.push_back(best);
    }
    return rois;
}

bool roi_contains(const Roi& roi, Point p) { return roi.contains(p.x, p.y); }

bool roi_overlaps_contour(const Roi& roi, const Contour& c) {
    for (const Point p : c.points) {
        if (roi.contains(p.x, p.y)) return true;
    }
    const int x1 = roi.x + roi.size - 1;
    const int y1 = roi.y + roi.size - 1;
    const std::array<Point, 4> corners{Point{roi.x, roi.y}, Point{x1, roi.y}, Point{x1, y1}, Point{roi.x, y1}};
    return std::any_of(corners.begin(), corners.end(),
                       [&](Point q) { return point_in_polygon(c.points, q.x, q.y); });
}

Roi inflate(const Roi& roi, int margin) {
    return {roi.id, roi.x - margin, roi.y - margin, roi.size + 2 * margin};
}

}  // namespace thermtouch
