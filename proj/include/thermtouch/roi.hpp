#pragma once

#include <span>
#include <vector>

#include "thermtouch/hand_detect.hpp"
#include "thermtouch/types.hpp"

namespace thermtouch {

struct FingertipSample {
    int x = 0;
    int y = 0;
    int frame = 0;
};

/// Every fingertip seen during the first pass, in frame order.
using FingertipHistory = std::vector<FingertipSample>;

/// Square region covering pixels [x, x+size) x [y, y+size).
struct Roi {
    int id = 0;
    int x = 0;
    int y = 0;
    int size = 0;

    bool contains(int px, int py) const { return px >= x && px < x + size && py >= y && py < y + size; }
    bool intersects(const Roi& o) const {
        return x < o.x + o.size && o.x < x + size && y < o.y + o.size && o.y < y + size;
    }

    friend bool operator==(const Roi&, const Roi&) = default;
};

FingertipHistory collect_history(std::span<const HandObservation> observations);

/// Square of side `size` centred on (cx, cy), shifted to lie inside the frame.
Roi roi_centered(int cx, int cy, int size, int width, int height);

/// Greedy fixed-size coverage of the fingertip scatter. Each round considers a
/// candidate centred on every remaining point, skips candidates that overlap
/// an accepted ROI, and keeps the one covering the most remaining points
/// (lowest point index on ties). Covered points leave the pool. Throws
/// std::invalid_argument unless 4 <= size <= min(width, height).
std::vector<Roi> select_rois(const FingertipHistory& history, int size, int width, int height);

/// Edges are inclusive: the first and last pixel rows/columns belong to the ROI.
bool roi_contains(const Roi& roi, Point p);

/// Any contour point inside the ROI, or any ROI corner inside the contour polygon.
bool roi_overlaps_contour(const Roi& roi, const Contour& c);

/// The ROI grown by `margin` pixels on every side (not clamped).
Roi inflate(const Roi& roi, int margin);

}  // namespace thermtouch
