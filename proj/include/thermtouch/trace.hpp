#pragma once

#include <vector>

#include "thermtouch/hand_detect.hpp"

namespace thermtouch {

struct TracePoint {
    double x = 0.0;
    double y = 0.0;
    int frame = 0;  // frame in which these pixels first showed residual heat
};

struct TracePolyline {
    std::vector<TracePoint> points;  // ordered by frame
    double length = 0.0;
};

struct TraceConfig {
    float residual_floor = 0.05F;
    int hand_guard = 3;  // px of dilation around the foreground mask
    float decay_margin = 0.01F;
    int min_pixels = 8;               // smaller residual groups are dropped as noise
    int min_stamp_pixels = 3;         // smaller per-frame pieces add no trace point
    double simplify_tolerance = 1.5;  // px, Douglas-Peucker; 0 keeps every centroid
};

class MissingBaseline : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Index of the first non-skipped frame with no detected hand.
int baseline_frame(const FrameAnalysis& analysis);

/// Residual-heat trajectories relative to the baseline frame. Each pixel is
/// stamped with the first frame in which it is clear of the (dilated)
/// foreground and warmer than the baseline by more than residual_floor.
/// Stamped pixels are grouped 8-connected; each group becomes one polyline
/// with one centroid per stamp frame (taken over the largest connected piece
/// of that stamp, if it has min_stamp_pixels), then simplified. Groups under
/// min_pixels are dropped. Throws MissingBaseline.
std::vector<TracePolyline> build_trace(const FrameAnalysis& analysis, const TraceConfig& cfg = {});

/// True when the oldest point has cooled relative to the newest one, measured
/// in the first frame at or after the newest stamp where both are uncovered.
/// Static warm objects show no such ordering and fail.
bool trace_decay_check(const TracePolyline& polyline, const FrameAnalysis& analysis, const TraceConfig& cfg = {});

double polyline_length(const std::vector<TracePoint>& points);

/// Douglas-Peucker simplification; endpoints and point order are kept.
std::vector<TracePoint> simplify_polyline(const std::vector<TracePoint>& points, double tolerance);

}  // namespace thermtouch
