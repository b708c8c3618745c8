#pragma once

#include <optional>
#include <span>
#include <vector>

#include "thermtouch/types.hpp"

namespace thermtouch {

/// Which extreme contour point stands in for a lone extended finger.
enum class Extremity { Top, Bottom, Left, Right };

struct FingertipConfig {
    double depth_thresh = 8.0;     // minimum convexity-defect depth, px
    double min_hand_area = 150.0;  // px^2, shoelace area of the hand contour
    double merge_radius = 5.0;     // px
    Extremity fallback = Extremity::Top;
};

/// Segmentation settings shared by every per-frame stage.
struct PreprocessConfig {
    double blur_sigma = 1.0;
    int blur_radius = 2;
    float threshold = 0.5F;
};

struct HandObservation {
    int frame_index = 0;
    std::optional<Contour> hand;
    std::vector<Point> fingertips;
    bool skipped = false;  // degenerate frame (zero median); no data
};

/// Output of the first pass. `normalized` and `masks` are kept for the
/// second pass and for trace reconstruction; skipped frames hold zero images.
struct FrameAnalysis {
    std::vector<HandObservation> observations;
    std::vector<GrayImage> normalized;
    std::vector<BinaryMask> masks;
};

/// Largest contour by area, or none if it is smaller than min_hand_area.
std::optional<Contour> detect_hand(const BinaryMask& mask, const FingertipConfig& cfg);

/// Defect endpoints deeper than depth_thresh, merged within merge_radius and
/// snapped back onto the contour. Falls back to a single extreme point when no
/// defect qualifies. At most 10 tips are returned.
std::vector<Point> detect_fingertips(const Contour& hand, const FingertipConfig& cfg);

/// to_gray -> blur -> normalize; throws DegenerateFrame.
GrayImage preprocess(const ThermalFrame& frame, const PreprocessConfig& cfg);

/// threshold -> open -> close.
BinaryMask segment(const GrayImage& normalized, const PreprocessConfig& cfg);

/// First pass over a whole sequence. Output order follows input order and is
/// independent of `threads` (0 = all cores).
FrameAnalysis analyze_frames(std::span<const ThermalFrame> frames, const PreprocessConfig& pre,
                             const FingertipConfig& cfg, unsigned threads = 1);

/// Observation-only view of analyze_frames.
std::vector<HandObservation> per_frame_pass(std::span<const ThermalFrame> frames, const PreprocessConfig& pre,
                                            const FingertipConfig& cfg, unsigned threads = 1);

}  // namespace thermtouch
