#pragma once

#include <span>
#include <string>
#include <vector>

#include "thermtouch/frames_io.hpp"
#include "thermtouch/hand_detect.hpp"
#include "thermtouch/roi.hpp"

namespace thermtouch {

/// One debounced occupied episode of a ROI. `exit_frame` is the last occupied
/// frame; `pre_frame` / `post_frame` are the empty frames bracketing it.
struct OccupancyInterval {
    int roi_id = 0;
    int pre_frame = 0;
    int enter_frame = 0;
    int exit_frame = 0;
    int post_frame = 0;

    friend bool operator==(const OccupancyInterval&, const OccupancyInterval&) = default;
};

enum class EventKind { Touch, Hover };

std::string to_string(EventKind kind);

struct InteractionEvent {
    int roi_id = 0;
    OccupancyInterval interval;
    EventKind kind = EventKind::Hover;
    double mean_delta = 0.0;  // detector A: mean(post) - mean(pre)
    double diff_area = 0.0;   // detector B: px^2 of the largest warmed blob
    int fingertip_count = 0;
};

struct DetectorConfig {
    double tau_mean = 0.004;
    double tau_area = 9.0;
    double diff_blur_sigma = 1.0;
    int debounce = 2;
    // The occupancy test uses the ROI grown by this many pixels so that the
    // blurred warm fringe around the hand is never inside a comparison frame.
    int occupancy_margin = 3;
};

/// Everything the two-pass detector needs.
struct DetectConfig {
    PreprocessConfig preprocess;
    FingertipConfig fingertips;
    DetectorConfig detector;
    int roi_size = 24;
};

/// Raw per-frame occupancy of one ROI (fingertip inside or contour overlap).
/// With `foreground`, any foreground pixel in the ROI also counts, so warm
/// fragments too small to be a hand never leak into comparison frames.
/// Skipped frames report occupied so they never serve as comparison frames.
bool roi_occupied(const Roi& roi, const HandObservation& obs, int margin = 0,
                  const BinaryMask* foreground = nullptr);

/// Debounced occupancy state machine over a 0/1 pattern. A state change needs
/// `debounce` consecutive agreeing frames; intervals touching either end of
/// the sequence are dropped. Frame numbers are positions in `occupied`.
std::vector<OccupancyInterval> debounce_intervals(const std::vector<bool>& occupied, int debounce, int roi_id = 0);

/// Intervals for every ROI, ROI-major order.
std::vector<std::vector<OccupancyInterval>> occupancy_track(std::span<const HandObservation> observations,
                                                            std::span<const Roi> rois, int debounce,
                                                            int margin = 0,
                                                            std::span<const BinaryMask> foreground = {});

/// mean(post) - mean(pre). Throws std::invalid_argument on size mismatch.
double detector_mean(const GrayImage& pre, const GrayImage& post);

/// Pixel area of the largest connected warmed blob in the smoothed positive
/// difference, thresholded at max(0.5 * peak, 0.05).
double detector_diff_area(const GrayImage& pre, const GrayImage& post, const DetectorConfig& cfg);

/// Touch iff both detectors clear their thresholds.
InteractionEvent classify_touch(const OccupancyInterval& interval, std::span<const GrayImage> frames, const Roi& roi,
                                const DetectorConfig& cfg);

struct DetectionResult {
    std::vector<Roi> rois;
    std::vector<InteractionEvent> events;  // sorted by (enter_frame, roi_id)
    FrameAnalysis analysis;
};

/// Full two-pass pipeline over an in-memory sequence.
DetectionResult detect_events(std::span<const ThermalFrame> frames, const DetectConfig& cfg, unsigned threads = 1);

inline DetectionResult detect_events(const Sequence& seq, const DetectConfig& cfg, unsigned threads = 1) {
    return detect_events(std::span<const ThermalFrame>(seq.frames), cfg, threads);
}

}  // namespace thermtouch
