#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "thermtouch/roi.hpp"
#include "thermtouch/synth.hpp"
#include "thermtouch/touch_events.hpp"

namespace thermtouch {

enum class ClipClass { Touch = 0, Hover = 1, Negative = 2 };

std::string to_string(ClipClass c);
ClipClass clip_class_from_string(const std::string& s);

/// Touch if the truth holds a touch or stroke, hover if it holds a hover,
/// negative otherwise.
ClipClass truth_class(const GroundTruth& truth);

/// Touch if any touch event was predicted, hover if any hover event, else negative.
ClipClass predicted_class(std::span<const InteractionEvent> events);

struct ClipVerdict {
    std::string name;
    ClipClass truth = ClipClass::Negative;
    ClipClass predicted = ClipClass::Negative;
    bool correct = false;
    int truth_events = 0;
    int matched_events = 0;
    int false_positives = 0;  // predicted touches matched to no truth touch
};

/// A truth touch (or stroke) is matched when one of its contact points (one
/// per finger) lies in the ROI of a predicted touch whose [enter, exit]
/// overlaps the truth span by at least one frame; every such predicted touch
/// counts as matched. Hovers need a predicted hover under the same rule. The
/// clip is correct iff every truth event matched and no predicted touch is
/// left unmatched. Throws std::invalid_argument if an event names an unknown ROI.
ClipVerdict score_clip(std::span<const InteractionEvent> events, std::span<const Roi> rois, const GroundTruth& truth);

struct ConfusionReport {
    std::array<std::array<int, 3>, 3> counts{};  // [truth][predicted] in ClipClass order
    double accuracy = 0.0;
    int false_positive_count = 0;
    int negative_clips = 0;
    int negative_clips_with_touch = 0;
    double negative_false_positive_rate = 0.0;
    std::vector<ClipVerdict> clips;
};

ConfusionReport aggregate(std::vector<ClipVerdict> verdicts);

/// Reads `<corpus>/<clip>/truth.json` and `<results>/<clip>/{events.jsonl, rois.json}`
/// for every manifest clip. Throws IoError when a result is missing.
ConfusionReport score_corpus(const Manifest& manifest, const std::filesystem::path& corpus_dir,
                             const std::filesystem::path& results_dir, unsigned threads = 1);

std::string report_to_json(const ConfusionReport& report);
std::string format_report(const ConfusionReport& report);

}  // namespace thermtouch
