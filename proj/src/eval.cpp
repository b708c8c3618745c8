#include "thermtouch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "thermtouch/parallel.hpp"
#include "thermtouch/serialize.hpp"

namespace thermtouch {

namespace fs = std::filesystem;

namespace {

const Roi& roi_by_id(std::span<const Roi> rois, int id) {
    for (const Roi& r : rois) {
        if (r.id == id) return r;
    }
    throw std::invalid_argument("event refers to unknown ROI " + std::to_string(id));
}

bool overlaps(const InteractionEvent& e, const TruthEvent& t) {
    return e.interval.enter_frame <= t.end_frame && t.start_frame <= e.interval.exit_frame;
}

Point pixel(PointF p) { return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))}; }

}  // namespace

std::string to_string(ClipClass c) {
    switch (c) {
        case ClipClass::Touch: return "touch";
        case ClipClass::Hover: return "hover";
        case ClipClass::Negative: return "negative";
    }
    return "negative";
}

ClipClass clip_class_from_string(const std::string& s) {
    if (s == "touch") return ClipClass::Touch;
    if (s == "hover") return ClipClass::Hover;
    if (s == "negative") return ClipClass::Negative;
    throw std::invalid_argument("unknown clip class: " + s);
}

ClipClass truth_class(const GroundTruth& truth) {
    bool hover = false;
    for (const auto& e : truth.events) {
        if (e.kind == ScriptKind::Touch || e.kind == ScriptKind::Stroke) return ClipClass::Touch;
        hover = hover || e.kind == ScriptKind::Hover;
    }
    return hover ? ClipClass::Hover : ClipClass::Negative;
}

ClipClass predicted_class(std::span<const InteractionEvent> events) {
    bool hover = false;
    for (const auto& e : events) {
        if (e.kind == EventKind::Touch) return ClipClass::Touch;
        hover = true;
    }
    return hover ? ClipClass::Hover : ClipClass::Negative;
}

ClipVerdict score_clip(std::span<const InteractionEvent> events, std::span<const Roi> rois, const GroundTruth& truth) {
    ClipVerdict v;
    v.truth = truth_class(truth);
    v.predicted = predicted_class(events);
    std::vector<bool> used(events.size(), false);

    for (const auto& t : truth.events) {
        const EventKind want = t.kind == ScriptKind::Hover ? EventKind::Hover : EventKind::Touch;
        std::vector<PointF> points = t.points;
        if (t.kind == ScriptKind::Stroke && !t.polyline.empty()) points = {t.polyline.front()};
        bool hit = false;
        for (const PointF p : points) {
            for (std::size_t k = 0; k < events.size(); ++k) {
                const auto& e = events[k];
                if (e.kind != want || !overlaps(e, t)) continue;
                if (!roi_contains(roi_by_id(rois, e.roi_id), pixel(p))) continue;
                used[k] = true;
                hit = true;
            }
        }
        ++v.truth_events;
        if (hit) ++v.matched_events;
    }
    for (std::size_t k = 0; k < events.size(); ++k) {
        if (events[k].kind == EventKind::Touch && !used[k]) ++v.false_positives;
    }
    v.correct = v.matched_events == v.truth_events && v.false_positives == 0;
    return v;
}

ConfusionReport aggregate(std::vector<ClipVerdict> verdicts) {
    ConfusionReport r;
    int correct = 0;
    for (const auto& v : verdicts) {
        ++r.counts[static_cast<int>(v.truth)][static_cast<int>(v.predicted)];
        correct += v.correct ? 1 : 0;
        r.false_positive_count += v.false_positives;
        if (v.truth == ClipClass::Negative) {
            ++r.negative_clips;
            if (v.predicted == ClipClass::Touch) ++r.negative_clips_with_touch;
        }
    }
    r.accuracy = verdicts.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(verdicts.size());
    r.negative_false_positive_rate =
        r.negative_clips == 0 ? 0.0 : static_cast<double>(r.negative_clips_with_touch) / r.negative_clips;
    r.clips = std::move(verdicts);
    return r;
}

ConfusionReport score_corpus(const Manifest& manifest, const fs::path& corpus_dir, const fs::path& results_dir,
                             unsigned threads) {
    std::vector<ClipVerdict> verdicts(manifest.clips.size());
    parallel_for(manifest.clips.size(), threads, [&](std::size_t i) {
        const auto& entry = manifest.clips[i];
        const fs::path res = results_dir / entry.name;
        if (!fs::exists(res / "events.jsonl") || !fs::exists(res / "rois.json")) {
            throw IoError("missing results for clip " + entry.name + " in " + results_dir.string());
        }
        const GroundTruth truth = read_truth(corpus_dir / entry.name / "truth.json");
        const auto events = read_events(res / "events.jsonl");
        const auto rois = read_rois(res / "rois.json");
        ClipVerdict v = score_clip(events, rois, truth);
        v.name = entry.name;
        if (!entry.category.empty()) v.truth = clip_class_from_string(entry.category);
        verdicts[i] = std::move(v);
    });
    return aggregate(std::move(verdicts));
}

std::string report_to_json(const ConfusionReport& r) {
    using nlohmann::json;
    json confusion = json::object();
    for (int t = 0; t < 3; ++t) {
        json row = json::object();
        for (int p = 0; p < 3; ++p) row[to_string(static_cast<ClipClass>(p))] = r.counts[t][p];
        confusion[to_string(static_cast<ClipClass>(t))] = row;
    }
    json clips = json::array();
    for (const auto& v : r.clips) {
        clips.push_back({{"name", v.name},
                         {"truth", to_string(v.truth)},
                         {"predicted", to_string(v.predicted)},
                         {"correct", v.correct},
                         {"truth_events", v.truth_events},
                         {"matched_events", v.matched_events},
                         {"false_positives", v.false_positives}});
    }
    json j = {{"accuracy", r.accuracy},
              {"false_positive_count", r.false_positive_count},
              {"negative_clips", r.negative_clips},
              {"negative_clips_with_touch", r.negative_clips_with_touch},
              {"negative_false_positive_rate", r.negative_false_positive_rate},
              {"confusion", confusion},
              {"clips", clips}};
    return j.dump(2) + "\n";
}

std::string format_report(const ConfusionReport& r) {
    std::string out;
    char buf[128];
    out += "truth \\ predicted     touch     hover  negative\n";
    for (int t = 0; t < 3; ++t) {
        std::snprintf(buf, sizeof(buf), "%-18s%9d %9d %9d\n", to_string(static_cast<ClipClass>(t)).c_str(),
                      r.counts[t][0], r.counts[t][1], r.counts[t][2]);
        out += buf;
    }
    int correct = 0;
    for (const auto& v : r.clips) correct += v.correct ? 1 : 0;
    std::snprintf(buf, sizeof(buf), "accuracy %.4f (%d/%zu clips)\n", r.accuracy, correct, r.clips.size());
    out += buf;
    std::snprintf(buf, sizeof(buf), "false positives %d, negative clips with a touch %d/%d\n", r.false_positive_count,
                  r.negative_clips_with_touch, r.negative_clips);
    out += buf;
    for (const auto& v : r.clips) {
        if (v.correct) continue;
        std::snprintf(buf, sizeof(buf), "  wrong: %s (truth %s, predicted %s, matched %d/%d, fp %d)\n", v.name.c_str(),
                      to_string(v.truth).c_str(), to_string(v.predicted).c_str(), v.matched_events, v.truth_events,
                      v.false_positives);
        out += buf;
    }
    return out;
}

}  // namespace thermtouch
