#include "thermtouch/touch_events.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermtouch/imgproc.hpp"
#include "thermtouch/parallel.hpp"

namespace thermtouch {

std::string to_string(EventKind kind) { return kind == EventKind::Touch ? "touch" : "hover"; }

bool roi_occupied(const Roi& roi, const HandObservation& obs, int margin, const BinaryMask* foreground) {
    if (obs.skipped) return true;
    const Roi r = margin > 0 ? inflate(roi, margin) : roi;
    for (const Point p : obs.fingertips) {
        if (roi_contains(r, p)) return true;
    }
    if (obs.hand && roi_overlaps_contour(r, *obs.hand)) return true;
    if (!foreground) return false;
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.size, foreground->width);
    const int y1 = std::min(r.y + r.size, foreground->height);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (foreground->at(x, y)) return true;
        }
    }
    return false;
}

std::vector<OccupancyInterval> debounce_intervals(const std::vector<bool>& occupied, int debounce, int roi_id) {
    std::vector<OccupancyInterval> out;
    if (occupied.empty()) return out;
    const int need = std::max(debounce, 1);
    const int n = static_cast<int>(occupied.size());

    bool state = occupied[0];
    // An episode already running at frame 0 has no empty frame before it.
    bool open_valid = false;
    OccupancyInterval cur;
    cur.roi_id = roi_id;
    int run_start = -1;

    for (int i = 1; i < n; ++i) {
        if (occupied[static_cast<std::size_t>(i)] == state) {
            run_start = -1;
            continue;
        }
        if (run_start < 0) run_start = i;
        if (i - run_start + 1 < need) continue;

        if (!state) {
            cur.pre_frame = run_start - 1;
            cur.enter_frame = run_start;
            open_valid = true;
        } else {
            cur.exit_frame = run_start - 1;
            cur.post_frame = run_start;
            if (open_valid) out.push_back(cur);
            open_valid = false;
        }
        state = !state;
        run_start = -1;
    }
    return out;
}

std::vector<std::vector<OccupancyInterval>> occupancy_track(std::span<const HandObservation> observations,
                                                            std::span<const Roi> rois, int debounce, int margin,
                                                            std::span<const BinaryMask> foreground) {
    std::vector<std::vector<OccupancyInterval>> out;
    out.reserve(rois.size());
    std::vector<bool> occ(observations.size());
    for (const Roi& roi : rois) {
        for (std::size_t i = 0; i < observations.size(); ++i) {
            const BinaryMask* fg = i < foreground.size() ? &foreground[i] : nullptr;
            occ[i] = roi_occupied(roi, observations[i], margin, fg);
        }
        out.push_back(debounce_intervals(occ, debounce, roi.id));
    }
    return out;
}

double detector_mean(const GrayImage& pre, const GrayImage& post) {
    if (pre.width != post.width || pre.height != post.height || pre.size() == 0) {
        throw std::invalid_argument("detector_mean: crop size mismatch");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < pre.size(); ++i) diff += static_cast<double>(post.values[i]) - pre.values[i];
    return diff / static_cast<double>(pre.size());
}

double detector_diff_area(const GrayImage& pre, const GrayImage& post, const DetectorConfig& cfg) {
    if (pre.width != post.width || pre.height != post.height) {
        throw std::invalid_argument("detector_diff_area: crop size mismatch");
    }
    GrayImage d(pre.width, pre.height);
    for (std::size_t i = 0; i < pre.size(); ++i) {
        d.values[i] = std::clamp(post.values[i] - pre.values[i], 0.0F, 1.0F);
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(2.0 * cfg.diff_blur_sigma)));
    const GrayImage smooth = gaussian_blur(d, cfg.diff_blur_sigma, radius);
    const float peak = *std::max_element(smooth.values.begin(), smooth.values.end());
    const float t = std::max(0.5F * peak, 0.05F);
    const BinaryMask mask = threshold(smooth, t);

    std::vector<int> labels;
    const int n = label_components(mask, labels);
    if (n == 0) return 0.0;
    std::vector<int> sizes(static_cast<std::size_t>(n) + 1, 0);
    for (const int l : labels) {
        if (l > 0) ++sizes[static_cast<std::size_t>(l)];
    }
    return *std::max_element(sizes.begin(), sizes.end());
}

InteractionEvent classify_touch(const OccupancyInterval& interval, std::span<const GrayImage> frames, const Roi& roi,
                                const DetectorConfig& cfg) {
    const auto n = static_cast<int>(frames.size());
    if (interval.pre_frame < 0 || interval.post_frame >= n) {
        throw std::out_of_range("classify_touch: comparison frame outside sequence");
    }
    const GrayImage pre = crop(frames[static_cast<std::size_t>(interval.pre_frame)], roi.x, roi.y, roi.size, roi.size);
    const GrayImage post =
        crop(frames[static_cast<std::size_t>(interval.post_frame)], roi.x, roi.y, roi.size, roi.size);

    InteractionEvent ev;
    ev.roi_id = roi.id;
    ev.interval = interval;
    ev.mean_delta = detector_mean(pre, post);
    ev.diff_area = detector_diff_area(pre, post, cfg);
    ev.kind = (ev.mean_delta >= cfg.tau_mean && ev.diff_area >= cfg.tau_area) ? EventKind::Touch : EventKind::Hover;
    return ev;
}

DetectionResult detect_events(std::span<const ThermalFrame> frames, const DetectConfig& cfg, unsigned threads) {
    DetectionResult res;
    if (frames.empty()) return res;
    const int width = frames.front().width;
    const int height = frames.front().height;

    res.analysis = analyze_frames(frames, cfg.preprocess, cfg.fingertips, threads);
    const auto& obs = res.analysis.observations;
    res.rois = select_rois(collect_history(obs), cfg.roi_size, width, height);

    const auto per_roi = occupancy_track(obs, res.rois, cfg.detector.debounce, cfg.detector.occupancy_margin,
                                         res.analysis.masks);
    std::vector<std::pair<const Roi*, OccupancyInterval>> jobs;
    for (std::size_t r = 0; r < per_roi.size(); ++r) {
        for (const auto& iv : per_roi[r]) jobs.emplace_back(&res.rois[r], iv);
    }

    res.events.resize(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t j) {
        const auto& [roi, iv] = jobs[j];
        InteractionEvent ev = classify_touch(iv, res.analysis.normalized, *roi, cfg.detector);
        int most = 0;
        for (int f = iv.enter_frame; f <= iv.exit_frame; ++f) {
            const auto& tips = obs[static_cast<std::size_t>(f)].fingertips;
            const auto inside = std::count_if(tips.begin(), tips.end(), [&](Point p) { return roi_contains(*roi, p); });
            most = std::max(most, static_cast<int>(inside));
        }
        ev.fingertip_count = most;
        res.events[j] = ev;
    });
    std::stable_sort(res.events.begin(), res.events.end(), [](const InteractionEvent& a, const InteractionEvent& b) {
        if (a.interval.enter_frame != b.interval.enter_frame) return a.interval.enter_frame < b.interval.enter_frame;
        return a.roi_id < b.roi_id;
    });
    return res;
}

}  // namespace thermtouch
