#include <random>

#include <gtest/gtest.h>

#include "thermtouch/synth.hpp"
#include "thermtouch/touch_events.hpp"

using namespace thermtouch;

namespace {

std::vector<bool> pattern(const std::string& s) {
    std::vector<bool> out;
    for (char c : s) out.push_back(c == 'O');
    return out;
}

GrayImage patch_image(int w, int h, int x0, int y0, int pw, int ph, float v) {
    GrayImage img(w, h);
    for (int y = y0; y < y0 + ph; ++y)
        for (int x = x0; x < x0 + pw; ++x) img.at(x, y) = v;
    return img;
}

int touches(const DetectionResult& r) {
    int n = 0;
    for (const auto& e : r.events) n += e.kind == EventKind::Touch ? 1 : 0;
    return n;
}

}  // namespace

TEST(Debounce, SingleEpisode) {
    const auto iv = debounce_intervals(pattern("EEOOOEE"), 2, 7);
    ASSERT_EQ(iv.size(), 1u);
    EXPECT_EQ(iv[0], (OccupancyInterval{7, 1, 2, 4, 5}));
}

TEST(Debounce, FlickerIgnored) {
    EXPECT_TRUE(debounce_intervals(pattern("EOE"), 2).empty());
    EXPECT_TRUE(debounce_intervals(pattern("EEOEEOEE"), 2).empty());
}

TEST(Debounce, EpisodesAtSequenceEndsDropped) {
    EXPECT_TRUE(debounce_intervals(pattern("OOOEE"), 2).empty());
    EXPECT_TRUE(debounce_intervals(pattern("EEOOO"), 2).empty());
    EXPECT_TRUE(debounce_intervals(pattern(""), 2).empty());
}

TEST(Debounce, ShortGapDoesNotSplit) {
    const auto iv = debounce_intervals(pattern("EEOOEOOEE"), 2);
    ASSERT_EQ(iv.size(), 1u);
    EXPECT_EQ(iv[0].enter_frame, 2);
    EXPECT_EQ(iv[0].exit_frame, 6);
    EXPECT_EQ(iv[0].post_frame, 7);
}

TEST(Debounce, TwoEpisodes) {
    const auto iv = debounce_intervals(pattern("EEOOEEEOOOEE"), 2);
    ASSERT_EQ(iv.size(), 2u);
    EXPECT_EQ(iv[0].pre_frame, 1);
    EXPECT_EQ(iv[0].post_frame, 4);
    EXPECT_EQ(iv[1].pre_frame, 6);
    EXPECT_EQ(iv[1].exit_frame, 9);
}

TEST(Debounce, IntervalsAreOrderedAndBracketed) {
    std::mt19937 rng(3);
    std::bernoulli_distribution d(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<bool> occ(40);
        for (auto&& b : occ) b = d(rng);
        const auto iv = debounce_intervals(occ, 2);
        int last = -1;
        for (const auto& i : iv) {
            EXPECT_LT(last, i.pre_frame);
            EXPECT_EQ(i.pre_frame + 1, i.enter_frame);
            EXPECT_LE(i.enter_frame, i.exit_frame);
            EXPECT_EQ(i.exit_frame + 1, i.post_frame);
            EXPECT_FALSE(occ[i.pre_frame]);
            EXPECT_FALSE(occ[i.post_frame]);
            EXPECT_TRUE(occ[i.enter_frame]);
            EXPECT_TRUE(occ[i.exit_frame]);
            last = i.post_frame;
        }
    }
}

TEST(RoiOccupied, FingertipContourAndForeground) {
    const Roi roi{0, 10, 10, 10};
    HandObservation obs;
    EXPECT_FALSE(roi_occupied(roi, obs));
    obs.fingertips = {{15, 15}};
    EXPECT_TRUE(roi_occupied(roi, obs));

    HandObservation near;
    near.fingertips = {{21, 15}};
    EXPECT_FALSE(roi_occupied(roi, near));
    EXPECT_TRUE(roi_occupied(roi, near, 3));

    HandObservation skipped;
    skipped.skipped = true;
    EXPECT_TRUE(roi_occupied(roi, skipped));

    BinaryMask fg(40, 40);
    fg.set(12, 12, true);
    EXPECT_TRUE(roi_occupied(roi, HandObservation{}, 0, &fg));
}

TEST(DetectorMean, MatchesDirectMean) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<float> u(0.0F, 1.0F);
    GrayImage a(24, 24), b(24, 24);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.values[i] = u(rng);
        b.values[i] = u(rng);
        sa += a.values[i];
        sb += b.values[i];
    }
    EXPECT_NEAR(detector_mean(a, b), (sb - sa) / a.size(), 1e-9);
    EXPECT_EQ(detector_mean(a, a), 0.0);
    EXPECT_THROW(detector_mean(a, GrayImage(3, 3)), std::invalid_argument);
}

TEST(DetectorDiffArea, PatchArea) {
    const GrayImage pre(24, 24);
    const GrayImage post = patch_image(24, 24, 9, 9, 6, 6, 0.2F);
    EXPECT_NEAR(detector_diff_area(pre, post, {}), 36.0, 36.0 * 0.3);
}

TEST(DetectorDiffArea, UniformWarmingHasNoBlob) {
    const GrayImage pre(24, 24);
    const GrayImage post(24, 24, 0.02F);
    EXPECT_EQ(detector_diff_area(pre, post, {}), 0.0);
}

TEST(DetectorDiffArea, CoolingHasNoBlob) {
    const GrayImage pre = patch_image(24, 24, 9, 9, 6, 6, 0.2F);
    const GrayImage post(24, 24);
    EXPECT_EQ(detector_diff_area(pre, post, {}), 0.0);
}

TEST(ClassifyTouch, IdenticalFramesAreHover) {
    const std::vector<GrayImage> frames(6, GrayImage(40, 40, 0.1F));
    const Roi roi{0, 5, 5, 24};
    const OccupancyInterval iv{0, 1, 2, 3, 4};
    const auto e = classify_touch(iv, frames, roi, {});
    EXPECT_EQ(e.kind, EventKind::Hover);
    EXPECT_EQ(e.mean_delta, 0.0);
}

TEST(ClassifyTouch, WarmPatchIsTouch) {
    std::vector<GrayImage> frames(6, GrayImage(40, 40));
    frames[4] = patch_image(40, 40, 12, 12, 6, 6, 0.3F);
    const Roi roi{0, 5, 5, 24};
    const OccupancyInterval iv{0, 1, 2, 3, 4};
    const auto e = classify_touch(iv, frames, roi, {});
    EXPECT_EQ(e.kind, EventKind::Touch);
    EXPECT_NEAR(e.mean_delta, 36 * 0.3 / (24.0 * 24.0), 1e-6);
}

TEST(ClassifyTouch, StricterThresholdsNeverAddTouches) {
    std::vector<GrayImage> frames(6, GrayImage(40, 40));
    frames[4] = patch_image(40, 40, 12, 12, 4, 4, 0.2F);
    const Roi roi{0, 5, 5, 24};
    const OccupancyInterval iv{0, 1, 2, 3, 4};
    bool was_touch = true;
    for (double tau = 0.0; tau < 0.02; tau += 0.001) {
        DetectorConfig cfg;
        cfg.tau_mean = tau;
        const bool touch = classify_touch(iv, frames, roi, cfg).kind == EventKind::Touch;
        EXPECT_TRUE(was_touch || !touch);
        was_touch = touch;
    }
    EXPECT_FALSE(was_touch);
}

TEST(DetectEvents, SyntheticTouch) {
    const auto clip = generate(touch_scene(5));
    const auto r = detect_events(clip.sequence, {});
    EXPECT_EQ(touches(r), 1);
    ASSERT_EQ(clip.truth.events.size(), 1u);
    for (std::size_t i = 1; i < r.events.size(); ++i) {
        EXPECT_LE(r.events[i - 1].interval.enter_frame, r.events[i].interval.enter_frame);
    }
}

TEST(DetectEvents, SyntheticHover) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto clip = generate(hover_scene(seed));
        const auto r = detect_events(clip.sequence, {});
        EXPECT_EQ(touches(r), 0) << "seed " << seed;
        EXPECT_GE(r.events.size(), 1u) << "seed " << seed;
    }
}

TEST(DetectEvents, WideTwoFingerTouch) {
    const auto clip = generate(touch_scene(8, 2, true));
    const auto r = detect_events(clip.sequence, {});
    std::vector<const InteractionEvent*> t;
    for (const auto& e : r.events)
        if (e.kind == EventKind::Touch) t.push_back(&e);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_NE(t[0]->roi_id, t[1]->roi_id);
    EXPECT_LE(t[0]->interval.enter_frame, t[1]->interval.exit_frame);
    EXPECT_LE(t[1]->interval.enter_frame, t[0]->interval.exit_frame);
}

TEST(DetectEvents, AmbientClipIsEmpty) {
    SynthSceneConfig cfg;
    cfg.duration_s = 3.0;
    const auto r = detect_events(generate(cfg).sequence, {});
    EXPECT_TRUE(r.rois.empty());
    EXPECT_TRUE(r.events.empty());
}

TEST(DetectEvents, ThreadCountDoesNotMatter) {
    const auto clip = generate(touch_scene(12, 3));
    const auto a = detect_events(clip.sequence, {}, 1);
    const auto b = detect_events(clip.sequence, {}, 3);
    EXPECT_EQ(a.rois, b.rois);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        EXPECT_EQ(a.events[i].interval, b.events[i].interval);
        EXPECT_EQ(a.events[i].mean_delta, b.events[i].mean_delta);
    }
}
