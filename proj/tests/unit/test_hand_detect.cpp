#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "thermtouch/hand_detect.hpp"
#include "thermtouch/imgproc.hpp"
#include "thermtouch/synth.hpp"

using namespace thermtouch;

namespace {

void fill_rect(BinaryMask& m, int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) m.set(x, y, true);
}

BinaryMask star_mask(int arms, double outer, double inner) {
    BinaryMask m(100, 100);
    std::vector<PointF> poly;
    for (int k = 0; k < 2 * arms; ++k) {
        const double a = -std::numbers::pi / 2 + k * std::numbers::pi / arms;
        const double r = k % 2 == 0 ? outer : inner;
        poly.push_back({50 + r * std::cos(a), 50 + r * std::sin(a)});
    }
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 100; ++x) {
            bool in = false;
            for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
                const auto& a = poly[i];
                const auto& b = poly[j];
                if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) in = !in;
            }
            m.set(x, y, in);
        }
    return m;
}

bool on_contour(const Contour& c, Point p) {
    for (const Point q : c.points)
        if (q == p) return true;
    return false;
}

SynthSceneConfig entering_hand_scene() {
    SynthSceneConfig cfg;
    cfg.duration_s = 3.0;
    cfg.seed = 21;
    ScriptedEvent ev;
    ev.kind = ScriptKind::Hover;
    const double t0 = 9.5 / cfg.fps;
    ev.path = {{80, 70, t0}, {80, 66, 2.9}};
    ev.contact = {false};
    cfg.events.push_back(ev);
    return cfg;
}

}  // namespace

TEST(DetectHand, EmptyMaskHasNoHand) {
    EXPECT_FALSE(detect_hand(BinaryMask(30, 30), {}).has_value());
}

TEST(DetectHand, PicksLargestAboveMinimum) {
    BinaryMask m(60, 60);
    fill_rect(m, 2, 2, 8, 8);     // polygon area 49
    fill_rect(m, 20, 20, 21, 21); // polygon area 400
    FingertipConfig cfg;
    cfg.min_hand_area = 100;
    const auto hand = detect_hand(m, cfg);
    ASSERT_TRUE(hand.has_value());
    EXPECT_DOUBLE_EQ(hand->area, 400.0);

    BinaryMask small(30, 30);
    fill_rect(small, 2, 2, 8, 8);
    EXPECT_FALSE(detect_hand(small, cfg).has_value());
}

TEST(DetectFingertips, ConvexBlobFallsBackToTop) {
    BinaryMask m(40, 40);
    fill_rect(m, 10, 12, 15, 15);
    const auto c = detect_hand(m, {}).value();
    const auto tips = detect_fingertips(c, {});
    ASSERT_EQ(tips.size(), 1u);
    EXPECT_EQ(tips[0].y, 12);
    EXPECT_TRUE(on_contour(c, tips[0]));

    FingertipConfig left;
    left.fallback = Extremity::Left;
    EXPECT_EQ(detect_fingertips(c, left).at(0).x, 10);
}

TEST(DetectFingertips, SplayedStarGivesFiveTips) {
    const auto c = detect_hand(star_mask(5, 40, 14), {}).value();
    const auto tips = detect_fingertips(c, {});
    EXPECT_EQ(tips.size(), 5u);
    for (const Point p : tips) {
        EXPECT_TRUE(on_contour(c, p));
        EXPECT_GT(std::hypot(p.x - 50.0, p.y - 50.0), 34.0);
    }
}

TEST(DetectFingertips, HighDepthThresholdFallsBack) {
    const auto c = detect_hand(star_mask(5, 40, 14), {}).value();
    FingertipConfig cfg;
    cfg.depth_thresh = 1000;
    EXPECT_EQ(detect_fingertips(c, cfg).size(), 1u);
}

TEST(DetectFingertips, RaisingDepthNeverAddsTips) {
    const auto c = detect_hand(star_mask(4, 38, 20), {}).value();
    std::size_t prev = 100;
    for (double d = 1.0; d < 30.0; d += 1.0) {
        FingertipConfig cfg;
        cfg.depth_thresh = d;
        const auto tips = detect_fingertips(c, cfg);
        bool fallback = tips.size() == 1;
        if (!fallback) {
            EXPECT_LE(tips.size(), prev);
            prev = tips.size();
        }
    }
}

TEST(PerFramePass, AmbientHasNoHands) {
    SynthSceneConfig cfg;
    cfg.duration_s = 2.0;
    const auto clip = generate(cfg);
    const auto obs = per_frame_pass(clip.sequence.frames, {}, {});
    ASSERT_EQ(obs.size(), clip.sequence.frames.size());
    for (const auto& o : obs) {
        EXPECT_FALSE(o.hand.has_value());
        EXPECT_TRUE(o.fingertips.empty());
    }
}

TEST(PerFramePass, HandEnteringAtFrameTen) {
    const auto clip = generate(entering_hand_scene());
    const auto obs = per_frame_pass(clip.sequence.frames, {}, {});
    ASSERT_EQ(obs.size(), clip.sequence.frames.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        EXPECT_EQ(obs[i].hand.has_value(), i >= 10) << "frame " << i;
        EXPECT_EQ(obs[i].frame_index, static_cast<int>(i));
        if (obs[i].hand) {
            ASSERT_FALSE(obs[i].fingertips.empty());
            for (const Point p : obs[i].fingertips) EXPECT_TRUE(on_contour(*obs[i].hand, p));
        }
    }
}

TEST(PerFramePass, DeterministicAcrossThreads) {
    const auto clip = generate(touch_scene(4, 2));
    const auto a = analyze_frames(clip.sequence.frames, {}, {}, 1);
    const auto b = analyze_frames(clip.sequence.frames, {}, {}, 4);
    ASSERT_EQ(a.observations.size(), b.observations.size());
    for (std::size_t i = 0; i < a.observations.size(); ++i) {
        EXPECT_EQ(a.observations[i].fingertips, b.observations[i].fingertips);
        EXPECT_EQ(a.masks[i].bits, b.masks[i].bits);
        EXPECT_EQ(a.normalized[i].values, b.normalized[i].values);
    }
}

TEST(PerFramePass, DarkFrameIsSkipped) {
    ThermalFrame f;
    f.width = 20;
    f.height = 20;
    f.counts.assign(400, 0);
    const std::vector<ThermalFrame> frames{f};
    const auto obs = per_frame_pass(frames, {}, {});
    ASSERT_EQ(obs.size(), 1u);
    EXPECT_TRUE(obs[0].skipped);
}
