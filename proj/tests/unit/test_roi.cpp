#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "thermtouch/roi.hpp"

using namespace thermtouch;

namespace {

FingertipHistory random_history(std::mt19937& rng, int n, int w, int h) {
    std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1);
    FingertipHistory hist;
    for (int i = 0; i < n; ++i) hist.push_back({dx(rng), dy(rng), i});
    return hist;
}

int covered(const FingertipHistory& h, const std::vector<Roi>& rois) {
    int n = 0;
    for (const auto& s : h) {
        for (const auto& r : rois) {
            if (r.contains(s.x, s.y)) {
                ++n;
                break;
            }
        }
    }
    return n;
}

}  // namespace

TEST(SelectRois, EmptyHistory) {
    EXPECT_TRUE(select_rois({}, 24, 160, 120).empty());
}

TEST(SelectRois, OneClusterOneRoi) {
    const FingertipHistory h{{50, 50, 0}, {55, 52, 1}, {60, 58, 2}, {48, 61, 3}, {52, 45, 4}};
    const auto rois = select_rois(h, 24, 160, 120);
    ASSERT_EQ(rois.size(), 1u);
    for (const auto& s : h) EXPECT_TRUE(rois[0].contains(s.x, s.y));
    EXPECT_EQ(rois, oracle::greedy_rois(h, 24, 160, 120));
}

TEST(SelectRois, TwoSeparatedClusters) {
    const FingertipHistory h{{20, 20, 0}, {22, 25, 1}, {18, 19, 2}, {100, 90, 3}, {104, 88, 4}};
    const auto rois = select_rois(h, 24, 160, 120);
    ASSERT_EQ(rois.size(), 2u);
    EXPECT_EQ(covered(h, rois), 5);
    EXPECT_EQ(rois, oracle::greedy_rois(h, 24, 160, 120));
}

TEST(SelectRois, MatchesGreedyOracle) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 15;
        const auto h = random_history(rng, n, 80, 60);
        const int size = 8 + trial % 17;
        ASSERT_EQ(select_rois(h, size, 80, 60), oracle::greedy_rois(h, size, 80, 60)) << "trial " << trial;
    }
}

TEST(SelectRois, DisjointAndClamped) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = random_history(rng, 40, 160, 120);
        const auto rois = select_rois(h, 24, 160, 120);
        for (std::size_t i = 0; i < rois.size(); ++i) {
            EXPECT_EQ(rois[i].id, static_cast<int>(i));
            EXPECT_GE(rois[i].x, 0);
            EXPECT_GE(rois[i].y, 0);
            EXPECT_LE(rois[i].x + 24, 160);
            EXPECT_LE(rois[i].y + 24, 120);
            for (std::size_t j = i + 1; j < rois.size(); ++j) EXPECT_FALSE(rois[i].intersects(rois[j]));
        }
    }
}

TEST(SelectRois, CoverageCountIsOrderFree) {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto h = random_history(rng, 12, 60, 60);
        const auto a = select_rois(h, 16, 60, 60);
        std::shuffle(h.begin(), h.end(), rng);
        const auto b = select_rois(h, 16, 60, 60);
        ASSERT_FALSE(a.empty());
        ASSERT_FALSE(b.empty());
        // First pick covers the global maximum either way.
        int ca = 0, cb = 0;
        for (const auto& s : h) {
            ca += a[0].contains(s.x, s.y) ? 1 : 0;
            cb += b[0].contains(s.x, s.y) ? 1 : 0;
        }
        EXPECT_EQ(ca, cb);
    }
}

TEST(SelectRois, Deterministic) {
    std::mt19937 rng(1);
    const auto h = random_history(rng, 30, 160, 120);
    EXPECT_EQ(select_rois(h, 24, 160, 120), select_rois(h, 24, 160, 120));
}

TEST(SelectRois, RejectsBadSize) {
    const FingertipHistory h{{5, 5, 0}};
    EXPECT_THROW(select_rois(h, 3, 160, 120), std::invalid_argument);
    EXPECT_THROW(select_rois(h, 121, 160, 120), std::invalid_argument);
    EXPECT_NO_THROW(select_rois(h, 120, 160, 120));
}

TEST(RoiCentered, ClampsIntoFrame) {
    EXPECT_EQ(roi_centered(2, 3, 24, 160, 120).x, 0);
    EXPECT_EQ(roi_centered(2, 3, 24, 160, 120).y, 0);
    EXPECT_EQ(roi_centered(159, 119, 24, 160, 120).x, 136);
    EXPECT_EQ(roi_centered(159, 119, 24, 160, 120).y, 96);
    EXPECT_EQ(roi_centered(80, 60, 24, 160, 120).x, 68);
}

TEST(RoiContains, EdgesInclusive) {
    const Roi r{0, 10, 10, 24};
    EXPECT_TRUE(roi_contains(r, {10, 10}));
    EXPECT_TRUE(roi_contains(r, {33, 33}));
    EXPECT_FALSE(roi_contains(r, {34, 20}));
    EXPECT_FALSE(roi_contains(r, {9, 20}));
}

TEST(RoiOverlapsContour, Cases) {
    const Roi r{0, 40, 40, 10};
    Contour around;
    around.points = {{20, 20}, {80, 20}, {80, 80}, {20, 80}};
    EXPECT_TRUE(roi_overlaps_contour(r, around));

    Contour far;
    far.points = {{0, 0}, {5, 0}, {5, 5}, {0, 5}};
    EXPECT_FALSE(roi_overlaps_contour(r, far));

    Contour touching;
    touching.points = {{45, 45}, {100, 45}, {100, 100}};
    EXPECT_TRUE(roi_overlaps_contour(r, touching));
}

TEST(CollectHistory, FrameOrder) {
    std::vector<HandObservation> obs(3);
    obs[0].frame_index = 0;
    obs[1].frame_index = 1;
    obs[1].fingertips = {{3, 4}, {5, 6}};
    obs[2].frame_index = 2;
    obs[2].fingertips = {{7, 8}};
    const auto h = collect_history(obs);
    ASSERT_EQ(h.size(), 3u);
    EXPECT_EQ(h[0].frame, 1);
    EXPECT_EQ(h[2].x, 7);
    EXPECT_EQ(h[2].frame, 2);
}

TEST(Inflate, GrowsEverySide) {
    const Roi r = inflate(Roi{3, 10, 12, 8}, 3);
    EXPECT_EQ(r, (Roi{3, 7, 9, 14}));
}
