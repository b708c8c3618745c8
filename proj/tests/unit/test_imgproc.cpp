#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "thermtouch/imgproc.hpp"

using namespace thermtouch;

namespace {

GrayImage random_image(int w, int h, unsigned seed, float lo = 0.0F, float hi = 1.0F) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> d(lo, hi);
    GrayImage img(w, h);
    for (auto& v : img.values) v = d(rng);
    return img;
}

BinaryMask random_mask(int w, int h, unsigned seed, double p) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution d(p);
    BinaryMask m(w, h);
    for (auto& b : m.bits) b = d(rng) ? 1 : 0;
    return m;
}

void fill_rect(BinaryMask& m, int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) m.set(x, y, true);
}

BinaryMask erode_brute(const BinaryMask& m) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) all = all && (!m.inside(x + dx, y + dy) || m.at(x + dx, y + dy));
            out.set(x, y, all);
        }
    return out;
}

BinaryMask dilate_brute(const BinaryMask& m) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            bool any = false;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) any = any || (m.inside(x + dx, y + dy) && m.at(x + dx, y + dy));
            out.set(x, y, any);
        }
    return out;
}

// Scan-line fill of a closed polygon given in pixel coordinates.
BinaryMask raster_polygon(int w, int h, const std::vector<PointF>& poly) {
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
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

}  // namespace

TEST(ToGray, ScalesCounts) {
    ThermalFrame f;
    f.width = 3;
    f.height = 1;
    f.counts = {0, 65535, 32768};
    const GrayImage g = to_gray(f);
    EXPECT_EQ(g.values[0], 0.0F);
    EXPECT_EQ(g.values[1], 1.0F);
    EXPECT_NEAR(g.values[2], 32768.0 / 65535.0, 1e-7);
}

TEST(GaussianBlur, KernelIsNormalized) {
    const auto k = gaussian_kernel(1.0, 2);
    ASSERT_EQ(k.size(), 5u);
    double s = 0.0;
    for (double v : k) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(k[0], k[4]);
    EXPECT_NEAR(k[1] / k[2], std::exp(-0.5), 1e-12);
}

TEST(GaussianBlur, ConstantStaysConstant) {
    const GrayImage out = gaussian_blur(GrayImage(11, 7, 0.37F), 1.0, 2);
    for (float v : out.values) EXPECT_NEAR(v, 0.37F, 1e-6);
}

TEST(GaussianBlur, ImpulseGivesSampledGaussian) {
    GrayImage img(9, 9);
    img.at(4, 4) = 1.0F;
    const GrayImage out = gaussian_blur(img, 1.0, 2);
    double total = 0.0;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) total += std::exp(-(dx * dx + dy * dy) / 2.0);
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
            EXPECT_NEAR(out.at(4 + dx, 4 + dy), std::exp(-(dx * dx + dy * dy) / 2.0) / total, 1e-7);
    EXPECT_EQ(out.at(0, 0), 0.0F);
}

TEST(GaussianBlur, MatchesDirectConvolution) {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const GrayImage img = random_image(23, 17, seed);
        const GrayImage a = gaussian_blur(img, 1.0, 2);
        const GrayImage b = oracle::blur_direct(img, 1.0, 2);
        for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.values[i], b.values[i], 1e-6);
    }
    const GrayImage img = random_image(15, 15, 99);
    const GrayImage a = gaussian_blur(img, 1.7, 3);
    const GrayImage b = oracle::blur_direct(img, 1.7, 3);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.values[i], b.values[i], 1e-6);
}

TEST(GaussianBlur, PreservesInteriorMass) {
    GrayImage img(30, 30);
    const GrayImage patch = random_image(10, 10, 4);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) img.at(10 + x, 10 + y) = patch.at(x, y);
    double before = 0.0, after = 0.0;
    for (float v : img.values) before += v;
    for (float v : gaussian_blur(img, 1.0, 2).values) after += v;
    EXPECT_NEAR(after / before, 1.0, 1e-4);
}

TEST(GaussianBlur, RejectsBadParameters) {
    EXPECT_THROW(gaussian_blur(GrayImage(4, 4), 0.0, 2), std::invalid_argument);
    EXPECT_THROW(gaussian_blur(GrayImage(4, 4), 1.0, 0), std::invalid_argument);
}

TEST(Median, LowerMedian) {
    GrayImage odd(3, 1);
    odd.values = {0.3F, 0.1F, 0.2F};
    EXPECT_EQ(median_value(odd), 0.2F);
    GrayImage even(4, 1);
    even.values = {0.9F, 0.1F, 0.3F, 0.2F};
    EXPECT_EQ(median_value(even), 0.2F);
}

TEST(Median, MatchesFullSort) {
    for (unsigned seed = 0; seed < 5; ++seed) {
        const GrayImage img = random_image(160, 120, seed);
        auto v = img.values;
        std::sort(v.begin(), v.end());
        EXPECT_EQ(median_value(img), v[(v.size() - 1) / 2]);
    }
}

TEST(Normalize, FormulaValues) {
    GrayImage img(5, 1);
    img.values = {0.1F, 0.1F, 0.1F, 0.2F, 0.12F};
    const GrayImage n = normalize(img);
    EXPECT_EQ(n.values[0], 0.0F);
    EXPECT_NEAR(n.values[3], 1.0F, 1e-6);
    EXPECT_NEAR(n.values[4], 0.2F, 1e-6);
}

TEST(Normalize, ClampsAndIsMonotone) {
    const GrayImage img = random_image(40, 30, 8, 0.05F, 0.5F);
    const GrayImage n = normalize(img);
    std::vector<std::size_t> order(img.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return img.values[a] < img.values[b]; });
    for (std::size_t k = 0; k < order.size(); ++k) {
        const float v = n.values[order[k]];
        EXPECT_GE(v, 0.0F);
        EXPECT_LE(v, 1.0F);
        if (k > 0) EXPECT_GE(v, n.values[order[k - 1]]);
    }
}

TEST(Normalize, ZeroMedianIsDegenerate) {
    GrayImage img(3, 3);
    img.at(1, 1) = 0.5F;
    EXPECT_THROW(normalize(img), DegenerateFrame);
}

TEST(Threshold, StrictComparison) {
    GrayImage img(2, 1);
    img.values = {0.5F, 0.51F};
    const BinaryMask m = threshold(img, 0.5F);
    EXPECT_FALSE(m.at(0, 0));
    EXPECT_TRUE(m.at(1, 0));
    EXPECT_EQ(threshold(GrayImage(6, 6), 0.0F).count(), 0u);
}

TEST(Threshold, CountNonincreasingInT) {
    const GrayImage img = random_image(50, 40, 2);
    std::size_t prev = img.size() + 1;
    for (float t = -0.1F; t <= 1.1F; t += 0.05F) {
        const std::size_t c = threshold(img, t).count();
        EXPECT_LE(c, prev);
        prev = c;
    }
}

TEST(Morphology, MatchesBruteForce) {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const BinaryMask m = random_mask(21, 13, seed, 0.55);
        EXPECT_EQ(erode(m).bits, erode_brute(m).bits);
        EXPECT_EQ(dilate(m).bits, dilate_brute(m).bits);
        EXPECT_EQ(morph_open(m).bits, dilate_brute(erode_brute(m)).bits);
        EXPECT_EQ(morph_close(m).bits, erode_brute(dilate_brute(m)).bits);
    }
}

TEST(Morphology, OpenRemovesSpeckAndCloseFillsPinhole) {
    BinaryMask speck(9, 9);
    speck.set(4, 4, true);
    EXPECT_EQ(morph_open(speck).count(), 0u);

    BinaryMask block(11, 11);
    fill_rect(block, 3, 3, 5, 5);
    block.set(5, 5, false);
    EXPECT_TRUE(morph_close(block).at(5, 5));
}

TEST(Morphology, OpenIsIdempotent) {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const BinaryMask once = morph_open(random_mask(30, 20, seed, 0.6));
        EXPECT_EQ(morph_open(once).bits, once.bits);
    }
}

TEST(Morphology, DiskDilation) {
    BinaryMask m(15, 15);
    m.set(7, 7, true);
    const BinaryMask d = dilate_disk(m, 3);
    for (int y = 0; y < 15; ++y)
        for (int x = 0; x < 15; ++x) EXPECT_EQ(d.at(x, y), (x - 7) * (x - 7) + (y - 7) * (y - 7) <= 9);
}

TEST(Components, MatchFloodFill) {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const BinaryMask m = random_mask(25, 18, seed, 0.3 + 0.02 * seed);
        std::vector<int> labels;
        const int n = label_components(m, labels);
        EXPECT_EQ(n, oracle::count_components(m));
        EXPECT_EQ(static_cast<int>(find_contours(m).size()), n);
    }
}

TEST(Contours, EmptyAndTwoBlocks) {
    EXPECT_TRUE(find_contours(BinaryMask(10, 10)).empty());
    BinaryMask m(20, 10);
    fill_rect(m, 1, 1, 4, 4);
    fill_rect(m, 10, 3, 5, 5);
    EXPECT_EQ(find_contours(m).size(), 2u);
}

TEST(Contours, FilledBlockBoundary) {
    BinaryMask m(10, 10);
    fill_rect(m, 2, 3, 4, 4);
    const auto cs = find_contours(m);
    ASSERT_EQ(cs.size(), 1u);
    // Boundary of a 4x4 block runs through the 12 outer pixel centres; the
    // enclosed polygon is the 3x3 square between them.
    EXPECT_EQ(cs[0].points.size(), 12u);
    EXPECT_DOUBLE_EQ(cs[0].area, 9.0);
    EXPECT_DOUBLE_EQ(polygon_area(cs[0].points), 9.0);
    for (const Point p : cs[0].points) {
        EXPECT_TRUE(p.x == 2 || p.x == 5 || p.y == 3 || p.y == 6);
    }
}

TEST(PointInPolygon, BoundaryCountsAsInside) {
    const std::vector<Point> sq{{0, 0}, {4, 0}, {4, 4}, {0, 4}};
    EXPECT_TRUE(point_in_polygon(sq, 2, 2));
    EXPECT_TRUE(point_in_polygon(sq, 4, 2));
    EXPECT_TRUE(point_in_polygon(sq, 0, 0));
    EXPECT_FALSE(point_in_polygon(sq, 5, 2));
    EXPECT_FALSE(point_in_polygon(sq, -0.5, 4));
}

TEST(ConvexHull, SquareWithCentre) {
    const std::vector<Point> pts{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}};
    EXPECT_EQ(convex_hull(pts), (std::vector<Point>{{0, 0}, {4, 0}, {4, 4}, {0, 4}}));
}

TEST(ConvexHull, CollinearGivesExtremes) {
    const std::vector<Point> pts{{3, 3}, {1, 1}, {5, 5}, {2, 2}};
    EXPECT_EQ(convex_hull(pts), (std::vector<Point>{{1, 1}, {5, 5}}));
}

TEST(ConvexHull, MatchesHalfPlaneOracle) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> n(1, 25);
        std::uniform_int_distribution<int> c(0, 12);
        std::vector<Point> pts(static_cast<std::size_t>(n(rng)));
        for (auto& p : pts) p = {c(rng), c(rng)};
        ASSERT_EQ(convex_hull(pts), oracle::hull_half_plane(pts)) << "trial " << trial;
    }
}

TEST(ConvexHull, ContourPointsInsideHull) {
    BinaryMask m = random_mask(30, 30, 6, 0.7);
    m = morph_close(morph_open(m));
    for (const auto& c : find_contours(m)) {
        const auto hull = convex_hull(c.points);
        if (hull.size() < 3) continue;
        for (const Point p : c.points) {
            for (std::size_t i = 0; i < hull.size(); ++i) {
                EXPECT_GE(oracle::cross(hull[i], hull[(i + 1) % hull.size()], p), 0);
            }
        }
    }
}

TEST(ConvexityDefects, RectangleHasNone) {
    BinaryMask m(20, 20);
    fill_rect(m, 3, 3, 10, 8);
    const auto c = find_contours(m).at(0);
    EXPECT_TRUE(convexity_defects(c, convex_hull(c.points)).empty());
}

TEST(ConvexityDefects, NotchDepth) {
    for (int depth : {4, 8, 12}) {
        BinaryMask m(40, 40);
        fill_rect(m, 5, 5, 24, 24);
        for (int y = 5; y < 5 + depth; ++y)
            for (int x = 14; x < 20; ++x) m.set(x, y, false);
        const auto c = find_contours(m).at(0);
        const auto defects = convexity_defects(c, convex_hull(c.points));
        ASSERT_EQ(defects.size(), 1u) << "depth " << depth;
        EXPECT_NEAR(defects[0].depth, depth, 1.0);
    }
}

TEST(ConvexityDefects, FiveArmStar) {
    std::vector<PointF> star;
    for (int k = 0; k < 10; ++k) {
        const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
        const double r = k % 2 == 0 ? 26.0 : 9.0;
        star.push_back({40 + r * std::cos(a), 40 + r * std::sin(a)});
    }
    const BinaryMask m = raster_polygon(80, 80, star);
    const auto c = find_contours(m).at(0);
    int deep = 0;
    for (const auto& d : convexity_defects(c, convex_hull(c.points))) deep += d.depth >= 3.0 ? 1 : 0;
    EXPECT_EQ(deep, 5);
}

TEST(Crop, CopiesBlock) {
    const GrayImage img = random_image(10, 8, 1);
    const GrayImage c = crop(img, 3, 2, 4, 5);
    ASSERT_EQ(c.width, 4);
    ASSERT_EQ(c.height, 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 4; ++x) EXPECT_EQ(c.at(x, y), img.at(3 + x, 2 + y));
}
