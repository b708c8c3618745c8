#pragma once

#include <span>
#include <vector>

#include "thermtouch/types.hpp"

namespace thermtouch {

/// Thrown by normalize() when the median is not positive (all-dark frame).
class DegenerateFrame : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// counts / 65535.
GrayImage to_gray(const ThermalFrame& frame);

/// Normalized, sampled Gaussian taps for offsets -radius..radius.
std::vector<double> gaussian_kernel(double sigma, int radius);

/// Separable Gaussian blur, edge-clamped borders, same output size.
/// Throws std::invalid_argument for sigma <= 0 or radius < 1.
GrayImage gaussian_blur(const GrayImage& img, double sigma, int radius);

/// Lower median: element (n-1)/2 of the sorted values.
float median_value(const GrayImage& img);

/// clamp((p - median) / median, 0, 1) per pixel. Throws DegenerateFrame when
/// the median is zero.
GrayImage normalize(const GrayImage& img);

/// Foreground iff value > t.
BinaryMask threshold(const GrayImage& img, float t);

// 3x3 square structuring element. Pixels outside the image are ignored, so a
// blob running off the frame edge keeps its border pixels.
BinaryMask erode(const BinaryMask& mask);
BinaryMask dilate(const BinaryMask& mask);
BinaryMask morph_open(const BinaryMask& mask);
BinaryMask morph_close(const BinaryMask& mask);

/// Disk dilation by `radius` pixels (Euclidean).
BinaryMask dilate_disk(const BinaryMask& mask, int radius);

/// 8-connected component labels (0 = background, 1..n in raster order of each
/// component's first pixel). Returns the number of components.
int label_components(const BinaryMask& mask, std::vector<int>& labels);

/// One outer contour per 8-connected component, in raster order of the
/// component's top-left pixel. Holes are not traced.
std::vector<Contour> find_contours(const BinaryMask& mask);

/// Shoelace area (absolute) of a closed polygon.
double polygon_area(std::span<const Point> poly);

/// Even-odd point-in-polygon test; points on the boundary count as inside.
bool point_in_polygon(std::span<const Point> poly, double x, double y);

/// Convex hull, counter-clockwise with respect to a positive cross product,
/// starting from the lexicographically smallest (x, then y) point. Collinear
/// points on hull edges are dropped. Duplicates are ignored.
std::vector<Point> convex_hull(std::span<const Point> points);

/// For each pair of hull vertices adjacent in contour order, the contour point
/// between them farthest from the hull edge. Zero-depth defects are omitted.
/// Throws std::invalid_argument if a hull vertex is not on the contour.
std::vector<ConvexityDefect> convexity_defects(const Contour& contour, std::span<const Point> hull);

/// Copies the w x h block with top-left (x, y); the block must lie inside img.
GrayImage crop(const GrayImage& img, int x, int y, int w, int h);

}  // namespace thermtouch
