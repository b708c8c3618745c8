#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermtouch {

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

struct PointF {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PointF&, const PointF&) = default;
};

/// Malformed on-disk data (headers, JSON, naming).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failures: missing inputs, unwritable outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw radiometric frame as delivered by the sensor.
struct ThermalFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> counts;
    int index = 0;
    std::int64_t timestamp_ms = 0;

    std::uint16_t at(int x, int y) const { return counts[static_cast<std::size_t>(y) * width + x]; }
};

struct RgbFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major RGB triples
    int index = 0;
};

/// Floating-point intensity image. Values lie in [0,1] after normalization.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    GrayImage() = default;
    GrayImage(int w, int h, float fill = 0.0F)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return values.size(); }
};

/// Foreground (warm) pixels are 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    std::size_t count() const;
};

/// Outer boundary of one 8-connected foreground component.
struct Contour {
    std::vector<Point> points;
    double area = 0.0;  // shoelace area of the boundary polygon
};

struct ConvexityDefect {
    int start_idx = 0;
    int end_idx = 0;
    int farthest_idx = 0;
    double depth = 0.0;
};

}  // namespace thermtouch
