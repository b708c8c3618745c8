#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "thermtouch/types.hpp"

namespace thermtouch {

/// p -> scale * R(theta) * p + (tx, ty), rotation about the image origin.
struct SimilarityTransform {
    double tx = 0.0;
    double ty = 0.0;
    double theta = 0.0;
    double scale = 1.0;

    PointF apply(PointF p) const;
    SimilarityTransform inverse() const;
    /// (*this) after `first`: p -> this(first(p)).
    SimilarityTransform compose(const SimilarityTransform& first) const;

    /// Rotation/scale about `center` followed by `shift`, expressed about the origin.
    static SimilarityTransform about(PointF center, double theta, double scale, PointF shift);
    /// Translation component once rotation/scale are referred to `center`.
    PointF shift_about(PointF center) const;
};

struct ReferencePose {
    PointF centroid;
    double orientation = 0.0;  // principal axis, radians in (-pi/2, pi/2]
    double area = 0.0;         // px, coverage-weighted
};

using Rgb = std::array<std::uint8_t, 3>;

class ReferenceLost : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wraps an angle into (-pi/2, pi/2].
double wrap_half_pi(double a);

/// Pose of the largest 8-connected blob within Chebyshev distance `tol` of
/// `ref_color`. Moments are weighted by each pixel's estimated coverage,
/// taken from where its colour sits between the local background (median of
/// a ring around the blob) and `ref_color`; the blob plus a one-pixel rim
/// contributes. Throws ReferenceLost if the blob has fewer than 20 px.
ReferencePose detect_reference(const RgbFrame& rgb, Rgb ref_color, int tol);

/// Transform mapping the initial pose onto the current one.
SimilarityTransform estimate_transform(const ReferencePose& initial, const ReferencePose& current);

/// Output (x, y) is the bilinear sample of `frame` at t(x, y); samples that
/// fall outside the frame are 0.
ThermalFrame apply_inverse(const ThermalFrame& frame, const SimilarityTransform& t);

/// Bilinear warp in the opposite direction: output(q) = frame(t^-1(q)).
/// Used to synthesize jittered frames.
ThermalFrame apply_forward(const ThermalFrame& frame, const SimilarityTransform& t);

struct StabilizedFrame {
    ThermalFrame frame;
    SimilarityTransform transform;
    bool tracked = true;
};

/// Frame 0 fixes the world pose. Frames where the reference is lost reuse the
/// previous transform and are flagged untracked. Throws ReferenceLost if the
/// reference is missing in frame 0, std::invalid_argument on length mismatch.
std::vector<StabilizedFrame> stabilize_sequence(std::span<const ThermalFrame> thermal, std::span<const RgbFrame> rgb,
                                                Rgb ref_color, int tol, unsigned threads = 1);

}  // namespace thermtouch
