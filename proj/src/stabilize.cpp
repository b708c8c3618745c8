#include "thermtouch/stabilize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "thermtouch/imgproc.hpp"
#include "thermtouch/parallel.hpp"

namespace thermtouch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinReferencePixels = 20;

double sample_bilinear(const ThermalFrame& f, double x, double y, bool& inside) {
    constexpr double eps = 1e-9;
    inside = !(x < -eps || y < -eps || x > f.width - 1 + eps || y > f.height - 1 + eps);
    if (!inside) return 0.0;
    x = std::clamp(x, 0.0, static_cast<double>(f.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(f.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, f.width - 1);
    const int y1 = std::min(y0 + 1, f.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = f.at(x0, y0) * (1.0 - fx) + f.at(x1, y0) * fx;
    const double bottom = f.at(x0, y1) * (1.0 - fx) + f.at(x1, y1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

}  // namespace

PointF SimilarityTransform::apply(PointF p) const {
    const double c = std::cos(theta) * scale;
    const double s = std::sin(theta) * scale;
    return {c * p.x - s * p.y + tx, s * p.x + c * p.y + ty};
}

SimilarityTransform SimilarityTransform::inverse() const {
    SimilarityTransform inv;
    inv.scale = 1.0 / scale;
    inv.theta = -theta;
    const double c = std::cos(-theta) * inv.scale;
    const double s = std::sin(-theta) * inv.scale;
    inv.tx = -(c * tx - s * ty);
    inv.ty = -(s * tx + c * ty);
    return inv;
}

SimilarityTransform SimilarityTransform::compose(const SimilarityTransform& first) const {
    SimilarityTransform out;
    out.scale = scale * first.scale;
    out.theta = theta + first.theta;
    const PointF t = apply({first.tx, first.ty});
    out.tx = t.x;
    out.ty = t.y;
    return out;
}

SimilarityTransform SimilarityTransform::about(PointF center, double theta, double scale, PointF shift) {
    SimilarityTransform t{0.0, 0.0, theta, scale};
    const PointF rc = t.apply(center);
    t.tx = center.x + shift.x - rc.x;
    t.ty = center.y + shift.y - rc.y;
    return t;
}

PointF SimilarityTransform::shift_about(PointF center) const {
    const PointF rc = SimilarityTransform{0.0, 0.0, theta, scale}.apply(center);
    return {tx - (center.x - rc.x), ty - (center.y - rc.y)};
}

double wrap_half_pi(double a) {
    a = std::fmod(a, kPi);
    if (a <= -kPi / 2) a += kPi;
    if (a > kPi / 2) a -= kPi;
    return a;
}

ReferencePose detect_reference(const RgbFrame& rgb, Rgb ref_color, int tol) {
    const int w = rgb.width;
    const int h = rgb.height;
    auto pixel = [&](std::size_t i, std::size_t ch) { return static_cast<double>(rgb.rgb[3 * i + ch]); };

    BinaryMask mask(w, h);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        int dist = 0;
        for (std::size_t ch = 0; ch < 3; ++ch) {
            dist = std::max(dist, std::abs(static_cast<int>(rgb.rgb[3 * i + ch]) - static_cast<int>(ref_color[ch])));
        }
        mask.bits[i] = dist <= tol ? 1 : 0;
    }
    std::vector<int> labels;
    const int n = label_components(mask, labels);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(n) + 1, 0);
    for (const int l : labels) {
        if (l > 0) ++sizes[static_cast<std::size_t>(l)];
    }
    int best = 0;
    for (int l = 1; l <= n; ++l) {
        if (best == 0 || sizes[static_cast<std::size_t>(l)] > sizes[static_cast<std::size_t>(best)]) best = l;
    }
    if (best == 0 || sizes[static_cast<std::size_t>(best)] < kMinReferencePixels) {
        throw ReferenceLost("reference object not found");
    }

    BinaryMask blob(w, h);
    for (std::size_t i = 0; i < blob.bits.size(); ++i) blob.bits[i] = labels[i] == best ? 1 : 0;
    const BinaryMask rim1 = dilate(blob);
    const BinaryMask rim2 = dilate(rim1);

    // Local background colour: per-channel median of the ring two pixels out.
    std::array<double, 3> bg{};
    bool have_bg = false;
    {
        std::array<std::vector<double>, 3> ring;
        for (std::size_t i = 0; i < blob.bits.size(); ++i) {
            if (!rim2.bits[i] || rim1.bits[i]) continue;
            for (std::size_t ch = 0; ch < 3; ++ch) ring[ch].push_back(pixel(i, ch));
        }
        if (!ring[0].empty()) {
            for (std::size_t ch = 0; ch < 3; ++ch) {
                auto mid = ring[ch].begin() + static_cast<std::ptrdiff_t>((ring[ch].size() - 1) / 2);
                std::nth_element(ring[ch].begin(), mid, ring[ch].end());
                bg[ch] = *mid;
            }
            have_bg = true;
        }
    }
    std::array<double, 3> axis{};
    double axis2 = 0.0;
    for (std::size_t ch = 0; ch < 3; ++ch) {
        axis[ch] = ref_color[ch] - bg[ch];
        axis2 += axis[ch] * axis[ch];
    }
    have_bg = have_bg && axis2 > 1.0;

    // Each pixel weighs in with the fraction of it the reference covers,
    // read off its position between background and reference colour.
    std::vector<double> weight(blob.bits.size(), 0.0);
    for (std::size_t i = 0; i < blob.bits.size(); ++i) {
        if (!have_bg) {
            weight[i] = blob.bits[i] ? 1.0 : 0.0;
            continue;
        }
        if (!rim1.bits[i]) continue;
        double dot = 0.0;
        for (std::size_t ch = 0; ch < 3; ++ch) dot += (pixel(i, ch) - bg[ch]) * axis[ch];
        weight[i] = std::clamp(dot / axis2, 0.0, 1.0);
    }

    double m = 0.0, sx = 0.0, sy = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double wt = weight[static_cast<std::size_t>(y) * w + x];
            m += wt;
            sx += wt * x;
            sy += wt * y;
        }
    }
    const double cx = sx / m;
    const double cy = sy / m;
    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double wt = weight[static_cast<std::size_t>(y) * w + x];
            if (wt == 0.0) continue;
            const double dx = x - cx;
            const double dy = y - cy;
            mu20 += wt * dx * dx;
            mu02 += wt * dy * dy;
            mu11 += wt * dx * dy;
        }
    }
    ReferencePose pose;
    pose.centroid = {cx, cy};
    pose.area = m;
    pose.orientation = wrap_half_pi(0.5 * std::atan2(2.0 * mu11, mu20 - mu02));
    return pose;
}

SimilarityTransform estimate_transform(const ReferencePose& initial, const ReferencePose& current) {
    SimilarityTransform t;
    t.scale = std::sqrt(current.area / initial.area);
    t.theta = wrap_half_pi(current.orientation - initial.orientation);
    const PointF moved = SimilarityTransform{0.0, 0.0, t.theta, t.scale}.apply(initial.centroid);
    t.tx = current.centroid.x - moved.x;
    t.ty = current.centroid.y - moved.y;
    return t;
}

ThermalFrame apply_inverse(const ThermalFrame& frame, const SimilarityTransform& t) {
    ThermalFrame out = frame;
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            const PointF src = t.apply({static_cast<double>(x), static_cast<double>(y)});
            bool inside = false;
            const double v = sample_bilinear(frame, src.x, src.y, inside);
            out.counts[static_cast<std::size_t>(y) * frame.width + x] =
                inside ? static_cast<std::uint16_t>(std::clamp(std::lround(v), 0L, 65535L)) : 0;
        }
    }
    return out;
}

ThermalFrame apply_forward(const ThermalFrame& frame, const SimilarityTransform& t) {
    return apply_inverse(frame, t.inverse());
}

std::vector<StabilizedFrame> stabilize_sequence(std::span<const ThermalFrame> thermal, std::span<const RgbFrame> rgb,
                                                Rgb ref_color, int tol, unsigned threads) {
    if (thermal.size() != rgb.size()) throw std::invalid_argument("stabilize_sequence: thermal/rgb length mismatch");
    if (thermal.empty()) return {};

    std::vector<std::optional<ReferencePose>> poses(rgb.size());
    parallel_for(rgb.size(), threads, [&](std::size_t i) {
        try {
            poses[i] = detect_reference(rgb[i], ref_color, tol);
        } catch (const ReferenceLost&) {
        }
    });
    if (!poses[0]) throw ReferenceLost("reference object not visible in frame 0");

    const ReferencePose initial = *poses[0];
    std::vector<StabilizedFrame> out(thermal.size());
    SimilarityTransform last;
    double last_orientation = initial.orientation;
    for (std::size_t i = 0; i < thermal.size(); ++i) {
        if (poses[i]) {
            ReferencePose cur = *poses[i];
            // Moment orientation is defined modulo pi; stay on the branch
            // closest to the previous frame.
            const double options[3] = {cur.orientation, cur.orientation + kPi, cur.orientation - kPi};
            double pick = options[0];
            for (const double o : options) {
                if (std::abs(o - last_orientation) < std::abs(pick - last_orientation)) pick = o;
            }
            cur.orientation = pick;
            last_orientation = pick;
            last = estimate_transform(initial, cur);
            out[i].tracked = true;
        } else {
            out[i].tracked = false;
        }
        out[i].transform = last;
    }
    parallel_for(thermal.size(), threads, [&](std::size_t i) {
        out[i].frame = apply_inverse(thermal[i], out[i].transform);
        out[i].frame.index = thermal[i].index;
        out[i].frame.timestamp_ms = thermal[i].timestamp_ms;
    });
    return out;
}

}  // namespace thermtouch
