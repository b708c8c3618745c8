#include "thermtouch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thermtouch/parallel.hpp"
#include "thermtouch/serialize.hpp"

namespace thermtouch {

namespace fs = std::filesystem;

namespace {

constexpr int kSubsteps = 4;
constexpr int kMarkerSamples = 8;  // per axis, for anti-aliased marker edges
constexpr double kDeg = std::numbers::pi / 180.0;

double dist_to_segment(double px, double py, double ax, double ay, double bx, double by) {
    const double vx = bx - ax;
    const double vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double u = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(px - (ax + u * vx), py - (ay + u * vy));
}

/// Anchor (finger 0 tip) position at time t, or nothing outside the path.
std::optional<PointF> anchor_at(const ScriptedEvent& ev, double t, bool* in_contact = nullptr) {
    if (in_contact) *in_contact = false;
    const auto& p = ev.path;
    if (p.empty() || t < p.front().t || t > p.back().t) return std::nullopt;
    if (p.size() == 1) return PointF{p[0].x, p[0].y};
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        if (t < p[k].t || t > p[k + 1].t) continue;
        const double span = p[k + 1].t - p[k].t;
        // Zero-length segments are instantaneous and never press the surface.
        if (span <= 0.0) continue;
        const double u = (t - p[k].t) / span;
        if (in_contact) *in_contact = ev.contact[k];
        return PointF{p[k].x + u * (p[k + 1].x - p[k].x), p[k].y + u * (p[k + 1].y - p[k].y)};
    }
    return PointF{p.back().x, p.back().y};
}

std::vector<PointF> fingertips_at(const ScriptedEvent& ev, PointF anchor) {
    std::vector<PointF> tips;
    for (int j = 0; j < ev.finger_count; ++j) tips.push_back({anchor.x + j * ev.finger_spacing, anchor.y});
    return tips;
}

struct HandShape {
    std::vector<PointF> tips;
    PointF palm;
    double min_x = 0, max_x = 0, min_y = 0;
};

HandShape hand_shape(const ScriptedEvent& ev, PointF anchor, const HandGeometry& g) {
    HandShape h;
    h.tips = fingertips_at(ev, anchor);
    const double cx = anchor.x + (ev.finger_count - 1) * ev.finger_spacing / 2.0;
    h.palm = {cx, anchor.y + g.finger_length + g.palm_ry * 0.6};
    const double reach = std::max({g.palm_rx, g.arm_radius, (ev.finger_count - 1) * ev.finger_spacing / 2.0 + g.finger_radius});
    h.min_x = cx - reach - 1.0;
    h.max_x = cx + reach + 1.0;
    h.min_y = anchor.y - g.finger_radius - 1.0;
    return h;
}

bool inside_hand(const HandShape& h, const HandGeometry& g, double x, double y) {
    if (x < h.min_x || x > h.max_x || y < h.min_y) return false;
    const double ex = (x - h.palm.x) / g.palm_rx;
    const double ey = (y - h.palm.y) / g.palm_ry;
    if (ex * ex + ey * ey <= 1.0) return true;
    if (y >= h.palm.y && std::abs(x - h.palm.x) <= g.arm_radius) return true;
    for (const PointF tip : h.tips) {
        const double bx = h.palm.x + (tip.x - h.palm.x) * 0.5;
        const double by = h.palm.y - g.palm_ry * 0.3;
        if (dist_to_segment(x, y, tip.x, tip.y, bx, by) <= g.finger_radius) return true;
    }
    return false;
}

bool inside_marker(const ReferenceMarker& m, double x, double y) {
    const double c = std::cos(-m.angle);
    const double s = std::sin(-m.angle);
    const double dx = x - m.cx;
    const double dy = y - m.cy;
    const double lx = c * dx - s * dy;
    const double ly = s * dx + c * dy;
    return std::abs(lx) <= m.width / 2.0 && std::abs(ly) <= m.height / 2.0;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double frame_ceil(double t, double fps) { return std::ceil(t * fps) / fps; }

// Approach from the bottom edge, act on `target`, leave through the bottom.
ScriptedEvent bottom_gesture(std::mt19937_64& rng, ScriptKind kind, PointF target, double t0, double dwell,
                             const SynthSceneConfig& cfg, int fingers, double spacing, bool contact) {
    const double span = (fingers - 1) * spacing;
    const double max_x = cfg.width - 1 - span;
    const double speed_in = uniform(rng, 50.0, 80.0);
    const double speed_out = uniform(rng, 50.0, 80.0);
    const PointF enter{std::clamp(target.x + uniform(rng, -8.0, 8.0), 0.0, max_x), cfg.height - 1.0};
    const PointF leave{std::clamp(target.x + uniform(rng, -8.0, 8.0), 0.0, max_x), cfg.height - 1.0};
    const double t1 = t0 + std::hypot(target.x - enter.x, target.y - enter.y) / speed_in;
    const double t2 = t1 + dwell;
    const double t3 = t2 + std::hypot(leave.x - target.x, leave.y - target.y) / speed_out;

    ScriptedEvent ev;
    ev.kind = kind;
    ev.finger_count = fingers;
    ev.finger_spacing = spacing;
    ev.path = {{enter.x, enter.y, t0}, {target.x, target.y, t1}, {target.x, target.y, t2}, {leave.x, leave.y, t3}};
    ev.contact = {false, contact, false};
    ev.focus_segment = 1;
    return ev;
}

void fit_duration(SynthSceneConfig& cfg, double tail_s) {
    double end = 0.0;
    for (const auto& ev : cfg.events) end = std::max(end, ev.path.back().t);
    cfg.duration_s = std::max(cfg.duration_s, frame_ceil(end + tail_s, cfg.fps));
}

}  // namespace

std::string to_string(ScriptKind kind) {
    switch (kind) {
        case ScriptKind::Touch: return "touch";
        case ScriptKind::Hover: return "hover";
        case ScriptKind::Stroke: return "stroke";
        case ScriptKind::Distractor: return "distractor";
    }
    return "touch";
}

ScriptKind script_kind_from_string(const std::string& s) {
    if (s == "touch") return ScriptKind::Touch;
    if (s == "hover") return ScriptKind::Hover;
    if (s == "stroke") return ScriptKind::Stroke;
    if (s == "distractor") return ScriptKind::Distractor;
    throw std::invalid_argument("unknown event kind: " + s);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int SynthSceneConfig::frame_count() const {
    return std::max(1, static_cast<int>(std::lround(duration_s * fps)));
}

void validate(const SynthSceneConfig& c) {
    if (c.width < 8 || c.height < 8) throw std::invalid_argument("synth: resolution below 8x8");
    if (!(c.fps > 0.0)) throw std::invalid_argument("synth: fps must be positive");
    if (!(c.duration_s > 0.0)) throw std::invalid_argument("synth: duration must be positive");
    if (!(c.hand_k > c.ambient_k)) throw std::invalid_argument("synth: hand must be warmer than ambient");
    if (!(c.tau_s > 0.0) || !(c.tau_contact_s > 0.0)) throw std::invalid_argument("synth: tau must be positive");
    if (!(c.counts_per_kelvin > 0.0)) throw std::invalid_argument("synth: counts_per_kelvin must be positive");
    if (c.noise_sigma_counts < 0.0) throw std::invalid_argument("synth: noise sigma must be >= 0");
    if (c.jitter && static_cast<int>(c.jitter->size()) != c.frame_count()) {
        throw std::invalid_argument("synth: jitter script length differs from frame count");
    }
    for (const auto& ev : c.events) {
        if (ev.path.empty()) throw std::invalid_argument("synth: event without waypoints");
        if (ev.contact.size() + 1 != ev.path.size()) {
            throw std::invalid_argument("synth: contact flags must number waypoints - 1");
        }
        if (ev.finger_count < 1 || ev.finger_count > 5) throw std::invalid_argument("synth: finger_count in [1, 5]");
        for (std::size_t k = 0; k < ev.path.size(); ++k) {
            if (k > 0 && ev.path[k].t < ev.path[k - 1].t) throw std::invalid_argument("synth: waypoints not time-ordered");
            for (const PointF tip : fingertips_at(ev, {ev.path[k].x, ev.path[k].y})) {
                if (tip.x < 0.0 || tip.y < 0.0 || tip.x > c.width - 1 || tip.y > c.height - 1) {
                    throw std::invalid_argument("synth: event path leaves the frame");
                }
            }
        }
    }
}

SynthClip generate(const SynthSceneConfig& cfg, unsigned threads) {
    validate(cfg);
    const int w = cfg.width;
    const int h = cfg.height;
    const int n = cfg.frame_count();
    const double dt = 1.0 / cfg.fps;
    const double sub = dt / kSubsteps;
    const double cool = std::exp(-sub / cfg.tau_s);
    const double heat = 1.0 - std::exp(-sub / cfg.tau_contact_s);
    const HandGeometry& g = cfg.hand;

    SynthClip clip;
    clip.surface_delta_k.resize(static_cast<std::size_t>(n));

    // Surface ledger: sequential in time. Pressed pixels relax toward the
    // deposit level, everything else cools exponentially toward ambient.
    std::vector<double> delta(static_cast<std::size_t>(w) * h, 0.0);
    std::vector<std::uint8_t> pressed(delta.size(), 0);
    std::vector<std::size_t> touched;
    clip.surface_delta_k[0] = delta;
    for (int i = 1; i < n; ++i) {
        for (int s = 0; s < kSubsteps; ++s) {
            const double tm = (i - 1) * dt + (s + 0.5) * sub;
            for (const auto& ev : cfg.events) {
                bool contact = false;
                const auto a = anchor_at(ev, tm, &contact);
                if (!a || !contact) continue;
                for (const PointF tip : fingertips_at(ev, *a)) {
                    const int r = static_cast<int>(std::ceil(g.pad_radius));
                    for (int y = static_cast<int>(tip.y) - r - 1; y <= static_cast<int>(tip.y) + r + 1; ++y) {
                        for (int x = static_cast<int>(tip.x) - r - 1; x <= static_cast<int>(tip.x) + r + 1; ++x) {
                            if (x < 0 || y < 0 || x >= w || y >= h) continue;
                            if ((x - tip.x) * (x - tip.x) + (y - tip.y) * (y - tip.y) > g.pad_radius * g.pad_radius) continue;
                            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
                            if (!pressed[idx]) touched.push_back(idx);
                            pressed[idx] = 1;
                        }
                    }
                }
            }
            for (std::size_t idx = 0; idx < delta.size(); ++idx) {
                delta[idx] = pressed[idx] ? delta[idx] + (cfg.deposit_delta_k - delta[idx]) * heat : delta[idx] * cool;
            }
            for (const std::size_t idx : touched) pressed[idx] = 0;
            touched.clear();
        }
        clip.surface_delta_k[static_cast<std::size_t>(i)] = delta;
    }

    std::vector<ThermalFrame> frames(static_cast<std::size_t>(n));
    std::optional<std::vector<RgbFrame>> rgb;
    if (cfg.marker) rgb.emplace(static_cast<std::size_t>(n));

    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t fi) {
        const int i = static_cast<int>(fi);
        const double t = i * dt;
        const auto& surf = clip.surface_delta_k[fi];

        std::vector<HandShape> hands;
        for (const auto& ev : cfg.events) {
            if (const auto a = anchor_at(ev, t)) hands.push_back(hand_shape(ev, *a, g));
        }
        // World temperature rise above ambient, K.
        std::vector<double> world(surf);
        for (const auto& o : cfg.objects) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    if (std::hypot(x - o.x, y - o.y) <= o.radius) world[static_cast<std::size_t>(y) * w + x] += o.delta_k;
                }
            }
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (const auto& hs : hands) {
                    if (inside_hand(hs, g, x, y)) {
                        world[static_cast<std::size_t>(y) * w + x] = cfg.hand_k - cfg.ambient_k;
                        break;
                    }
                }
            }
        }

        std::vector<double> view = world;
        if (cfg.jitter) {
            const SimilarityTransform inv = (*cfg.jitter)[fi].inverse();
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const PointF p = inv.apply({static_cast<double>(x), static_cast<double>(y)});
                    double v = 0.0;
                    if (p.x >= 0.0 && p.y >= 0.0 && p.x <= w - 1 && p.y <= h - 1) {
                        const int x0 = std::min(static_cast<int>(p.x), w - 2);
                        const int y0 = std::min(static_cast<int>(p.y), h - 2);
                        const double fx = p.x - x0;
                        const double fy = p.y - y0;
                        auto W = [&](int xx, int yy) { return world[static_cast<std::size_t>(yy) * w + xx]; };
                        v = (W(x0, y0) * (1 - fx) + W(x0 + 1, y0) * fx) * (1 - fy) +
                            (W(x0, y0 + 1) * (1 - fx) + W(x0 + 1, y0 + 1) * fx) * fy;
                    }
                    view[static_cast<std::size_t>(y) * w + x] = v;
                }
            }
        }

        ThermalFrame f;
        f.width = w;
        f.height = h;
        f.index = i;
        f.timestamp_ms = frame_timestamp_ms(i, cfg.fps);
        f.counts.resize(view.size());
        std::mt19937_64 rng(mix_seed(cfg.seed, fi));
        std::normal_distribution<double> noise(0.0, 1.0);
        for (std::size_t k = 0; k < view.size(); ++k) {
            double c = view[k] * cfg.counts_per_kelvin + cfg.base_counts;
            if (cfg.noise_sigma_counts > 0.0) c += cfg.noise_sigma_counts * noise(rng);
            f.counts[k] = static_cast<std::uint16_t>(std::clamp(std::lround(c), 0L, 65535L));
        }
        frames[fi] = std::move(f);

        if (rgb) {
            const ReferenceMarker& m = *cfg.marker;
            RgbFrame r;
            r.width = w;
            r.height = h;
            r.index = i;
            r.rgb.resize(static_cast<std::size_t>(w) * h * 3);
            const SimilarityTransform inv =
                cfg.jitter ? (*cfg.jitter)[fi].inverse() : SimilarityTransform{};
            const SimilarityTransform fwd = cfg.jitter ? (*cfg.jitter)[fi] : SimilarityTransform{};
            double bx0 = w, by0 = h, bx1 = -1.0, by1 = -1.0;
            const double ca = std::cos(m.angle), sa = std::sin(m.angle);
            for (const double u : {-0.5, 0.5}) {
                for (const double v : {-0.5, 0.5}) {
                    const PointF c = fwd.apply({m.cx + ca * u * m.width - sa * v * m.height,
                                                m.cy + sa * u * m.width + ca * v * m.height});
                    bx0 = std::min(bx0, c.x);
                    by0 = std::min(by0, c.y);
                    bx1 = std::max(bx1, c.x);
                    by1 = std::max(by1, c.y);
                }
            }
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    // Pixel colour blends marker and background by covered area.
                    int hits = 0;
                    const bool near = x >= bx0 - 1.0 && x <= bx1 + 1.0 && y >= by0 - 1.0 && y <= by1 + 1.0;
                    for (int sy = 0; near && sy < kMarkerSamples; ++sy) {
                        for (int sx = 0; sx < kMarkerSamples; ++sx) {
                            const PointF q{x + (sx + 0.5) / kMarkerSamples - 0.5, y + (sy + 0.5) / kMarkerSamples - 0.5};
                            const PointF p = inv.apply(q);
                            hits += inside_marker(m, p.x, p.y) ? 1 : 0;
                        }
                    }
                    const double a = static_cast<double>(hits) / (kMarkerSamples * kMarkerSamples);
                    for (std::size_t ch = 0; ch < 3; ++ch) {
                        r.rgb[static_cast<std::size_t>(y * w + x) * 3 + ch] =
                            static_cast<std::uint8_t>(std::lround(a * m.color[ch] + (1.0 - a) * m.background[ch]));
                    }
                }
            }
            (*rgb)[fi] = std::move(r);
        }
    });

    SequenceMeta meta;
    meta.fps = cfg.fps;
    meta.width = w;
    meta.height = h;
    meta.counts_to_kelvin = CountsToKelvin{1.0 / cfg.counts_per_kelvin, cfg.ambient_k - cfg.base_counts / cfg.counts_per_kelvin};
    meta.has_rgb = rgb.has_value();
    clip.sequence.meta = meta;
    clip.sequence.frames = std::move(frames);
    clip.sequence.rgb = std::move(rgb);

    GroundTruth& truth = clip.truth;
    truth.category = "custom";
    truth.objects = cfg.objects;
    if (cfg.jitter) truth.jitter = *cfg.jitter;
    for (const auto& ev : cfg.events) {
        TruthEvent te;
        te.kind = ev.kind;
        te.finger_count = ev.finger_count;
        if (ev.focus_segment >= 0 && ev.focus_segment + 1 < static_cast<int>(ev.path.size())) {
            const Waypoint& a = ev.path[static_cast<std::size_t>(ev.focus_segment)];
            const Waypoint& b = ev.path[static_cast<std::size_t>(ev.focus_segment) + 1];
            te.start_frame = static_cast<int>(std::ceil(a.t * cfg.fps - 1e-9));
            te.end_frame = std::min(n - 1, static_cast<int>(std::floor(b.t * cfg.fps + 1e-9)));
            te.points = fingertips_at(ev, {a.x, a.y});
        } else {
            te.start_frame = static_cast<int>(std::ceil(ev.path.front().t * cfg.fps - 1e-9));
            te.end_frame = std::min(n - 1, static_cast<int>(std::floor(ev.path.back().t * cfg.fps + 1e-9)));
        }
        if (ev.kind == ScriptKind::Stroke) {
            for (std::size_t k = 0; k < ev.contact.size(); ++k) {
                if (!ev.contact[k]) continue;
                const PointF a{ev.path[k].x, ev.path[k].y};
                const PointF b{ev.path[k + 1].x, ev.path[k + 1].y};
                if (te.polyline.empty() || te.polyline.back() != a) te.polyline.push_back(a);
                te.polyline.push_back(b);
            }
        }
        (ev.kind == ScriptKind::Distractor ? truth.distractors : truth.events).push_back(std::move(te));
    }
    return clip;
}

void write_clip(const fs::path& dir, const SynthClip& clip) {
    write_sequence(dir, clip.sequence);
    write_truth(dir / "truth.json", clip.truth);
}

SynthSceneConfig touch_scene(std::uint64_t seed, int finger_count, bool wide_spread) {
    SynthSceneConfig cfg;
    cfg.seed = seed;
    std::mt19937_64 rng(mix_seed(seed, 0x70C4));
    const double spacing = wide_spread ? uniform(rng, 26.0, 30.0) : uniform(rng, 8.0, 10.0);
    const double span = (finger_count - 1) * spacing;
    const PointF target{uniform(rng, 22.0, cfg.width - 22.0 - span), uniform(rng, 18.0, cfg.height - 50.0)};
    const double t0 = uniform(rng, 0.8, 1.5);
    const double dwell = uniform(rng, 0.8, 1.5);
    cfg.events.push_back(
        bottom_gesture(rng, ScriptKind::Touch, target, t0, dwell, cfg, finger_count, spacing, true));
    fit_duration(cfg, 2.0);
    return cfg;
}

SynthSceneConfig hover_scene(std::uint64_t seed) {
    SynthSceneConfig cfg;
    cfg.seed = seed;
    std::mt19937_64 rng(mix_seed(seed, 0x4055));
    const PointF target{uniform(rng, 22.0, cfg.width - 22.0), uniform(rng, 18.0, cfg.height - 50.0)};
    const double t0 = uniform(rng, 0.8, 1.5);
    const double dwell = uniform(rng, 0.8, 1.5);
    cfg.events.push_back(bottom_gesture(rng, ScriptKind::Hover, target, t0, dwell, cfg, 1, 9.0, false));
    fit_duration(cfg, 2.0);
    return cfg;
}

SynthSceneConfig negative_scene(std::uint64_t seed) {
    SynthSceneConfig cfg;
    cfg.seed = seed;
    std::mt19937_64 rng(mix_seed(seed, 0x9E6));
    cfg.objects.push_back({uniform(rng, 15.0, cfg.width - 15.0), uniform(rng, 15.0, cfg.height - 40.0),
                           uniform(rng, 4.0, 7.0), uniform(rng, 2.0, 4.0)});

    // A hand sweeping through without stopping or touching.
    ScriptedEvent pass;
    pass.kind = ScriptKind::Distractor;
    const double x0 = uniform(rng, 20.0, cfg.width - 20.0);
    const PointF apex{std::clamp(x0 + uniform(rng, -30.0, 30.0), 10.0, cfg.width - 10.0), uniform(rng, 25.0, 70.0)};
    const double x2 = std::clamp(apex.x + uniform(rng, -50.0, 50.0), 5.0, cfg.width - 5.0);
    const double t0 = uniform(rng, 0.8, 1.5);
    const double t1 = t0 + std::hypot(apex.x - x0, apex.y - (cfg.height - 1.0)) / uniform(rng, 50.0, 80.0);
    const double t2 = t1 + std::hypot(x2 - apex.x, (cfg.height - 1.0) - apex.y) / uniform(rng, 50.0, 80.0);
    pass.path = {{x0, cfg.height - 1.0, t0}, {apex.x, apex.y, t1}, {x2, cfg.height - 1.0, t2}};
    pass.contact = {false, false};
    cfg.events.push_back(pass);
    fit_duration(cfg, 2.0);
    return cfg;
}

SynthSceneConfig stroke_scene(std::uint64_t seed, int strokes) {
    SynthSceneConfig cfg;
    cfg.seed = seed;
    std::mt19937_64 rng(mix_seed(seed, 0x57E0));
    double t = uniform(rng, 0.8, 1.5);
    std::vector<std::pair<PointF, PointF>> placed;
    for (int s = 0; s < strokes; ++s) {
        PointF a, b;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 1000) throw std::runtime_error("stroke_scene: cannot place strokes");
            // Sideways or downward motion keeps the fresh trail clear of the
            // hand, which trails below the fingertip.
            const double ang = uniform(rng, -0.35, 0.6);
            const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            const double len = uniform(rng, 35.0, 60.0);
            a = {uniform(rng, 12.0, cfg.width - 12.0), uniform(rng, 15.0, cfg.height - 45.0)};
            b = {a.x + sign * std::cos(ang) * len, a.y + std::sin(ang) * len};
            if (b.x < 12.0 || b.x > cfg.width - 12.0 || b.y < 15.0 || b.y > cfg.height - 35.0) continue;
            bool clear = true;
            for (const auto& [pa, pb] : placed) {
                for (int k = 0; k <= 10 && clear; ++k) {
                    const double px = a.x + (b.x - a.x) * k / 10.0;
                    const double py = a.y + (b.y - a.y) * k / 10.0;
                    if (dist_to_segment(px, py, pa.x, pa.y, pb.x, pb.y) < 25.0) clear = false;
                }
            }
            if (clear) break;
        }
        placed.emplace_back(a, b);

        const double speed = uniform(rng, 15.0, 25.0);
        ScriptedEvent ev = bottom_gesture(rng, ScriptKind::Stroke, a, t, 0.0, cfg, 1, 9.0, true);
        // Replace the dwell with the stroke itself.
        const double t1 = ev.path[1].t;
        const double t2 = t1 + std::hypot(b.x - a.x, b.y - a.y) / speed;
        const Waypoint leave = ev.path[3];
        const double t3 = t2 + std::hypot(leave.x - b.x, leave.y - b.y) / 65.0;
        ev.path = {ev.path[0], {a.x, a.y, t1}, {b.x, b.y, t2}, {leave.x, leave.y, t3}};
        ev.contact = {false, true, false};
        ev.focus_segment = 1;
        cfg.events.push_back(ev);
        t = t3 + uniform(rng, 0.5, 1.0);
    }
    fit_duration(cfg, 2.0);
    return cfg;
}

SynthSceneConfig jitter_scene(std::uint64_t seed, double max_shift, double max_rot_deg, double max_scale_dev) {
    SynthSceneConfig cfg;
    cfg.seed = seed;
    cfg.duration_s = 3.0;
    std::mt19937_64 rng(mix_seed(seed, 0x717));
    for (int k = 0; k < 3; ++k) {
        cfg.objects.push_back({uniform(rng, 25.0, cfg.width - 25.0), uniform(rng, 20.0, cfg.height - 20.0),
                               uniform(rng, 4.0, 8.0), uniform(rng, 2.0, 4.0)});
    }
    ReferenceMarker m;
    m.cx = cfg.width / 2.0 + uniform(rng, -20.0, 20.0);
    m.cy = cfg.height / 2.0 + uniform(rng, -15.0, 15.0);
    m.angle = uniform(rng, -0.3, 0.3);
    cfg.marker = m;

    const PointF center{(cfg.width - 1) / 2.0, (cfg.height - 1) / 2.0};
    std::vector<SimilarityTransform> jitter(static_cast<std::size_t>(cfg.frame_count()));
    for (std::size_t i = 1; i < jitter.size(); ++i) {
        PointF shift{uniform(rng, -max_shift, max_shift), uniform(rng, -max_shift, max_shift)};
        const double norm = std::hypot(shift.x, shift.y);
        if (norm > max_shift) {
            shift.x *= max_shift / norm;
            shift.y *= max_shift / norm;
        }
        const double theta = uniform(rng, -max_rot_deg, max_rot_deg) * kDeg;
        const double scale = 1.0 + uniform(rng, -max_scale_dev, max_scale_dev);
        jitter[i] = SimilarityTransform::about(center, theta, scale, shift);
    }
    cfg.jitter = std::move(jitter);
    return cfg;
}

int CorpusRecipe::resolved_multi_finger() const {
    const int m = multi_finger < 0 ? touch / 3 : multi_finger;
    return std::clamp(m, 0, touch);
}

std::vector<std::pair<ManifestEntry, SynthSceneConfig>> corpus_scenes(const CorpusRecipe& recipe) {
    if (recipe.touch < 0 || recipe.hover < 0 || recipe.negative < 0) {
        throw std::invalid_argument("corpus recipe: clip counts must be >= 0");
    }
    std::vector<std::pair<ManifestEntry, SynthSceneConfig>> out;
    const int multi = recipe.resolved_multi_finger();
    int idx = 0;
    auto name = [&]() {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "clip_%03d", idx);
        return std::string(buf);
    };
    for (int i = 0; i < recipe.touch; ++i, ++idx) {
        const std::uint64_t seed = mix_seed(recipe.seed, static_cast<std::uint64_t>(idx));
        int fingers = 1;
        bool wide = false;
        if (i < multi) {
            fingers = i % 3 == 2 ? 3 : 2;
            wide = fingers == 2 && i % 2 == 1;
        }
        SynthSceneConfig cfg = touch_scene(seed, fingers, wide);
        out.push_back({{name(), "touch", fingers}, std::move(cfg)});
    }
    for (int i = 0; i < recipe.hover; ++i, ++idx) {
        const std::uint64_t seed = mix_seed(recipe.seed, static_cast<std::uint64_t>(idx));
        out.push_back({{name(), "hover", 1}, hover_scene(seed)});
    }
    for (int i = 0; i < recipe.negative; ++i, ++idx) {
        const std::uint64_t seed = mix_seed(recipe.seed, static_cast<std::uint64_t>(idx));
        out.push_back({{name(), "negative", 0}, negative_scene(seed)});
    }
    return out;
}

Manifest make_corpus(const CorpusRecipe& recipe, const fs::path& out_dir, unsigned threads) {
    const auto scenes = corpus_scenes(recipe);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    parallel_for(scenes.size(), threads, [&](std::size_t i) {
        SynthClip clip = generate(scenes[i].second, 1);
        clip.truth.category = scenes[i].first.category;
        write_clip(out_dir / scenes[i].first.name, clip);
    });

    Manifest m;
    m.recipe = recipe;
    for (const auto& [entry, cfg] : scenes) m.clips.push_back(entry);
    write_manifest(out_dir / "manifest.json", m);
    return m;
}

}  // namespace thermtouch
