#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "thermtouch/frames_io.hpp"
#include "thermtouch/stabilize.hpp"

namespace thermtouch {

enum class ScriptKind { Touch, Hover, Stroke, Distractor };

std::string to_string(ScriptKind kind);
ScriptKind script_kind_from_string(const std::string& s);

/// Position of the leading fingertip (finger 0) at time t seconds.
struct Waypoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

/// One hand gesture. The hand is visible from the first to the last waypoint
/// and moves linearly between them; `contact[k]` says whether the finger pads
/// press the surface along segment k.
struct ScriptedEvent {
    ScriptKind kind = ScriptKind::Touch;
    std::vector<Waypoint> path;
    std::vector<bool> contact;
    int finger_count = 1;
    double finger_spacing = 9.0;  // px between neighbouring fingertips
    int focus_segment = -1;       // segment that carries the ground-truth label
};

/// Static lukewarm object resting on the surface.
struct WarmObject {
    double x = 0.0;
    double y = 0.0;
    double radius = 5.0;
    double delta_k = 3.0;
};

/// Coloured rectangle rendered into the RGB stream for stabilization.
struct ReferenceMarker {
    double cx = 0.0;
    double cy = 0.0;
    double width = 30.0;
    double height = 18.0;
    double angle = 0.0;
    Rgb color{250, 220, 40};
    Rgb background{90, 90, 90};
};

struct HandGeometry {
    double finger_length = 16.0;
    double finger_radius = 2.5;
    double palm_rx = 11.0;
    double palm_ry = 9.0;
    double arm_radius = 8.0;
    double pad_radius = 3.0;  // contact disk that receives heat
};

struct SynthSceneConfig {
    int width = 160;
    int height = 120;
    double fps = 9.0;
    double duration_s = 6.0;
    double ambient_k = 295.0;
    double hand_k = 306.0;
    double deposit_delta_k = 3.0;
    double tau_s = 2.5;           // Newtonian cooling constant of deposits
    double tau_contact_s = 0.5;   // heating constant while a pad is pressed
    double noise_sigma_counts = 30.0;
    double counts_per_kelvin = 100.0;
    double base_counts = 1000.0;  // counts reported at ambient temperature
    HandGeometry hand;
    std::vector<ScriptedEvent> events;
    std::vector<WarmObject> objects;
    std::optional<std::vector<SimilarityTransform>> jitter;  // per frame, world -> camera
    std::optional<ReferenceMarker> marker;                   // enables the RGB stream
    std::uint64_t seed = 0;

    int frame_count() const;
};

struct TruthEvent {
    ScriptKind kind = ScriptKind::Touch;
    int start_frame = 0;  // first frame of the labelled segment
    int end_frame = 0;    // last frame of the labelled segment
    std::vector<PointF> points;    // contact (or hover) point of every finger
    std::vector<PointF> polyline;  // stroke path, strokes only
    int finger_count = 1;
};

struct GroundTruth {
    std::string category;  // touch | hover | negative | stroke | jitter | custom
    std::vector<TruthEvent> events;       // touch, hover and stroke labels only
    std::vector<TruthEvent> distractors;  // hand passes that must stay silent
    std::vector<WarmObject> objects;
    std::vector<SimilarityTransform> jitter;
};

struct SynthClip {
    Sequence sequence;
    GroundTruth truth;
    /// Surface temperature rise above ambient per frame, K (no hand, no noise).
    std::vector<std::vector<double>> surface_delta_k;
};

/// Throws std::invalid_argument on invalid physical parameters or when any
/// fingertip of any event leaves the frame.
void validate(const SynthSceneConfig& config);

/// Deterministic in config.seed.
SynthClip generate(const SynthSceneConfig& config, unsigned threads = 1);

/// Writes the sequence plus `truth.json`.
void write_clip(const std::filesystem::path& dir, const SynthClip& clip);

// Randomized single-gesture scenes used for corpora and tests.
SynthSceneConfig touch_scene(std::uint64_t seed, int finger_count = 1, bool wide_spread = false);
SynthSceneConfig hover_scene(std::uint64_t seed);
SynthSceneConfig negative_scene(std::uint64_t seed);
SynthSceneConfig stroke_scene(std::uint64_t seed, int strokes = 1);
SynthSceneConfig jitter_scene(std::uint64_t seed, double max_shift = 4.0, double max_rot_deg = 5.0,
                              double max_scale_dev = 0.05);

struct CorpusRecipe {
    int touch = 15;
    int multi_finger = -1;  // how many of the touch clips use >= 2 fingers; -1 = touch / 3
    int hover = 5;
    int negative = 5;
    std::uint64_t seed = 1;

    int resolved_multi_finger() const;
    int total() const { return touch + hover + negative; }
};

struct ManifestEntry {
    std::string name;
    std::string category;  // touch | hover | negative
    int finger_count = 0;
};

struct Manifest {
    CorpusRecipe recipe;
    std::vector<ManifestEntry> clips;
};

/// Scene configs for every clip of a recipe, in manifest order.
std::vector<std::pair<ManifestEntry, SynthSceneConfig>> corpus_scenes(const CorpusRecipe& recipe);

/// Renders and writes `<out>/<clip>/...` plus `<out>/manifest.json`.
Manifest make_corpus(const CorpusRecipe& recipe, const std::filesystem::path& out_dir, unsigned threads = 1);

/// Stateless 64-bit mixer for deriving independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace thermtouch
