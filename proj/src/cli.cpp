#include "thermtouch/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "thermtouch/eval.hpp"
#include "thermtouch/frames_io.hpp"
#include "thermtouch/parallel.hpp"
#include "thermtouch/serialize.hpp"
#include "thermtouch/stabilize.hpp"
#include "thermtouch/synth.hpp"
#include "thermtouch/touch_events.hpp"
#include "thermtouch/trace.hpp"

namespace thermtouch {

namespace fs = std::filesystem;

namespace {

struct DetectArgs {
    std::string in;
    std::string out;
    DetectConfig cfg;
    bool annotate = false;
};

void add_preprocess_flags(CLI::App* cmd, PreprocessConfig& pre) {
    cmd->add_option("--blur-sigma", pre.blur_sigma, "Gaussian blur sigma, px")->capture_default_str();
    cmd->add_option("--blur-radius", pre.blur_radius, "Gaussian kernel radius, px")->capture_default_str();
    cmd->add_option("--threshold", pre.threshold, "foreground threshold on the normalized image")
        ->capture_default_str();
}

void add_detect_flags(CLI::App* cmd, DetectConfig& cfg) {
    add_preprocess_flags(cmd, cfg.preprocess);
    cmd->add_option("--roi-size", cfg.roi_size, "ROI side, px")->capture_default_str();
    cmd->add_option("--depth-thresh", cfg.fingertips.depth_thresh, "minimum convexity-defect depth, px")
        ->capture_default_str();
    cmd->add_option("--min-hand-area", cfg.fingertips.min_hand_area, "minimum hand contour area, px^2")
        ->capture_default_str();
    cmd->add_option("--tau-mean", cfg.detector.tau_mean, "mean-difference threshold")->capture_default_str();
    cmd->add_option("--tau-area", cfg.detector.tau_area, "warmed-blob area threshold, px^2")->capture_default_str();
    cmd->add_option("--debounce", cfg.detector.debounce, "frames needed to change occupancy state")
        ->capture_default_str();
    cmd->add_option("--occupancy-margin", cfg.detector.occupancy_margin, "ROI growth for the occupancy test, px")
        ->capture_default_str();
}

void check_detect_config(const DetectConfig& cfg, int width, int height) {
    if (cfg.roi_size < 4 || cfg.roi_size > std::min(width, height)) {
        throw std::invalid_argument("--roi-size must lie in [4, " + std::to_string(std::min(width, height)) + "]");
    }
    if (cfg.detector.debounce < 1) throw std::invalid_argument("--debounce must be >= 1");
    if (!(cfg.preprocess.blur_sigma > 0.0) || cfg.preprocess.blur_radius < 0) {
        throw std::invalid_argument("blur sigma must be > 0 and radius >= 0");
    }
}

void put(RgbFrame& img, int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    std::copy(c.begin(), c.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>((y * img.width + x) * 3));
}

void draw_box(RgbFrame& img, const Roi& r, Rgb c) {
    for (int i = 0; i < r.size; ++i) {
        put(img, r.x + i, r.y, c);
        put(img, r.x + i, r.y + r.size - 1, c);
        put(img, r.x, r.y + i, c);
        put(img, r.x + r.size - 1, r.y + i, c);
    }
}

void write_annotations(const fs::path& dir, const DetectionResult& res) {
    fs::create_directories(dir);
    constexpr Rgb kContour{230, 40, 40};
    constexpr Rgb kTip{40, 230, 40};
    constexpr Rgb kRoi{60, 120, 255};
    constexpr Rgb kTouch{40, 230, 40};
    const auto& a = res.analysis;
    for (std::size_t f = 0; f < a.normalized.size(); ++f) {
        const GrayImage& g = a.normalized[f];
        RgbFrame img;
        img.width = g.width;
        img.height = g.height;
        img.index = static_cast<int>(f);
        img.rgb.resize(static_cast<std::size_t>(g.width) * g.height * 3);
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(g.values[i], 0.0F, 1.0F) * 255.0F));
            img.rgb[3 * i] = img.rgb[3 * i + 1] = img.rgb[3 * i + 2] = v;
        }
        for (const Roi& r : res.rois) draw_box(img, r, kRoi);
        for (const auto& e : res.events) {
            if (e.kind != EventKind::Touch) continue;
            const int fi = static_cast<int>(f);
            if (fi < e.interval.enter_frame || fi > e.interval.post_frame) continue;
            for (const Roi& r : res.rois) {
                if (r.id == e.roi_id) draw_box(img, r, kTouch);
            }
        }
        const auto& obs = a.observations[f];
        if (obs.hand) {
            for (const Point p : obs.hand->points) put(img, p.x, p.y, kContour);
        }
        for (const Point p : obs.fingertips) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) put(img, p.x + dx, p.y + dy, kTip);
            }
        }
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.ppm", f);
        write_ppm(dir / name, img);
    }
}

struct ClipSummary {
    int touches = 0;
    int hovers = 0;
    std::size_t rois = 0;
};

ClipSummary detect_clip(const fs::path& in, const fs::path& out, const DetectArgs& args, unsigned threads) {
    const Sequence seq = read_sequence(in);
    check_detect_config(args.cfg, seq.meta.width, seq.meta.height);
    const DetectionResult res = detect_events(seq, args.cfg, threads);
    fs::create_directories(out);
    write_events(out / "events.jsonl", res.events);
    write_rois(out / "rois.json", res.rois);
    if (args.annotate) write_annotations(out / "annotated", res);
    ClipSummary s;
    s.rois = res.rois.size();
    for (const auto& e : res.events) (e.kind == EventKind::Touch ? s.touches : s.hovers)++;
    return s;
}

int cmd_detect(const DetectArgs& args, unsigned threads, std::ostream& out) {
    const fs::path in(args.in);
    if (!fs::is_directory(in)) throw IoError("input directory not found: " + args.in);
    if (fs::exists(in / "manifest.json")) {
        const Manifest m = read_manifest(in / "manifest.json");
        std::vector<ClipSummary> sums(m.clips.size());
        parallel_for(m.clips.size(), threads, [&](std::size_t i) {
            sums[i] = detect_clip(in / m.clips[i].name, fs::path(args.out) / m.clips[i].name, args, 1);
        });
        for (std::size_t i = 0; i < sums.size(); ++i) {
            out << m.clips[i].name << ": " << sums[i].rois << " rois, " << sums[i].touches << " touch, "
                << sums[i].hovers << " hover\n";
        }
        return 0;
    }
    const ClipSummary s = detect_clip(in, args.out, args, threads);
    out << s.rois << " rois, " << s.touches << " touch, " << s.hovers << " hover\n";
    return 0;
}

Rgb parse_color(const std::string& s) {
    Rgb c{};
    std::istringstream in(s);
    for (std::size_t i = 0; i < 3; ++i) {
        int v = -1;
        if (!(in >> v) || v < 0 || v > 255) throw std::invalid_argument("--ref-color expects r,g,b in [0, 255]");
        c[i] = static_cast<std::uint8_t>(v);
        if (i < 2 && in.get() != ',') throw std::invalid_argument("--ref-color expects r,g,b");
    }
    return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thermal-camera touch detection on arbitrary surfaces"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "detect touch and hover events");
    detect->add_option("--in", det.in, "sequence directory or synthetic corpus")->required();
    detect->add_option("--out", det.out, "output directory")->required();
    detect->add_flag("--annotate", det.annotate, "also write annotated frames");
    detect->add_option("--threads", threads, "worker threads (0 = all cores)");
    add_detect_flags(detect, det.cfg);

    std::string trace_in, trace_out;
    PreprocessConfig trace_pre;
    FingertipConfig trace_tips;
    TraceConfig trace_cfg;
    auto* trace = app.add_subcommand("trace", "reconstruct finger traces from residual heat");
    trace->add_option("--in", trace_in, "sequence directory")->required();
    trace->add_option("--out", trace_out, "output directory")->required();
    trace->add_option("--residual-floor", trace_cfg.residual_floor, "minimum normalized residual")
        ->capture_default_str();
    trace->add_option("--hand-guard", trace_cfg.hand_guard, "px kept clear around the hand")->capture_default_str();
    trace->add_option("--threads", threads, "worker threads (0 = all cores)");
    add_preprocess_flags(trace, trace_pre);

    std::string stab_in, stab_out, ref_color = "250,220,40";
    int tol = 40;
    auto* stab = app.add_subcommand("stabilize", "undo camera motion using a coloured reference object");
    stab->add_option("--in", stab_in, "sequence directory with RGB frames")->required();
    stab->add_option("--out", stab_out, "output directory")->required();
    stab->add_option("--ref-color", ref_color, "reference colour r,g,b")->capture_default_str();
    stab->add_option("--tol", tol, "per-channel colour tolerance")->capture_default_str();
    stab->add_option("--threads", threads, "worker threads (0 = all cores)");

    std::string synth_out, recipe_path, config_path, kind;
    std::uint64_t seed = 1;
    int fingers = 1;
    auto* synth = app.add_subcommand("synth", "generate synthetic clips with ground truth");
    synth->add_option("--out", synth_out, "output directory")->required();
    auto* recipe_opt = synth->add_option("--recipe", recipe_path, "corpus recipe JSON");
    auto* config_opt = synth->add_option("--config", config_path, "scene config JSON");
    auto* kind_opt = synth->add_option("--kind", kind, "single scene kind")
                         ->check(CLI::IsMember({"touch", "hover", "negative", "stroke", "jitter"}));
    recipe_opt->excludes(config_opt)->excludes(kind_opt);
    config_opt->excludes(kind_opt);
    synth->add_option("--seed", seed, "generator seed")->capture_default_str();
    synth->add_option("--fingers", fingers, "fingers for --kind touch")->capture_default_str();
    synth->add_option("--threads", threads, "worker threads (0 = all cores)");

    std::string eval_corpus, eval_results, eval_report;
    auto* eval = app.add_subcommand("eval", "score detection results against ground truth");
    eval->add_option("--corpus", eval_corpus, "corpus directory with manifest.json")->required();
    eval->add_option("--results", eval_results, "directory written by detect")->required();
    eval->add_option("--report", eval_report, "report path (default <results>/report.json)");
    eval->add_option("--threads", threads, "worker threads (0 = all cores)");

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (detect->parsed()) return cmd_detect(det, threads, out);

        if (trace->parsed()) {
            const Sequence seq = read_sequence(trace_in);
            const FrameAnalysis a = analyze_frames(seq.frames, trace_pre, trace_tips, threads);
            const auto traces = build_trace(a, trace_cfg);
            write_traces(fs::path(trace_out) / "traces.json", traces);
            for (std::size_t i = 0; i < traces.size(); ++i) {
                out << "trace " << i << ": " << traces[i].points.size() << " points, length " << traces[i].length
                    << " px, decay " << (trace_decay_check(traces[i], a, trace_cfg) ? "ok" : "absent") << "\n";
            }
            return 0;
        }

        if (stab->parsed()) {
            const Rgb color = parse_color(ref_color);
            const Sequence seq = read_sequence(stab_in);
            if (!seq.rgb) throw FormatError(stab_in + ": stabilization needs RGB frames");
            const auto frames = stabilize_sequence(seq.frames, *seq.rgb, color, tol, threads);
            Sequence outseq;
            outseq.meta = seq.meta;
            outseq.meta.has_rgb = false;
            int lost = 0;
            for (const auto& f : frames) {
                outseq.frames.push_back(f.frame);
                lost += f.tracked ? 0 : 1;
            }
            write_sequence(stab_out, outseq);
            write_transforms(fs::path(stab_out) / "transforms.json", frames);
            out << frames.size() << " frames stabilized, reference lost in " << lost << "\n";
            return 0;
        }

        if (synth->parsed()) {
            if (!recipe_path.empty()) {
                const CorpusRecipe recipe = recipe_from_json(read_text(recipe_path));
                const Manifest m = make_corpus(recipe, synth_out, threads);
                out << m.clips.size() << " clips written to " << synth_out << "\n";
                return 0;
            }
            SynthSceneConfig cfg;
            if (!config_path.empty()) {
                cfg = scene_from_json(read_text(config_path));
            } else if (kind == "touch" || kind.empty()) {
                cfg = touch_scene(seed, fingers);
            } else if (kind == "hover") {
                cfg = hover_scene(seed);
            } else if (kind == "negative") {
                cfg = negative_scene(seed);
            } else if (kind == "stroke") {
                cfg = stroke_scene(seed);
            } else {
                cfg = jitter_scene(seed);
            }
            SynthClip clip = generate(cfg, threads);
            if (!kind.empty()) clip.truth.category = kind;
            write_clip(synth_out, clip);
            out << clip.sequence.frames.size() << " frames written to " << synth_out << "\n";
            return 0;
        }

        if (eval->parsed()) {
            const Manifest m = read_manifest(fs::path(eval_corpus) / "manifest.json");
            const ConfusionReport r = score_corpus(m, eval_corpus, eval_results, threads);
            const fs::path report = eval_report.empty() ? fs::path(eval_results) / "report.json" : fs::path(eval_report);
            write_text(report, report_to_json(r));
            out << format_report(r);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace thermtouch
