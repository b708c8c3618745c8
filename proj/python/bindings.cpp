#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "thermtouch/cli.hpp"
#include "thermtouch/eval.hpp"
#include "thermtouch/frames_io.hpp"
#include "thermtouch/imgproc.hpp"
#include "thermtouch/serialize.hpp"
#include "thermtouch/stabilize.hpp"
#include "thermtouch/synth.hpp"
#include "thermtouch/touch_events.hpp"
#include "thermtouch/trace.hpp"

namespace py = pybind11;
using namespace thermtouch;

namespace {

using U16Array = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F32Array = py::array_t<float, py::array::c_style | py::array::forcecast>;

ThermalFrame to_thermal(const U16Array& a, int index, double fps) {
    if (a.ndim() != 2) throw std::invalid_argument("thermal frame must be a 2-D array");
    ThermalFrame f;
    f.height = static_cast<int>(a.shape(0));
    f.width = static_cast<int>(a.shape(1));
    f.counts.assign(a.data(), a.data() + a.size());
    f.index = index;
    f.timestamp_ms = frame_timestamp_ms(index, fps);
    return f;
}

std::vector<ThermalFrame> to_thermal(const std::vector<U16Array>& arrays, double fps = 9.0) {
    std::vector<ThermalFrame> out;
    out.reserve(arrays.size());
    for (std::size_t i = 0; i < arrays.size(); ++i) out.push_back(to_thermal(arrays[i], static_cast<int>(i), fps));
    return out;
}

std::vector<RgbFrame> to_rgb(const std::vector<U8Array>& arrays) {
    std::vector<RgbFrame> out;
    for (std::size_t i = 0; i < arrays.size(); ++i) {
        const auto& a = arrays[i];
        if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("rgb frame must have shape (h, w, 3)");
        RgbFrame f;
        f.height = static_cast<int>(a.shape(0));
        f.width = static_cast<int>(a.shape(1));
        f.rgb.assign(a.data(), a.data() + a.size());
        f.index = static_cast<int>(i);
        out.push_back(std::move(f));
    }
    return out;
}

U16Array from_thermal(const ThermalFrame& f) {
    U16Array a({f.height, f.width});
    std::copy(f.counts.begin(), f.counts.end(), a.mutable_data());
    return a;
}

U8Array from_rgb(const RgbFrame& f) {
    U8Array a({f.height, f.width, 3});
    std::copy(f.rgb.begin(), f.rgb.end(), a.mutable_data());
    return a;
}

GrayImage to_gray_image(const F32Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("image must be a 2-D array");
    GrayImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), img.values.begin());
    return img;
}

F32Array from_gray(const GrayImage& img) {
    F32Array a({img.height, img.width});
    std::copy(img.values.begin(), img.values.end(), a.mutable_data());
    return a;
}

py::list frames_list(const std::vector<ThermalFrame>& frames) {
    py::list out;
    for (const auto& f : frames) out.append(from_thermal(f));
    return out;
}

py::object rgb_list(const std::optional<std::vector<RgbFrame>>& rgb) {
    if (!rgb) return py::none();
    py::list out;
    for (const auto& f : *rgb) out.append(from_rgb(f));
    return out;
}

SynthSceneConfig scene_for(const std::string& kind, std::uint64_t seed, int fingers, bool wide) {
    if (kind == "touch") return touch_scene(seed, fingers, wide);
    if (kind == "hover") return hover_scene(seed);
    if (kind == "negative") return negative_scene(seed);
    if (kind == "stroke") return stroke_scene(seed, fingers);
    if (kind == "jitter") return jitter_scene(seed);
    throw std::invalid_argument("unknown scene kind: " + kind);
}

py::dict clip_dict(const SynthClip& clip) {
    py::dict d;
    d["fps"] = clip.sequence.meta.fps;
    d["frames"] = frames_list(clip.sequence.frames);
    d["rgb"] = rgb_list(clip.sequence.rgb);
    d["truth_json"] = truth_to_json(clip.truth);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Thermal touch, hover and trace detection";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ReferenceLost>(m, "ReferenceLost", PyExc_RuntimeError);
    py::register_exception<MissingBaseline>(m, "MissingBaseline", PyExc_RuntimeError);
    py::register_exception<DegenerateFrame>(m, "DegenerateFrame", PyExc_ValueError);

    py::class_<PreprocessConfig>(m, "PreprocessConfig")
        .def(py::init<>())
        .def_readwrite("blur_sigma", &PreprocessConfig::blur_sigma)
        .def_readwrite("blur_radius", &PreprocessConfig::blur_radius)
        .def_readwrite("threshold", &PreprocessConfig::threshold);

    py::class_<FingertipConfig>(m, "FingertipConfig")
        .def(py::init<>())
        .def_readwrite("depth_thresh", &FingertipConfig::depth_thresh)
        .def_readwrite("min_hand_area", &FingertipConfig::min_hand_area)
        .def_readwrite("merge_radius", &FingertipConfig::merge_radius);

    py::class_<DetectorConfig>(m, "DetectorConfig")
        .def(py::init<>())
        .def_readwrite("tau_mean", &DetectorConfig::tau_mean)
        .def_readwrite("tau_area", &DetectorConfig::tau_area)
        .def_readwrite("diff_blur_sigma", &DetectorConfig::diff_blur_sigma)
        .def_readwrite("debounce", &DetectorConfig::debounce)
        .def_readwrite("occupancy_margin", &DetectorConfig::occupancy_margin);

    py::class_<DetectConfig>(m, "DetectConfig")
        .def(py::init<>())
        .def_readwrite("preprocess", &DetectConfig::preprocess)
        .def_readwrite("fingertips", &DetectConfig::fingertips)
        .def_readwrite("detector", &DetectConfig::detector)
        .def_readwrite("roi_size", &DetectConfig::roi_size);

    py::class_<Roi>(m, "Roi")
        .def(py::init<>())
        .def_readwrite("id", &Roi::id)
        .def_readwrite("x", &Roi::x)
        .def_readwrite("y", &Roi::y)
        .def_readwrite("size", &Roi::size)
        .def("contains", &Roi::contains)
        .def("__eq__", [](const Roi& a, const Roi& b) { return a == b; })
        .def("__repr__", [](const Roi& r) {
            std::ostringstream s;
            s << "Roi(id=" << r.id << ", x=" << r.x << ", y=" << r.y << ", size=" << r.size << ")";
            return s.str();
        });

    py::class_<OccupancyInterval>(m, "OccupancyInterval")
        .def_readonly("roi_id", &OccupancyInterval::roi_id)
        .def_readonly("pre_frame", &OccupancyInterval::pre_frame)
        .def_readonly("enter_frame", &OccupancyInterval::enter_frame)
        .def_readonly("exit_frame", &OccupancyInterval::exit_frame)
        .def_readonly("post_frame", &OccupancyInterval::post_frame);

    py::class_<InteractionEvent>(m, "InteractionEvent")
        .def_readonly("roi_id", &InteractionEvent::roi_id)
        .def_readonly("interval", &InteractionEvent::interval)
        .def_property_readonly("kind", [](const InteractionEvent& e) { return to_string(e.kind); })
        .def_readonly("mean_delta", &InteractionEvent::mean_delta)
        .def_readonly("diff_area", &InteractionEvent::diff_area)
        .def_readonly("fingertip_count", &InteractionEvent::fingertip_count)
        .def("__repr__", [](const InteractionEvent& e) {
            std::ostringstream s;
            s << "InteractionEvent(kind=" << to_string(e.kind) << ", roi_id=" << e.roi_id
              << ", enter=" << e.interval.enter_frame << ", exit=" << e.interval.exit_frame << ")";
            return s.str();
        });

    py::class_<DetectionResult>(m, "DetectionResult")
        .def_readonly("rois", &DetectionResult::rois)
        .def_readonly("events", &DetectionResult::events)
        .def_property_readonly("fingertips", [](const DetectionResult& r) {
            std::vector<std::vector<std::pair<int, int>>> out;
            for (const auto& o : r.analysis.observations) {
                auto& tips = out.emplace_back();
                for (const Point p : o.fingertips) tips.emplace_back(p.x, p.y);
            }
            return out;
        });

    py::class_<TracePoint>(m, "TracePoint")
        .def_readonly("x", &TracePoint::x)
        .def_readonly("y", &TracePoint::y)
        .def_readonly("frame", &TracePoint::frame);

    py::class_<TracePolyline>(m, "TracePolyline")
        .def_readonly("points", &TracePolyline::points)
        .def_readonly("length", &TracePolyline::length);

    py::class_<SimilarityTransform>(m, "SimilarityTransform")
        .def(py::init<>())
        .def(py::init([](double tx, double ty, double theta, double scale) {
                 return SimilarityTransform{tx, ty, theta, scale};
             }),
             py::arg("tx"), py::arg("ty"), py::arg("theta"), py::arg("scale"))
        .def_readwrite("tx", &SimilarityTransform::tx)
        .def_readwrite("ty", &SimilarityTransform::ty)
        .def_readwrite("theta", &SimilarityTransform::theta)
        .def_readwrite("scale", &SimilarityTransform::scale)
        .def("apply", [](const SimilarityTransform& t, double x, double y) {
            const PointF p = t.apply({x, y});
            return std::make_pair(p.x, p.y);
        })
        .def("inverse", &SimilarityTransform::inverse)
        .def("compose", &SimilarityTransform::compose);

    py::class_<StabilizedFrame>(m, "StabilizedFrame")
        .def_property_readonly("frame", [](const StabilizedFrame& f) { return from_thermal(f.frame); })
        .def_readonly("transform", &StabilizedFrame::transform)
        .def_readonly("tracked", &StabilizedFrame::tracked);

    m.def(
        "read_sequence",
        [](const std::filesystem::path& dir) {
            const Sequence seq = read_sequence(dir);
            py::dict d;
            d["fps"] = seq.meta.fps;
            d["width"] = seq.meta.width;
            d["height"] = seq.meta.height;
            d["frames"] = frames_list(seq.frames);
            d["rgb"] = rgb_list(seq.rgb);
            return d;
        },
        py::arg("path"), "Read a sequence directory into numpy arrays.");

    m.def(
        "write_sequence",
        [](const std::filesystem::path& dir, const std::vector<U16Array>& frames, double fps,
           const std::optional<std::vector<U8Array>>& rgb) {
            if (frames.empty()) throw std::invalid_argument("no frames");
            SequenceMeta meta;
            meta.fps = fps;
            meta.height = static_cast<int>(frames[0].shape(0));
            meta.width = static_cast<int>(frames[0].shape(1));
            meta.has_rgb = rgb.has_value();
            std::optional<std::vector<RgbFrame>> r;
            if (rgb) r = to_rgb(*rgb);
            write_sequence(dir, meta, to_thermal(frames, fps), r);
        },
        py::arg("path"), py::arg("frames"), py::arg("fps") = 9.0, py::arg("rgb") = py::none());

    m.def(
        "detect",
        [](const std::vector<U16Array>& frames, const DetectConfig& cfg, unsigned threads) {
            const auto thermal = to_thermal(frames);
            py::gil_scoped_release release;
            return detect_events(std::span<const ThermalFrame>(thermal), cfg, threads);
        },
        py::arg("frames"), py::arg("config") = DetectConfig{}, py::arg("threads") = 1,
        "Two-pass touch/hover detection over a list of 2-D uint16 frames.");

    m.def(
        "trace",
        [](const std::vector<U16Array>& frames, const PreprocessConfig& pre, unsigned threads) {
            const auto thermal = to_thermal(frames);
            py::gil_scoped_release release;
            const auto analysis = analyze_frames(thermal, pre, FingertipConfig{}, threads);
            return build_trace(analysis);
        },
        py::arg("frames"), py::arg("preprocess") = PreprocessConfig{}, py::arg("threads") = 1,
        "Residual-heat finger traces.");

    m.def(
        "stabilize",
        [](const std::vector<U16Array>& thermal, const std::vector<U8Array>& rgb, std::array<int, 3> ref_color,
           int tol, unsigned threads) {
            const auto t = to_thermal(thermal);
            const auto r = to_rgb(rgb);
            const Rgb c{static_cast<std::uint8_t>(ref_color[0]), static_cast<std::uint8_t>(ref_color[1]),
                        static_cast<std::uint8_t>(ref_color[2])};
            py::gil_scoped_release release;
            return stabilize_sequence(t, r, c, tol, threads);
        },
        py::arg("thermal"), py::arg("rgb"), py::arg("ref_color") = std::array<int, 3>{250, 220, 40},
        py::arg("tol") = 40, py::arg("threads") = 1);

    m.def(
        "generate",
        [](const std::string& kind, std::uint64_t seed, int fingers, bool wide) {
            return clip_dict(generate(scene_for(kind, seed, fingers, wide)));
        },
        py::arg("kind"), py::arg("seed") = 0, py::arg("fingers") = 1, py::arg("wide") = false,
        "Synthetic clip with ground truth (truth as JSON text).");

    m.def(
        "generate_from_config",
        [](const std::string& config_json) { return clip_dict(generate(scene_from_json(config_json))); },
        py::arg("config_json"));

    m.def(
        "make_corpus",
        [](const std::string& recipe_json, const std::filesystem::path& out, unsigned threads) {
            const Manifest m = make_corpus(recipe_from_json(recipe_json), out, threads);
            return manifest_to_json(m);
        },
        py::arg("recipe_json"), py::arg("out_dir"), py::arg("threads") = 1);

    m.def(
        "evaluate",
        [](const std::filesystem::path& corpus, const std::filesystem::path& results, unsigned threads) {
            const Manifest manifest = read_manifest(corpus / "manifest.json");
            return report_to_json(score_corpus(manifest, corpus, results, threads));
        },
        py::arg("corpus"), py::arg("results"), py::arg("threads") = 1, "Confusion report as JSON text.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run one CLI invocation; returns (exit_code, stdout, stderr).");

    m.def(
        "gaussian_blur",
        [](const F32Array& img, double sigma, int radius) {
            return from_gray(gaussian_blur(to_gray_image(img), sigma, radius));
        },
        py::arg("image"), py::arg("sigma") = 1.0, py::arg("radius") = 2);

    m.def(
        "normalize", [](const F32Array& img) { return from_gray(normalize(to_gray_image(img))); },
        py::arg("image"));

    m.def(
        "convex_hull",
        [](const std::vector<std::pair<int, int>>& pts) {
            std::vector<Point> p;
            for (const auto& [x, y] : pts) p.push_back({x, y});
            std::vector<std::pair<int, int>> out;
            for (const Point q : convex_hull(p)) out.emplace_back(q.x, q.y);
            return out;
        },
        py::arg("points"));

    m.def(
        "select_rois",
        [](const std::vector<std::pair<int, int>>& pts, int size, int width, int height) {
            FingertipHistory h;
            for (const auto& [x, y] : pts) h.push_back({x, y, 0});
            return select_rois(h, size, width, height);
        },
        py::arg("points"), py::arg("size"), py::arg("width"), py::arg("height"));
}
