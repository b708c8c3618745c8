#include "thermtouch/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace thermtouch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
auto parse_or_throw(const std::string& text, const char* what, F&& fn) {
    try {
        return fn(json::parse(text));
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

json point_json(PointF p) { return {{"x", p.x}, {"y", p.y}}; }
PointF point_from(const json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

json transform_json(const SimilarityTransform& t) {
    return {{"tx", t.tx}, {"ty", t.ty}, {"theta", t.theta}, {"scale", t.scale}};
}

SimilarityTransform transform_from(const json& j) {
    SimilarityTransform t;
    t.tx = j.value("tx", 0.0);
    t.ty = j.value("ty", 0.0);
    t.theta = j.value("theta", 0.0);
    t.scale = j.value("scale", 1.0);
    return t;
}

json object_json(const WarmObject& o) {
    return {{"x", o.x}, {"y", o.y}, {"radius", o.radius}, {"delta_k", o.delta_k}};
}

WarmObject object_from(const json& j) {
    WarmObject o;
    o.x = j.at("x").get<double>();
    o.y = j.at("y").get<double>();
    o.radius = j.value("radius", o.radius);
    o.delta_k = j.value("delta_k", o.delta_k);
    return o;
}

json truth_event_json(const TruthEvent& e) {
    json pts = json::array();
    for (const PointF p : e.points) pts.push_back(point_json(p));
    json poly = json::array();
    for (const PointF p : e.polyline) poly.push_back(point_json(p));
    return {{"kind", to_string(e.kind)},   {"start_frame", e.start_frame}, {"end_frame", e.end_frame},
            {"points", pts},               {"polyline", poly},             {"finger_count", e.finger_count}};
}

TruthEvent truth_event_from(const json& j) {
    TruthEvent e;
    e.kind = script_kind_from_string(j.at("kind").get<std::string>());
    e.start_frame = j.at("start_frame").get<int>();
    e.end_frame = j.at("end_frame").get<int>();
    for (const auto& p : j.value("points", json::array())) e.points.push_back(point_from(p));
    for (const auto& p : j.value("polyline", json::array())) e.polyline.push_back(point_from(p));
    e.finger_count = j.value("finger_count", 1);
    return e;
}

json recipe_json(const CorpusRecipe& r) {
    return {{"touch", r.touch}, {"multi_finger", r.multi_finger}, {"hover", r.hover}, {"negative", r.negative},
            {"seed", r.seed}};
}

CorpusRecipe recipe_from(const json& j) {
    CorpusRecipe r;
    r.touch = j.value("touch", r.touch);
    r.multi_finger = j.value("multi_finger", r.multi_finger);
    r.hover = j.value("hover", r.hover);
    r.negative = j.value("negative", r.negative);
    r.seed = j.value("seed", r.seed);
    return r;
}

json rgb_json(const Rgb& c) { return json::array({c[0], c[1], c[2]}); }

Rgb rgb_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("colour must be [r, g, b]");
    return {j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>(), j[2].get<std::uint8_t>()};
}

}  // namespace

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string rois_to_json(std::span<const Roi> rois) {
    json arr = json::array();
    for (const Roi& r : rois) arr.push_back({{"id", r.id}, {"x", r.x}, {"y", r.y}, {"size", r.size}});
    return arr.dump(2) + "\n";
}

std::vector<Roi> rois_from_json(const std::string& text) {
    return parse_or_throw(text, "rois", [](const json& j) {
        std::vector<Roi> out;
        for (const auto& r : j) {
            out.push_back({r.at("id").get<int>(), r.at("x").get<int>(), r.at("y").get<int>(), r.at("size").get<int>()});
        }
        return out;
    });
}

void write_rois(const fs::path& path, std::span<const Roi> rois) { write_text(path, rois_to_json(rois)); }
std::vector<Roi> read_rois(const fs::path& path) { return rois_from_json(read_text(path)); }

std::string events_to_jsonl(std::span<const InteractionEvent> events) {
    std::string out;
    for (const auto& e : events) {
        json j = {{"roi_id", e.roi_id},
                  {"kind", to_string(e.kind)},
                  {"pre_frame", e.interval.pre_frame},
                  {"enter_frame", e.interval.enter_frame},
                  {"exit_frame", e.interval.exit_frame},
                  {"post_frame", e.interval.post_frame},
                  {"mean_delta", e.mean_delta},
                  {"diff_area", e.diff_area},
                  {"fingertip_count", e.fingertip_count}};
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<InteractionEvent> events_from_jsonl(const std::string& text) {
    std::vector<InteractionEvent> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_or_throw(line, "events", [](const json& j) {
            InteractionEvent e;
            e.roi_id = j.at("roi_id").get<int>();
            const auto kind = j.at("kind").get<std::string>();
            if (kind != "touch" && kind != "hover") throw FormatError("events: unknown kind " + kind);
            e.kind = kind == "touch" ? EventKind::Touch : EventKind::Hover;
            e.interval.roi_id = e.roi_id;
            e.interval.pre_frame = j.at("pre_frame").get<int>();
            e.interval.enter_frame = j.at("enter_frame").get<int>();
            e.interval.exit_frame = j.at("exit_frame").get<int>();
            e.interval.post_frame = j.at("post_frame").get<int>();
            e.mean_delta = j.value("mean_delta", 0.0);
            e.diff_area = j.value("diff_area", 0.0);
            e.fingertip_count = j.value("fingertip_count", 0);
            return e;
        }));
    }
    return out;
}

void write_events(const fs::path& path, std::span<const InteractionEvent> events) {
    write_text(path, events_to_jsonl(events));
}

std::vector<InteractionEvent> read_events(const fs::path& path) { return events_from_jsonl(read_text(path)); }

std::string traces_to_json(std::span<const TracePolyline> traces) {
    json arr = json::array();
    for (const auto& t : traces) {
        json pl = json::array();
        for (const auto& p : t.points) pl.push_back({{"x", p.x}, {"y", p.y}, {"frame", p.frame}});
        arr.push_back(pl);
    }
    return arr.dump(2) + "\n";
}

void write_traces(const fs::path& path, std::span<const TracePolyline> traces) {
    write_text(path, traces_to_json(traces));
}

std::string transforms_to_json(std::span<const StabilizedFrame> frames) {
    json arr = json::array();
    for (const auto& f : frames) {
        json t = transform_json(f.transform);
        t["tracked"] = f.tracked;
        arr.push_back(t);
    }
    return arr.dump(2) + "\n";
}

void write_transforms(const fs::path& path, std::span<const StabilizedFrame> frames) {
    write_text(path, transforms_to_json(frames));
}

std::string truth_to_json(const GroundTruth& truth) {
    json ev = json::array();
    for (const auto& e : truth.events) ev.push_back(truth_event_json(e));
    json dis = json::array();
    for (const auto& e : truth.distractors) dis.push_back(truth_event_json(e));
    json obj = json::array();
    for (const auto& o : truth.objects) obj.push_back(object_json(o));
    json jit = json::array();
    for (const auto& t : truth.jitter) jit.push_back(transform_json(t));
    json j = {{"category", truth.category}, {"events", ev}, {"distractors", dis}, {"objects", obj}, {"jitter", jit}};
    return j.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
    return parse_or_throw(text, "truth", [](const json& j) {
        GroundTruth t;
        t.category = j.value("category", std::string("custom"));
        for (const auto& e : j.value("events", json::array())) t.events.push_back(truth_event_from(e));
        for (const auto& e : j.value("distractors", json::array())) t.distractors.push_back(truth_event_from(e));
        for (const auto& o : j.value("objects", json::array())) t.objects.push_back(object_from(o));
        for (const auto& x : j.value("jitter", json::array())) t.jitter.push_back(transform_from(x));
        return t;
    });
}

void write_truth(const fs::path& path, const GroundTruth& truth) { write_text(path, truth_to_json(truth)); }
GroundTruth read_truth(const fs::path& path) { return truth_from_json(read_text(path)); }

std::string manifest_to_json(const Manifest& m) {
    json clips = json::array();
    for (const auto& c : m.clips) {
        clips.push_back({{"name", c.name}, {"category", c.category}, {"finger_count", c.finger_count}});
    }
    return json{{"recipe", recipe_json(m.recipe)}, {"clips", clips}}.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
    return parse_or_throw(text, "manifest", [](const json& j) {
        Manifest m;
        m.recipe = recipe_from(j.value("recipe", json::object()));
        for (const auto& c : j.at("clips")) {
            m.clips.push_back(
                {c.at("name").get<std::string>(), c.at("category").get<std::string>(), c.value("finger_count", 0)});
        }
        return m;
    });
}

void write_manifest(const fs::path& path, const Manifest& m) { write_text(path, manifest_to_json(m)); }
Manifest read_manifest(const fs::path& path) { return manifest_from_json(read_text(path)); }

CorpusRecipe recipe_from_json(const std::string& text) {
    return parse_or_throw(text, "recipe", [](const json& j) { return recipe_from(j); });
}

std::string recipe_to_json(const CorpusRecipe& recipe) { return recipe_json(recipe).dump(2) + "\n"; }

SynthSceneConfig scene_from_json(const std::string& text) {
    return parse_or_throw(text, "scene", [](const json& j) {
        SynthSceneConfig c;
        c.width = j.value("width", c.width);
        c.height = j.value("height", c.height);
        c.fps = j.value("fps", c.fps);
        c.duration_s = j.value("duration_s", c.duration_s);
        c.ambient_k = j.value("ambient_k", c.ambient_k);
        c.hand_k = j.value("hand_k", c.hand_k);
        c.deposit_delta_k = j.value("deposit_delta_k", c.deposit_delta_k);
        c.tau_s = j.value("tau_s", c.tau_s);
        c.tau_contact_s = j.value("tau_contact_s", c.tau_contact_s);
        c.noise_sigma_counts = j.value("noise_sigma_counts", c.noise_sigma_counts);
        c.counts_per_kelvin = j.value("counts_per_kelvin", c.counts_per_kelvin);
        c.base_counts = j.value("base_counts", c.base_counts);
        c.seed = j.value("seed", c.seed);
        if (j.contains("hand")) {
            const json& h = j["hand"];
            c.hand.finger_length = h.value("finger_length", c.hand.finger_length);
            c.hand.finger_radius = h.value("finger_radius", c.hand.finger_radius);
            c.hand.palm_rx = h.value("palm_rx", c.hand.palm_rx);
            c.hand.palm_ry = h.value("palm_ry", c.hand.palm_ry);
            c.hand.arm_radius = h.value("arm_radius", c.hand.arm_radius);
            c.hand.pad_radius = h.value("pad_radius", c.hand.pad_radius);
        }
        for (const auto& e : j.value("events", json::array())) {
            ScriptedEvent ev;
            ev.kind = script_kind_from_string(e.value("kind", std::string("touch")));
            for (const auto& w : e.at("path")) {
                ev.path.push_back({w.at("x").get<double>(), w.at("y").get<double>(), w.at("t").get<double>()});
            }
            for (const auto& b : e.at("contact")) ev.contact.push_back(b.get<bool>());
            ev.finger_count = e.value("finger_count", ev.finger_count);
            ev.finger_spacing = e.value("finger_spacing", ev.finger_spacing);
            ev.focus_segment = e.value("focus_segment", ev.focus_segment);
            c.events.push_back(std::move(ev));
        }
        for (const auto& o : j.value("objects", json::array())) c.objects.push_back(object_from(o));
        if (j.contains("jitter")) {
            std::vector<SimilarityTransform> jit;
            for (const auto& t : j["jitter"]) jit.push_back(transform_from(t));
            c.jitter = std::move(jit);
        }
        if (j.contains("marker")) {
            const json& m = j["marker"];
            ReferenceMarker mk;
            mk.cx = m.at("cx").get<double>();
            mk.cy = m.at("cy").get<double>();
            mk.width = m.value("width", mk.width);
            mk.height = m.value("height", mk.height);
            mk.angle = m.value("angle", mk.angle);
            if (m.contains("color")) mk.color = rgb_from(m["color"]);
            if (m.contains("background")) mk.background = rgb_from(m["background"]);
            c.marker = mk;
        }
        return c;
    });
}

std::string scene_to_json(const SynthSceneConfig& c) {
    json j = {{"width", c.width},
              {"height", c.height},
              {"fps", c.fps},
              {"duration_s", c.duration_s},
              {"ambient_k", c.ambient_k},
              {"hand_k", c.hand_k},
              {"deposit_delta_k", c.deposit_delta_k},
              {"tau_s", c.tau_s},
              {"tau_contact_s", c.tau_contact_s},
              {"noise_sigma_counts", c.noise_sigma_counts},
              {"counts_per_kelvin", c.counts_per_kelvin},
              {"base_counts", c.base_counts},
              {"seed", c.seed}};
    j["hand"] = {{"finger_length", c.hand.finger_length}, {"finger_radius", c.hand.finger_radius},
                 {"palm_rx", c.hand.palm_rx},             {"palm_ry", c.hand.palm_ry},
                 {"arm_radius", c.hand.arm_radius},       {"pad_radius", c.hand.pad_radius}};
    json events = json::array();
    for (const auto& ev : c.events) {
        json path = json::array();
        for (const auto& w : ev.path) path.push_back({{"x", w.x}, {"y", w.y}, {"t", w.t}});
        json contact = json::array();
        for (const bool b : ev.contact) contact.push_back(b);
        events.push_back({{"kind", to_string(ev.kind)},
                          {"path", path},
                          {"contact", contact},
                          {"finger_count", ev.finger_count},
                          {"finger_spacing", ev.finger_spacing},
                          {"focus_segment", ev.focus_segment}});
    }
    j["events"] = events;
    json objects = json::array();
    for (const auto& o : c.objects) objects.push_back(object_json(o));
    j["objects"] = objects;
    if (c.jitter) {
        json jit = json::array();
        for (const auto& t : *c.jitter) jit.push_back(transform_json(t));
        j["jitter"] = jit;
    }
    if (c.marker) {
        const auto& m = *c.marker;
        j["marker"] = {{"cx", m.cx},       {"cy", m.cy},
                       {"width", m.width}, {"height", m.height},
                       {"angle", m.angle}, {"color", rgb_json(m.color)},
                       {"background", rgb_json(m.background)}};
    }
    return j.dump(2) + "\n";
}

}  // namespace thermtouch
