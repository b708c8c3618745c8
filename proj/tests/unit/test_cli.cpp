#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "../support/scratch.hpp"
#include "thermtouch/cli.hpp"
#include "thermtouch/serialize.hpp"
#include "thermtouch/synth.hpp"

using namespace thermtouch;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

}  // namespace

TEST(Cli, DetectTouchClip) {
    ScratchDir dir;
    write_clip(dir / "clip", generate(touch_scene(5)));
    const CliRun r = cli({"detect", "--in", (dir / "clip").string(), "--out", (dir / "out").string(), "--annotate"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto events = read_events(dir / "out" / "events.jsonl");
    int touches = 0;
    for (const auto& e : events) touches += e.kind == EventKind::Touch ? 1 : 0;
    EXPECT_GE(touches, 1);
    EXPECT_FALSE(read_rois(dir / "out" / "rois.json").empty());
    EXPECT_TRUE(fs::exists(dir / "out" / "annotated" / "frame_000000.ppm"));
}

TEST(Cli, MissingInputIsOperationalError) {
    ScratchDir dir;
    const CliRun r = cli({"detect", "--in", (dir / "nope").string(), "--out", (dir / "out").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, RoiSizeBelowMinimum) {
    ScratchDir dir;
    write_clip(dir / "clip", generate(hover_scene(1)));
    const CliRun r =
        cli({"detect", "--in", (dir / "clip").string(), "--out", (dir / "out").string(), "--roi-size", "3"});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"detect", "--in", "x"}).code, 2);
    EXPECT_EQ(cli({"synth", "--out", "x", "--kind", "banana"}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, SynthDetectEvalCorpus) {
    ScratchDir dir;
    CorpusRecipe recipe;
    recipe.seed = 2023;
    write_text(dir / "paper_split.json", recipe_to_json(recipe));
    CliRun r = cli({"synth", "--recipe", (dir / "paper_split.json").string(), "--out", (dir / "corpus").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Manifest m = read_manifest(dir / "corpus" / "manifest.json");
    EXPECT_EQ(m.clips.size(), 25u);
    for (const auto& c : m.clips) EXPECT_TRUE(fs::exists(dir / "corpus" / c.name / "truth.json"));

    r = cli({"detect", "--in", (dir / "corpus").string(), "--out", (dir / "results").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    r = cli({"eval", "--corpus", (dir / "corpus").string(), "--results", (dir / "results").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string report = read_text(dir / "results" / "report.json");
    EXPECT_NE(report.find("\"accuracy\""), std::string::npos);
    EXPECT_NE(r.out.find("accuracy"), std::string::npos);
}

TEST(Cli, EvalWithoutResultsFails) {
    ScratchDir dir;
    CorpusRecipe recipe;
    recipe.touch = 1;
    recipe.hover = 0;
    recipe.negative = 0;
    make_corpus(recipe, dir / "corpus");
    EXPECT_EQ(cli({"eval", "--corpus", (dir / "corpus").string(), "--results", (dir / "empty").string()}).code, 1);
}

TEST(Cli, StabilizeStaticInputIsUnchanged) {
    ScratchDir dir;
    SynthSceneConfig cfg;
    cfg.duration_s = 1.0;
    cfg.marker = ReferenceMarker{50, 40};
    const auto clip = generate(cfg);
    write_clip(dir / "in", clip);
    const CliRun r = cli({"stabilize", "--in", (dir / "in").string(), "--out", (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Sequence out = read_sequence(dir / "out");
    ASSERT_EQ(out.frames.size(), clip.sequence.frames.size());
    for (std::size_t i = 0; i < out.frames.size(); ++i) EXPECT_EQ(out.frames[i].counts, clip.sequence.frames[i].counts);
    EXPECT_TRUE(fs::exists(dir / "out" / "transforms.json"));
}

TEST(Cli, StabilizeWithoutRgbFails) {
    ScratchDir dir;
    write_clip(dir / "in", generate(hover_scene(3)));
    EXPECT_EQ(cli({"stabilize", "--in", (dir / "in").string(), "--out", (dir / "out").string()}).code, 1);
}

TEST(Cli, TraceStroke) {
    ScratchDir dir;
    ASSERT_EQ(cli({"synth", "--kind", "stroke", "--seed", "4", "--out", (dir / "s").string()}).code, 0);
    const CliRun r = cli({"trace", "--in", (dir / "s").string(), "--out", (dir / "t").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(read_text(dir / "t" / "traces.json").find("\"frame\""), std::string::npos);
}

TEST(Cli, OutputsIndependentOfThreads) {
    ScratchDir dir;
    write_clip(dir / "clip", generate(touch_scene(9, 2)));
    ASSERT_EQ(cli({"detect", "--threads", "1", "--in", (dir / "clip").string(), "--out", (dir / "a").string()}).code, 0);
    ASSERT_EQ(cli({"detect", "--threads", "3", "--in", (dir / "clip").string(), "--out", (dir / "b").string()}).code, 0);
    EXPECT_EQ(read_text(dir / "a" / "events.jsonl"), read_text(dir / "b" / "events.jsonl"));
    EXPECT_EQ(read_text(dir / "a" / "rois.json"), read_text(dir / "b" / "rois.json"));
}

TEST(Cli, BinaryExitCodes) {
    const std::string bin = THERMTOUCH_CLI;
    EXPECT_EQ(std::system((bin + " > /dev/null 2>&1").c_str()) >> 8, 2);
    EXPECT_EQ(std::system((bin + " detect --in /nonexistent --out /tmp/x > /dev/null 2>&1").c_str()) >> 8, 1);
}
