#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "thermtouch/roi.hpp"
#include "thermtouch/stabilize.hpp"
#include "thermtouch/synth.hpp"
#include "thermtouch/touch_events.hpp"
#include "thermtouch/trace.hpp"

namespace thermtouch {

// JSON artifacts. Readers throw FormatError on malformed content and IoError
// when the file cannot be opened.

std::string rois_to_json(std::span<const Roi> rois);
std::vector<Roi> rois_from_json(const std::string& text);
void write_rois(const std::filesystem::path& path, std::span<const Roi> rois);
std::vector<Roi> read_rois(const std::filesystem::path& path);

/// One JSON object per line.
std::string events_to_jsonl(std::span<const InteractionEvent> events);
std::vector<InteractionEvent> events_from_jsonl(const std::string& text);
void write_events(const std::filesystem::path& path, std::span<const InteractionEvent> events);
std::vector<InteractionEvent> read_events(const std::filesystem::path& path);

std::string traces_to_json(std::span<const TracePolyline> traces);
void write_traces(const std::filesystem::path& path, std::span<const TracePolyline> traces);

std::string transforms_to_json(std::span<const StabilizedFrame> frames);
void write_transforms(const std::filesystem::path& path, std::span<const StabilizedFrame> frames);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& text);
void write_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth(const std::filesystem::path& path);

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

/// Missing keys keep their defaults.
CorpusRecipe recipe_from_json(const std::string& text);
std::string recipe_to_json(const CorpusRecipe& recipe);

/// Missing keys keep their defaults.
SynthSceneConfig scene_from_json(const std::string& text);
std::string scene_to_json(const SynthSceneConfig& config);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace thermtouch
