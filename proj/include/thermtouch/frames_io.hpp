#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "thermtouch/types.hpp"

namespace thermtouch {

/// Linear counts -> Kelvin map: kelvin = gain * counts + offset.
struct CountsToKelvin {
    double gain = 1.0;
    double offset = 0.0;
};

struct SequenceMeta {
    double fps = 9.0;
    int width = 160;
    int height = 120;
    std::optional<CountsToKelvin> counts_to_kelvin;
    bool has_rgb = false;
};

struct Sequence {
    SequenceMeta meta;
    std::vector<ThermalFrame> frames;
    std::optional<std::vector<RgbFrame>> rgb;
};

/// Milliseconds from sequence start for frame ordinal `index`.
std::int64_t frame_timestamp_ms(int index, double fps);

/// Reads `<dir>/meta.json`, `<dir>/thermal/frame_%06d.pgm` and, when the
/// metadata says so, `<dir>/rgb/frame_%06d.ppm`. Frames are ordered by
/// ordinal and must be numbered 0..n-1 without gaps.
Sequence read_sequence(const std::filesystem::path& dir);

/// Writes the directory layout read by read_sequence. Existing frame files in
/// the target are removed first so that rewriting a shorter sequence leaves
/// no stale frames behind.
void write_sequence(const std::filesystem::path& dir, const SequenceMeta& meta,
                    const std::vector<ThermalFrame>& frames,
                    const std::optional<std::vector<RgbFrame>>& rgb = std::nullopt);

inline void write_sequence(const std::filesystem::path& dir, const Sequence& seq) {
    write_sequence(dir, seq.meta, seq.frames, seq.rgb);
}

// Single-file Netpbm codecs. Thermal frames are 16-bit P5, RGB frames P6.
ThermalFrame read_pgm16(const std::filesystem::path& file);
void write_pgm16(const std::filesystem::path& file, const ThermalFrame& frame);
RgbFrame read_ppm(const std::filesystem::path& file);
void write_ppm(const std::filesystem::path& file, const RgbFrame& frame);

SequenceMeta read_meta(const std::filesystem::path& file);
void write_meta(const std::filesystem::path& file, const SequenceMeta& meta);

}  // namespace thermtouch
