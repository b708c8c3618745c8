#include "thermtouch/frames_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace thermtouch {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::int64_t frame_timestamp_ms(int index, double fps) {
    return static_cast<std::int64_t>(std::llround(1000.0 * index / fps));
}

namespace {

std::string frame_name(int index, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.%s", index, ext);
    return buf;
}

std::vector<char> slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open " + file.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Netpbm header: magic, width, height, maxval separated by whitespace and
// optional '#' comments, then exactly one whitespace byte before the raster.
struct PnmHeader {
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t data_offset = 0;
};

PnmHeader parse_header(const std::vector<char>& buf, const char* magic, const fs::path& file) {
    if (buf.size() < 2 || buf[0] != magic[0] || buf[1] != magic[1]) {
        throw FormatError(file.string() + ": expected " + magic + " magic");
    }
    std::size_t pos = 2;
    auto next_int = [&]() {
        for (;;) {
            while (pos < buf.size() && std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
            if (pos < buf.size() && buf[pos] == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= buf.size() || !std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            throw FormatError(file.string() + ": malformed header");
        }
        long v = 0;
        while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            v = v * 10 + (buf[pos] - '0');
            if (v > 1'000'000) throw FormatError(file.string() + ": header value out of range");
            ++pos;
        }
        return static_cast<int>(v);
    };
    PnmHeader h;
    h.width = next_int();
    h.height = next_int();
    h.maxval = next_int();
    if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos]))) {
        throw FormatError(file.string() + ": malformed header");
    }
    h.data_offset = pos + 1;
    if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
        throw FormatError(file.string() + ": invalid dimensions or maxval");
    }
    return h;
}

void write_file(const fs::path& file, const std::string& header, const std::vector<std::uint8_t>& data) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + file.string());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write to " + file.string());
}

// Collects ordinal -> path for files named frame_NNNNNN.<ext>; anything else
// in the directory is ignored.
std::map<int, fs::path> list_frames(const fs::path& dir, const std::string& ext) {
    static const std::regex pattern(R"(frame_(\d{6})\.(pgm|ppm))");
    std::map<int, fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::smatch m;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, m, pattern) && m[2] == ext) {
            out.emplace(std::stoi(m[1]), entry.path());
        }
    }
    return out;
}

void check_contiguous(const std::map<int, fs::path>& files, const fs::path& dir) {
    int expected = 0;
    for (const auto& [idx, path] : files) {
        if (idx != expected) {
            throw FormatError(dir.string() + ": gap in frame numbering, missing " +
                              frame_name(expected, dir.filename() == "rgb" ? "ppm" : "pgm"));
        }
        ++expected;
    }
}

void clear_frames(const fs::path& dir, const std::string& ext) {
    for (const auto& [idx, path] : list_frames(dir, ext)) fs::remove(path);
}

}  // namespace

ThermalFrame read_pgm16(const fs::path& file) {
    const auto buf = slurp(file);
    const PnmHeader h = parse_header(buf, "P5", file);
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    const std::size_t bps = h.maxval > 255 ? 2 : 1;
    if (buf.size() - h.data_offset < n * bps) throw FormatError(file.string() + ": truncated raster");

    ThermalFrame f;
    f.width = h.width;
    f.height = h.height;
    f.counts.resize(n);
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data() + h.data_offset);
    for (std::size_t i = 0; i < n; ++i) {
        f.counts[i] = bps == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
    }
    return f;
}

void write_pgm16(const fs::path& file, const ThermalFrame& frame) {
    const std::string header =
        "P5\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n65535\n";
    std::vector<std::uint8_t> data(frame.counts.size() * 2);
    for (std::size_t i = 0; i < frame.counts.size(); ++i) {
        data[2 * i] = static_cast<std::uint8_t>(frame.counts[i] >> 8);
        data[2 * i + 1] = static_cast<std::uint8_t>(frame.counts[i] & 0xFF);
    }
    write_file(file, header, data);
}

RgbFrame read_ppm(const fs::path& file) {
    const auto buf = slurp(file);
    const PnmHeader h = parse_header(buf, "P6", file);
    if (h.maxval > 255) throw FormatError(file.string() + ": only 8-bit PPM is supported");
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height * 3;
    if (buf.size() - h.data_offset < n) throw FormatError(file.string() + ": truncated raster");
    RgbFrame f;
    f.width = h.width;
    f.height = h.height;
    f.rgb.assign(buf.begin() + static_cast<std::ptrdiff_t>(h.data_offset),
                 buf.begin() + static_cast<std::ptrdiff_t>(h.data_offset + n));
    return f;
}

void write_ppm(const fs::path& file, const RgbFrame& frame) {
    const std::string header =
        "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
    write_file(file, header, frame.rgb);
}

SequenceMeta read_meta(const fs::path& file) {
    if (!fs::exists(file)) throw IoError("missing " + file.string());
    std::ifstream in(file);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(file.string() + ": " + e.what());
    }
    SequenceMeta m;
    try {
        m.fps = j.at("fps").get<double>();
        m.width = j.at("width").get<int>();
        m.height = j.at("height").get<int>();
        m.has_rgb = j.value("has_rgb", false);
        if (j.contains("counts_to_kelvin") && !j["counts_to_kelvin"].is_null()) {
            const auto& c = j["counts_to_kelvin"];
            m.counts_to_kelvin = CountsToKelvin{c.at("gain").get<double>(), c.at("offset").get<double>()};
        }
    } catch (const json::exception& e) {
        throw FormatError(file.string() + ": " + e.what());
    }
    if (!(m.fps > 0.0)) throw FormatError(file.string() + ": fps must be positive");
    if (m.width < 8 || m.height < 8) throw FormatError(file.string() + ": resolution below 8x8");
    if (m.counts_to_kelvin && !(m.counts_to_kelvin->gain > 0.0)) {
        throw FormatError(file.string() + ": counts_to_kelvin gain must be positive");
    }
    return m;
}

void write_meta(const fs::path& file, const SequenceMeta& meta) {
    json j;
    j["fps"] = meta.fps;
    j["width"] = meta.width;
    j["height"] = meta.height;
    if (meta.counts_to_kelvin) {
        j["counts_to_kelvin"] = {{"gain", meta.counts_to_kelvin->gain}, {"offset", meta.counts_to_kelvin->offset}};
    }
    j["has_rgb"] = meta.has_rgb;
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw IoError("cannot write " + file.string());
    out << j.dump(2) << "\n";
}

Sequence read_sequence(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    Sequence seq;
    seq.meta = read_meta(dir / "meta.json");

    const auto thermal = list_frames(dir / "thermal", "pgm");
    if (thermal.empty()) throw FormatError(dir.string() + ": no thermal frames");
    check_contiguous(thermal, dir / "thermal");

    seq.frames.reserve(thermal.size());
    for (const auto& [idx, path] : thermal) {
        ThermalFrame f = read_pgm16(path);
        if (f.width != seq.meta.width || f.height != seq.meta.height) {
            throw FormatError(path.string() + ": dimensions differ from meta.json");
        }
        f.index = idx;
        f.timestamp_ms = frame_timestamp_ms(idx, seq.meta.fps);
        seq.frames.push_back(std::move(f));
    }

    if (seq.meta.has_rgb) {
        const auto rgb = list_frames(dir / "rgb", "ppm");
        check_contiguous(rgb, dir / "rgb");
        if (rgb.size() != thermal.size()) {
            throw FormatError(dir.string() + ": thermal/rgb frame count mismatch");
        }
        std::vector<RgbFrame> frames;
        frames.reserve(rgb.size());
        for (const auto& [idx, path] : rgb) {
            RgbFrame f = read_ppm(path);
            if (f.width != seq.meta.width || f.height != seq.meta.height) {
                throw FormatError(path.string() + ": dimensions differ from meta.json");
            }
            f.index = idx;
            frames.push_back(std::move(f));
        }
        seq.rgb = std::move(frames);
    }
    return seq;
}

void write_sequence(const fs::path& dir, const SequenceMeta& meta, const std::vector<ThermalFrame>& frames,
                    const std::optional<std::vector<RgbFrame>>& rgb) {
    if (frames.empty()) throw std::invalid_argument("write_sequence: no frames");
    if (rgb.has_value() != meta.has_rgb) {
        throw std::invalid_argument("write_sequence: rgb frames must be given iff meta.has_rgb");
    }
    for (const auto& f : frames) {
        if (f.width != meta.width || f.height != meta.height ||
            f.counts.size() != static_cast<std::size_t>(f.width) * f.height) {
            throw std::invalid_argument("write_sequence: thermal frame dimensions differ from meta");
        }
    }
    if (rgb) {
        if (rgb->size() != frames.size()) throw std::invalid_argument("write_sequence: rgb/thermal count mismatch");
        for (const auto& f : *rgb) {
            if (f.width != meta.width || f.height != meta.height ||
                f.rgb.size() != static_cast<std::size_t>(f.width) * f.height * 3) {
                throw std::invalid_argument("write_sequence: rgb frame dimensions differ from meta");
            }
        }
    }

    std::error_code ec;
    fs::create_directories(dir / "thermal", ec);
    if (ec) throw IoError("cannot create " + (dir / "thermal").string() + ": " + ec.message());
    clear_frames(dir / "thermal", "pgm");
    if (fs::is_directory(dir / "rgb")) clear_frames(dir / "rgb", "ppm");

    write_meta(dir / "meta.json", meta);
    // Files are numbered by position so the output is always gap-free.
    for (std::size_t i = 0; i < frames.size(); ++i) {
        write_pgm16(dir / "thermal" / frame_name(static_cast<int>(i), "pgm"), frames[i]);
    }
    if (rgb) {
        fs::create_directories(dir / "rgb", ec);
        if (ec) throw IoError("cannot create " + (dir / "rgb").string() + ": " + ec.message());
        for (std::size_t i = 0; i < rgb->size(); ++i) {
            write_ppm(dir / "rgb" / frame_name(static_cast<int>(i), "ppm"), (*rgb)[i]);
        }
    }
}

}  // namespace thermtouch
