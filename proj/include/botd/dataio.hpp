#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botd/geometry.hpp"

namespace botd {

inline constexpr std::string_view kDontCareMarker = "###";

struct TextInstanceAnnotation {
    Polygon polygon;
    bool care = true;
    std::optional<std::string> transcription;
    friend bool operator==(const TextInstanceAnnotation&, const TextInstanceAnnotation&) = default;
};

/// An image reduced to what the pipeline consumes: its size and its annotations.
struct AnnotatedImage {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<TextInstanceAnnotation> instances;
    friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

enum class AnnotationFormat { icdar2015, ctw1500 };

/// `x1,y1,...,x4,y4,transcription` per line. A UTF-8 byte-order mark and CRLF line
/// endings are accepted; the transcription may itself contain commas.
std::vector<TextInstanceAnnotation> parse_icdar2015(std::string_view content);
std::string write_icdar2015(const std::vector<TextInstanceAnnotation>& annotations);

struct CtwParseResult {
    std::vector<TextInstanceAnnotation> annotations;
    /// 1-based line numbers whose vertex count differs from the canonical 14.
    std::vector<std::size_t> lenient_lines;
};

/// Comma-separated coordinates, canonically 28 values (14 points). Any even count
/// of at least 6 is accepted and reported in lenient_lines.
CtwParseResult parse_ctw1500(std::string_view content);
std::string write_ctw1500(const std::vector<TextInstanceAnnotation>& annotations);

std::vector<TextInstanceAnnotation> parse_annotations(std::string_view content, AnnotationFormat format);
std::string write_annotations(const std::vector<TextInstanceAnnotation>& annotations, AnnotationFormat format);
std::string_view format_name(AnnotationFormat format);
AnnotationFormat parse_format_name(std::string_view name);

/// One polygon per line as comma-separated integers (coordinates rounded).
std::string write_polygons(const std::vector<Polygon>& polygons);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Binary PGM (P5), 0 = background, 255 = foreground. Any non-zero byte reads as foreground.
void write_pgm(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask read_pgm(const std::filesystem::path& path);
/// PGM bytes scaled to [0, 1].
Raster read_pgm_probability(const std::filesystem::path& path);

/// Header of two little-endian uint32 (width, height) followed by little-endian float32 values.
void write_float_raster(const std::filesystem::path& path, const Raster& raster);
void write_float_raster(const std::filesystem::path& path, const DistanceField& field);
Raster read_float_raster(const std::filesystem::path& path);

std::string encode_pgm(const BinaryMask& mask);
BinaryMask decode_pgm(std::string_view bytes);
std::string encode_float_raster(const Raster& raster);
Raster decode_float_raster(std::string_view bytes);

/// Dataset manifest: JSON with one entry per image (name, width, height, annotation
/// file relative to the manifest, format).
struct ManifestEntry {
    std::string name;
    int width = 0;
    int height = 0;
    std::string annotation;
    AnnotationFormat format = AnnotationFormat::ctw1500;
};

void write_dataset(const std::filesystem::path& dir, const std::vector<AnnotatedImage>& images);
std::vector<AnnotatedImage> read_dataset(const std::filesystem::path& manifest);

enum class SynthKind { squares, disks, convex, ribbons };

SynthKind parse_synth_kind(std::string_view name);
std::string_view synth_kind_name(SynthKind kind);

struct SynthOptions {
    std::uint64_t seed = 7;
    std::size_t count = 10;  // images
    SynthKind kind = SynthKind::ribbons;
    int size = 640;          // square image side
    std::size_t instances_per_image = 1;
    /// Place instances in pairs separated by a 2 px gap along one axis.
    bool adhesion_pairs = false;
};

/// Deterministic shapes with integer vertices: axis-aligned squares, regular 32-gons,
/// convex hulls of 8-16 random points, or 14-vertex curved ribbons. Every instance has
/// an inradius of at least 8 px and instances keep at least 2 px apart.
std::vector<AnnotatedImage> synth_dataset(const SynthOptions& options);

}  // namespace botd
