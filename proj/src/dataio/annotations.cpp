#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "botd/dataio.hpp"

namespace botd {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Calls fn(line_number, line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view content, Fn fn)
{
    if (content.starts_with("\xEF\xBB\xBF"))
        content.remove_prefix(3);
    std::size_t number = 0;
    while (!content.empty()) {
        ++number;
        const auto end = content.find('\n');
        auto line = content.substr(0, end);
        content = end == std::string_view::npos ? std::string_view{} : content.substr(end + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (trim(line).empty())
            continue;
        fn(number, line);
    }
}

bool parse_number(std::string_view field, double& value)
{
    field = trim(field);
    if (field.starts_with('+'))
        field.remove_prefix(1);
    if (field.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc{} && ptr == field.data() + field.size() && std::isfinite(value);
}

std::string format_number(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void append_polygon(std::string& out, const Polygon& poly)
{
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        if (i)
            out += ',';
        out += format_number(poly.vertices[i].x);
        out += ',';
        out += format_number(poly.vertices[i].y);
    }
}

}  // namespace

std::vector<TextInstanceAnnotation> parse_icdar2015(std::string_view content)
{
    std::vector<TextInstanceAnnotation> out;
    for_each_line(content, [&](std::size_t number, std::string_view line) {
        const auto fields = split(line, ',');
        if (fields.size() < 8)
            throw ParseError(number, "expected 8 coordinates, found " + std::to_string(fields.size()));
        TextInstanceAnnotation ann;
        for (int i = 0; i < 4; ++i) {
            Point2 p;
            if (!parse_number(fields[2 * i], p.x) || !parse_number(fields[2 * i + 1], p.y))
                throw ParseError(number, "non-numeric coordinate");
            ann.polygon.vertices.push_back(p);
        }
        if (fields.size() > 8) {
            const auto offset = static_cast<std::size_t>(fields[8].data() - line.data());
            ann.transcription = std::string(line.substr(offset));
        }
        ann.care = ann.transcription != kDontCareMarker;
        out.push_back(std::move(ann));
    });
    return out;
}

std::string write_icdar2015(const std::vector<TextInstanceAnnotation>& annotations)
{
    std::string out;
    for (const auto& ann : annotations) {
        if (ann.polygon.vertices.size() != 4)
            throw InvalidArgument("ICDAR2015 annotations are quadrilaterals");
        append_polygon(out, ann.polygon);
        if (!ann.care)
            out += ",###";
        else if (ann.transcription)
            out += ',' + *ann.transcription;
        out += '\n';
    }
    return out;
}

CtwParseResult parse_ctw1500(std::string_view content)
{
    CtwParseResult result;
    for_each_line(content, [&](std::size_t number, std::string_view line) {
        const auto fields = split(line, ',');
        if (fields.size() < 6 || fields.size() % 2 != 0)
            throw ParseError(number, "coordinate count " + std::to_string(fields.size()) +
                                         " is not an even number of at least 6");
        TextInstanceAnnotation ann;
        for (std::size_t i = 0; i < fields.size(); i += 2) {
            Point2 p;
            if (!parse_number(fields[i], p.x) || !parse_number(fields[i + 1], p.y))
                throw ParseError(number, "non-numeric coordinate");
            ann.polygon.vertices.push_back(p);
        }
        if (fields.size() != 28)
            result.lenient_lines.push_back(number);
        result.annotations.push_back(std::move(ann));
    });
    return result;
}

std::string write_ctw1500(const std::vector<TextInstanceAnnotation>& annotations)
{
    std::string out;
    for (const auto& ann : annotations) {
        append_polygon(out, ann.polygon);
        out += '\n';
    }
    return out;
}

std::vector<TextInstanceAnnotation> parse_annotations(std::string_view content, AnnotationFormat format)
{
    return format == AnnotationFormat::icdar2015 ? parse_icdar2015(content) : parse_ctw1500(content).annotations;
}

std::string write_annotations(const std::vector<TextInstanceAnnotation>& annotations, AnnotationFormat format)
{
    return format == AnnotationFormat::icdar2015 ? write_icdar2015(annotations) : write_ctw1500(annotations);
}

std::string_view format_name(AnnotationFormat format)
{
    return format == AnnotationFormat::icdar2015 ? "icdar2015" : "ctw1500";
}

AnnotationFormat parse_format_name(std::string_view name)
{
    if (name == "icdar2015")
        return AnnotationFormat::icdar2015;
    if (name == "ctw1500")
        return AnnotationFormat::ctw1500;
    throw InvalidArgument("unknown annotation format: " + std::string(name));
}

std::string write_polygons(const std::vector<Polygon>& polygons)
{
    std::string out;
    for (const auto& poly : polygons) {
        for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
            if (i)
                out += ',';
            out += std::to_string(std::llround(poly.vertices[i].x));
            out += ',';
            out += std::to_string(std::llround(poly.vertices[i].y));
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError("write failed for " + path.string());
}

void write_dataset(const std::filesystem::path& dir, const std::vector<AnnotatedImage>& images)
{
    nlohmann::ordered_json manifest;
    manifest["images"] = nlohmann::ordered_json::array();
    for (const auto& image : images) {
        bool quads = !image.instances.empty();
        for (const auto& ann : image.instances)
            quads = quads && ann.polygon.vertices.size() == 4;
        const auto format = quads ? AnnotationFormat::icdar2015 : AnnotationFormat::ctw1500;
        const std::string file = image.name + ".txt";
        write_text_file(dir / file, write_annotations(image.instances, format));
        manifest["images"].push_back({{"name", image.name},
                                      {"width", image.width},
                                      {"height", image.height},
                                      {"annotation", file},
                                      {"format", format_name(format)}});
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<AnnotatedImage> read_dataset(const std::filesystem::path& manifest_path)
{
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_text_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, manifest_path.string() + ": " + e.what());
    }
    std::vector<AnnotatedImage> images;
    const auto base = manifest_path.parent_path();
    try {
        for (const auto& entry : manifest.at("images")) {
            AnnotatedImage image;
            image.name = entry.at("name").get<std::string>();
            image.width = entry.at("width").get<int>();
            image.height = entry.at("height").get<int>();
            if (image.width <= 0 || image.height <= 0)
                throw InvalidArgument("image " + image.name + " has non-positive size");
            const auto format = parse_format_name(entry.value("format", std::string("ctw1500")));
            image.instances = parse_annotations(read_text_file(base / entry.at("annotation").get<std::string>()), format);
            images.push_back(std::move(image));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, manifest_path.string() + ": " + e.what());
    }
    return images;
}

}  // namespace botd
