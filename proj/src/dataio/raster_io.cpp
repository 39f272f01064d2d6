#include <bit>
#include <cctype>
#include <cstring>

#include "botd/dataio.hpp"

namespace botd {

namespace {

void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out += static_cast<char>((v >> (8 * i)) & 0xFFu);
}

std::uint32_t get_u32(std::string_view bytes, std::size_t at)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
    return v;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string_view next_token(std::string_view bytes, std::size_t& pos)
{
    for (;;) {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])))
            ++pos;
        if (pos < bytes.size() && bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n')
                ++pos;
            continue;
        }
        break;
    }
    const auto start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])))
        ++pos;
    return bytes.substr(start, pos - start);
}

int header_int(std::string_view bytes, std::size_t& pos)
{
    const auto token = next_token(bytes, pos);
    int v = 0;
    for (char c : token) {
        if (!std::isdigit(static_cast<unsigned char>(c)) || v > 1'000'000)
            throw ParseError(1, "malformed PGM header");
        v = v * 10 + (c - '0');
    }
    if (token.empty())
        throw ParseError(1, "malformed PGM header");
    return v;
}

struct PgmData {
    int width, height, maxval;
    std::string_view pixels;
};

PgmData parse_pgm(std::string_view bytes)
{
    std::size_t pos = 0;
    if (next_token(bytes, pos) != "P5")
        throw ParseError(1, "not a binary PGM (P5)");
    const int width = header_int(bytes, pos);
    const int height = header_int(bytes, pos);
    const int maxval = header_int(bytes, pos);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
        throw ParseError(1, "unsupported PGM dimensions or maxval");
    ++pos;  // single whitespace before the raster
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < pos + n)
        throw ParseError(1, "truncated PGM raster");
    return {width, height, maxval, bytes.substr(pos, n)};
}

template <typename T>
std::string encode_float_values(int width, int height, std::span<const T> values)
{
    std::string out;
    out.reserve(8 + 4 * values.size());
    put_u32(out, static_cast<std::uint32_t>(width));
    put_u32(out, static_cast<std::uint32_t>(height));
    for (const auto v : values)
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

}  // namespace

std::string encode_pgm(const BinaryMask& mask)
{
    std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
    out.reserve(out.size() + mask.size());
    for (const auto v : mask.values())
        out += static_cast<char>(v ? 255 : 0);
    return out;
}

BinaryMask decode_pgm(std::string_view bytes)
{
    const auto pgm = parse_pgm(bytes);
    BinaryMask mask(pgm.width, pgm.height);
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = pgm.pixels[i] != 0;
    return mask;
}

std::string encode_float_raster(const Raster& raster)
{
    return encode_float_values(raster.width(), raster.height(), raster.values());
}

Raster decode_float_raster(std::string_view bytes)
{
    if (bytes.size() < 8)
        throw ParseError(1, "float raster header truncated");
    const auto width = get_u32(bytes, 0);
    const auto height = get_u32(bytes, 4);
    if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20))
        throw ParseError(1, "float raster has invalid dimensions");
    const auto n = static_cast<std::size_t>(width) * height;
    if (bytes.size() != 8 + 4 * n)
        throw ParseError(1, "float raster size does not match header");
    Raster raster(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < n; ++i)
        raster[i] = std::bit_cast<float>(get_u32(bytes, 8 + 4 * i));
    return raster;
}

void write_pgm(const std::filesystem::path& path, const BinaryMask& mask)
{
    write_text_file(path, encode_pgm(mask));
}

BinaryMask read_pgm(const std::filesystem::path& path)
{
    return decode_pgm(read_text_file(path));
}

Raster read_pgm_probability(const std::filesystem::path& path)
{
    const auto bytes = read_text_file(path);
    const auto pgm = parse_pgm(bytes);
    Raster raster(pgm.width, pgm.height);
    for (std::size_t i = 0; i < raster.size(); ++i)
        raster[i] = static_cast<float>(static_cast<unsigned char>(pgm.pixels[i])) / static_cast<float>(pgm.maxval);
    return raster;
}

void write_float_raster(const std::filesystem::path& path, const Raster& raster)
{
    write_text_file(path, encode_float_raster(raster));
}

void write_float_raster(const std::filesystem::path& path, const DistanceField& field)
{
    write_text_file(path, encode_float_values(field.width(), field.height(), field.values()));
}

Raster read_float_raster(const std::filesystem::path& path)
{
    return decode_float_raster(read_text_file(path));
}

}  // namespace botd
