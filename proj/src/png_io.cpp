#include "livingglobe/country_atlas.hpp"
#include "livingglobe/errors.hpp"

#include <png.h>

#include <cstring>

namespace livingglobe {

namespace {

struct ReadCursor
{
    std::span<const std::uint8_t> bytes;
    std::size_t offset = 0;
};

[[noreturn]] void on_png_error(png_structp png, png_const_charp message)
{
    auto* slot = static_cast<std::string*>(png_get_error_ptr(png));
    if (slot)
        *slot = message;
    png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

void write_to_vector(png_structp png, png_bytep data, png_size_t length)
{
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

void read_from_span(png_structp png, png_bytep data, png_size_t length)
{
    auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cursor->offset + length > cursor->bytes.size())
        png_error(png, "unexpected end of PNG data");
    std::memcpy(data, cursor->bytes.data() + cursor->offset, length);
    cursor->offset += length;
}

} // namespace

std::vector<std::uint8_t> encode_png(const AtlasImage& image)
{
    if (image.width < 1 || image.height < 1 || (image.channels != 1 && image.channels != 4) ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * image.channels)
        throw ContractViolation("malformed image passed to encode_png");

    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error, on_png_warning);
    if (!png)
        throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info)
    {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(image.height);
    for (int y = 0; y < image.height; ++y)
        rows[y] = const_cast<png_bytep>(image.at(0, y));

    if (setjmp(png_jmpbuf(png)))
    {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + message);
    }
    png_set_write_fn(png, &out, write_to_vector, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

AtlasImage decode_png(std::span<const std::uint8_t> bytes, AtlasKind kind)
{
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw IoError("not a PNG file");

    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error, on_png_warning);
    if (!png)
        throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info)
    {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    ReadCursor cursor{bytes, 0};
    AtlasImage image;
    std::vector<png_bytep> rows;
    std::string shape_error;

    if (setjmp(png_jmpbuf(png)))
    {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed: " + message);
    }
    png_set_read_fn(png, &cursor, read_from_span);
    png_read_info(png, info);

    const auto width = png_get_image_width(png, info);
    const auto height = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    const int interlace = png_get_interlace_type(png, info);
    const int want = kind == AtlasKind::Lookup ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGBA;
    if (depth != 8 || color != want || interlace != PNG_INTERLACE_NONE || width == 0 || height == 0 ||
        width > (1u << 15) || height > (1u << 15))
    {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported PNG layout (need 8-bit " +
                      std::string(kind == AtlasKind::Lookup ? "greyscale" : "RGBA") + ", non-interlaced)");
    }

    image = AtlasImage::blank(kind, static_cast<int>(width), static_cast<int>(height));
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = image.at(0, static_cast<int>(y));
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

} // namespace livingglobe
