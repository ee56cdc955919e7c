#pragma once

#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "imclust/errors.hpp"
#include "imclust/image.hpp"
#include "imclust/io.hpp"
#include "imclust/ppm.hpp"

// Codec-backed image loading. PPM is decoded by the bit-exact reader in
// ppm.hpp; PNG and JPEG go through libpng/libjpeg, which expand grayscale
// and paletted inputs to 8-bit RGB. Formats are detected by magic bytes,
// not extension.

namespace imclust {

namespace detail {

inline RgbImage image_from_rgb24(std::size_t width, std::size_t height,
                                 const unsigned char* data) {
    RgbImage image;
    image.width = static_cast<int>(width);
    image.height = static_cast<int>(height);
    image.pixels.reserve(width * height);
    for (std::size_t i = 0; i < width * height; ++i)
        image.pixels.push_back(Rgb{data[3 * i], data[3 * i + 1], data[3 * i + 2]});
    return image;
}

inline RgbImage decode_png_file(const std::filesystem::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str()))
        throw input_error("PNG decode failed: " + path.string() + ": " + png.message);
    png.format = PNG_FORMAT_RGB;
    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
        const std::string message = png.message;
        png_image_free(&png);
        throw input_error("PNG decode failed: " + path.string() + ": " + message);
    }
    return image_from_rgb24(png.width, png.height, buffer.data());
}

struct JpegErrorJump {
    jpeg_error_mgr pub;
    std::jmp_buf env;
    char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_to_jump(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorJump*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->env, 1);
}

inline RgbImage decode_jpeg_file(const std::filesystem::path& path) {
    std::FILE* file = std::fopen(path.string().c_str(), "rb");
    if (!file)
        throw input_error("cannot open file: " + path.string());

    jpeg_decompress_struct cinfo{};
    JpegErrorJump err{};
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_to_jump;

    RgbImage image;
    std::vector<unsigned char> row;
    // libjpeg reports errors via longjmp; everything it may interrupt lives
    // between setjmp and the matching destroy.
    if (setjmp(err.env)) {
        const std::string message = err.message;
        jpeg_destroy_decompress(&cinfo);
        std::fclose(file);
        throw input_error("JPEG decode failed: " + path.string() + ": " + message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    image.width = static_cast<int>(cinfo.output_width);
    image.height = static_cast<int>(cinfo.output_height);
    image.pixels.reserve(static_cast<std::size_t>(image.width) * image.height);
    row.resize(static_cast<std::size_t>(cinfo.output_width) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* rowp = row.data();
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        for (std::size_t x = 0; x < cinfo.output_width; ++x)
            image.pixels.push_back(Rgb{row[3 * x], row[3 * x + 1], row[3 * x + 2]});
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    std::fclose(file);
    return image;
}

}  // namespace detail

inline RgbImage load_image(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path))
        throw input_error("cannot open file: " + path.string());
    const std::string bytes = read_file_bytes(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6')) {
        try {
            return decode_ppm(bytes);
        } catch (const decode_error& e) {
            throw input_error(path.string() + ": " + e.what());
        }
    }
    if (bytes.size() >= 4 && static_cast<unsigned char>(bytes[0]) == 0x89 &&
        bytes.compare(1, 3, "PNG") == 0)
        return detail::decode_png_file(path);
    if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFF &&
        static_cast<unsigned char>(bytes[1]) == 0xD8)
        return detail::decode_jpeg_file(path);
    throw input_error("unsupported image format: " + path.string());
}

inline void write_png(const RgbImage& image, const std::filesystem::path& path) {
    require_valid(image);
    std::vector<unsigned char> buffer;
    buffer.reserve(image.pixels.size() * 3);
    for (const Rgb& px : image.pixels) {
        buffer.push_back(px.r);
        buffer.push_back(px.g);
        buffer.push_back(px.b);
    }
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, buffer.data(), 0, nullptr))
        throw input_error("PNG encode failed: " + path.string() + ": " + png.message);
}

inline void write_jpeg(const RgbImage& image, const std::filesystem::path& path,
                       int quality = 90) {
    require_valid(image);
    std::FILE* file = std::fopen(path.string().c_str(), "wb");
    if (!file)
        throw input_error("cannot open file for writing: " + path.string());

    jpeg_compress_struct cinfo{};
    detail::JpegErrorJump err{};
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = detail::jpeg_error_to_jump;

    std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 3);
    if (setjmp(err.env)) {
        const std::string message = err.message;
        jpeg_destroy_compress(&cinfo);
        std::fclose(file);
        throw input_error("JPEG encode failed: " + path.string() + ": " + message);
    }
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, file);
    cinfo.image_width = static_cast<JDIMENSION>(image.width);
    cinfo.image_height = static_cast<JDIMENSION>(image.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const Rgb& px = image.pixels[static_cast<std::size_t>(y) * image.width + x];
            row[3 * x] = px.r;
            row[3 * x + 1] = px.g;
            row[3 * x + 2] = px.b;
        }
        unsigned char* rowp = row.data();
        jpeg_write_scanlines(&cinfo, &rowp, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(file);
}

}  // namespace imclust
