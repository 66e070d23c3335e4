#include "gravattn/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

#include "gravattn/error.hpp"

namespace gravattn {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw DataError("cannot open '" + path.string() + "'");
    return f;
}

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw DataError(std::string("libpng: ") + msg); }
void png_warn(png_structp, png_const_charp) {}

class PngWriter {
public:
    explicit PngWriter(const std::filesystem::path& path) : file_(open_file(path, "wb")) {
        png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
        if (!png_) throw DataError("png_create_write_struct failed");
        info_ = png_create_info_struct(png_);
        png_init_io(png_, file_.get());
    }
    ~PngWriter() { png_destroy_write_struct(&png_, &info_); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;

    void write(Size size, int bit_depth, int color_type, const PngText& text,
               const std::vector<png_bytep>& rows) {
        png_set_IHDR(png_, info_, static_cast<png_uint_32>(size.width), static_cast<png_uint_32>(size.height),
                     bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        std::vector<png_text> chunks(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
            chunks[i].key = const_cast<char*>(text[i].first.c_str());
            chunks[i].text = const_cast<char*>(text[i].second.c_str());
            chunks[i].text_length = text[i].second.size();
        }
        if (!chunks.empty()) png_set_text(png_, info_, chunks.data(), static_cast<int>(chunks.size()));
        png_write_info(png_, info_);
        if (bit_depth == 16) png_set_swap(png_);  // host little-endian -> PNG big-endian
        png_write_image(png_, const_cast<png_bytepp>(rows.data()));
        png_write_end(png_, nullptr);
    }

private:
    FilePtr file_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

}  // namespace

void write_png_gray16(const std::filesystem::path& path, const GrayMap& map, const PngText& text,
                      double lo, double hi) {
    if (map.empty()) throw ConfigError("write_png_gray16: empty map");
    if (lo == hi) {
        lo = map.min();
        hi = map.max();
    }
    const double span = hi > lo ? hi - lo : 1.0;
    std::vector<std::uint16_t> pixels(map.size().area());
    const auto vals = map.values();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const double t = std::clamp((vals[i] - lo) / span, 0.0, 1.0);
        pixels[i] = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    }
    std::vector<png_bytep> rows(map.height());
    for (std::size_t y = 0; y < map.height(); ++y) {
        rows[y] = reinterpret_cast<png_bytep>(&pixels[y * map.width()]);
    }
    PngWriter(path).write(map.size(), 16, PNG_COLOR_TYPE_GRAY, text, rows);
}

void write_png_rgb8(const std::filesystem::path& path, Size size, std::span<const std::uint8_t> rgb,
                    const PngText& text) {
    if (rgb.size() != size.area() * 3) throw ConfigError("write_png_rgb8: buffer size mismatch");
    std::vector<png_bytep> rows(size.height);
    for (std::size_t y = 0; y < size.height; ++y) {
        rows[y] = const_cast<png_bytep>(rgb.data() + y * size.width * 3);
    }
    PngWriter(path).write(size, 8, PNG_COLOR_TYPE_RGB, text, rows);
}

PngText read_png_text(const std::filesystem::path& path) {
    auto file = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    png_infop info = png_create_info_struct(png);
    PngText out;
    try {
        png_init_io(png, file.get());
        png_read_info(png, info);
        png_textp chunks = nullptr;
        int count = 0;
        png_get_text(png, info, &chunks, &count);
        for (int i = 0; i < count; ++i) {
            out.emplace_back(chunks[i].key, std::string(chunks[i].text, chunks[i].text_length));
        }
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

}  // namespace gravattn
