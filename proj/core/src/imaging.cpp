#include "gravattn/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "gravattn/error.hpp"

namespace gravattn {

GrayMap::GrayMap(Size size, double fill) : size_(size), values_(size.area(), fill) {}

GrayMap::GrayMap(Size size, std::vector<double> values) : size_(size), values_(std::move(values)) {
    if (values_.size() != size_.area()) {
        throw ConfigError("GrayMap: value count " + std::to_string(values_.size()) +
                          " does not match " + std::to_string(size_.width) + "x" +
                          std::to_string(size_.height));
    }
}

double GrayMap::min() const { return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end()); }
double GrayMap::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }
double GrayMap::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }
double GrayMap::mean() const { return values_.empty() ? 0.0 : sum() / static_cast<double>(values_.size()); }

GrayMap VectorField::magnitude() const {
    GrayMap out(size_);
    auto dst = out.values();
    for (std::size_t i = 0; i < values_.size(); ++i) dst[i] = norm(values_[i]);
    return out;
}

Frame::Frame(GrayMap r, GrayMap g, GrayMap b) : channels_{std::move(r), std::move(g), std::move(b)} {
    const Size s = channels_[0].size();
    if (s.width == 0 || s.height == 0) throw ConfigError("Frame: empty raster");
    for (const auto& c : channels_) {
        if (c.size() != s) throw ConfigError("Frame: channel sizes differ");
        for (double v : c.values()) {
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw ConfigError("Frame: channel value " + std::to_string(v) + " outside [0,1]");
            }
        }
    }
}

Frame Frame::constant(Size size, double r, double g, double b) {
    return Frame(GrayMap(size, r), GrayMap(size, g), GrayMap(size, b));
}

GrayMap Frame::intensity() const {
    GrayMap out(size());
    auto dst = out.values();
    auto r = channels_[0].values();
    auto g = channels_[1].values();
    auto b = channels_[2].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (r[i] + g[i] + b[i]) / 3.0;
    return out;
}

namespace {

std::string read_error_context(const std::filesystem::path& path) {
    return "'" + path.string() + "'";
}

}  // namespace

Frame load_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw DataError("load_image: no such file " + read_error_context(path));
    }
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg" && ext != ".bmp") {
        throw DataError("load_image: unsupported format " + read_error_context(path));
    }

    std::ifstream in(path, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.empty()) throw DataError("load_image: empty file " + read_error_context(path));

    // OpenCV silently returns a partially decoded raster for some truncated
    // streams, so require the format trailer to be present as well.
    auto ends_with = [&](std::initializer_list<unsigned char> tail) {
        if (bytes.size() < tail.size()) return false;
        return std::equal(tail.begin(), tail.end(), bytes.end() - static_cast<std::ptrdiff_t>(tail.size()));
    };
    bool complete = true;
    if (ext == ".png") {
        complete = ends_with({0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82});  // IEND chunk
    } else if (ext == ".jpg" || ext == ".jpeg") {
        complete = ends_with({0xFF, 0xD9});
    }
    if (!complete) throw DataError("load_image: truncated or corrupt image " + read_error_context(path));

    cv::Mat raw = cv::imdecode(bytes, cv::IMREAD_ANYDEPTH | cv::IMREAD_COLOR);
    if (raw.empty()) throw DataError("load_image: corrupt image " + read_error_context(path));

    double scale = 1.0;
    switch (raw.depth()) {
        case CV_8U: scale = 1.0 / 255.0; break;
        case CV_16U: scale = 1.0 / 65535.0; break;
        default: throw DataError("load_image: unsupported bit depth in " + read_error_context(path));
    }
    cv::Mat img;
    raw.convertTo(img, CV_64FC3, scale);

    const Size size{static_cast<std::size_t>(img.cols), static_cast<std::size_t>(img.rows)};
    GrayMap r(size), g(size), b(size);
    for (int y = 0; y < img.rows; ++y) {
        const auto* row = img.ptr<cv::Vec3d>(y);
        for (int x = 0; x < img.cols; ++x) {
            // OpenCV stores BGR.
            const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
            b(ux, uy) = std::clamp(row[x][0], 0.0, 1.0);
            g(ux, uy) = std::clamp(row[x][1], 0.0, 1.0);
            r(ux, uy) = std::clamp(row[x][2], 0.0, 1.0);
        }
    }
    return Frame(std::move(r), std::move(g), std::move(b));
}

Size probe_image_size(const std::filesystem::path& path) {
    return load_image(path).size();
}

namespace {

struct Tap {
    std::size_t i0, i1;
    double w1;
};

// Pixel-centre aligned source coordinate for each destination index.
std::vector<Tap> bilinear_taps(std::size_t src, std::size_t dst) {
    std::vector<Tap> taps(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t i = 0; i < dst; ++i) {
        double s = (static_cast<double>(i) + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(src - 1));
        const auto i0 = static_cast<std::size_t>(std::floor(s));
        const std::size_t i1 = std::min(i0 + 1, src - 1);
        taps[i] = {i0, i1, s - static_cast<double>(i0)};
    }
    return taps;
}

}  // namespace

GrayMap resize_bilinear(const GrayMap& map, Size target) {
    if (target.width == 0 || target.height == 0) {
        throw ConfigError("resize_bilinear: degenerate target size");
    }
    if (map.empty()) throw ConfigError("resize_bilinear: empty input");
    if (target == map.size()) return map;

    const auto tx = bilinear_taps(map.width(), target.width);
    const auto ty = bilinear_taps(map.height(), target.height);
    GrayMap out(target);
    for (std::size_t y = 0; y < target.height; ++y) {
        const Tap& vy = ty[y];
        for (std::size_t x = 0; x < target.width; ++x) {
            const Tap& vx = tx[x];
            const double top = map(vx.i0, vy.i0) * (1.0 - vx.w1) + map(vx.i1, vy.i0) * vx.w1;
            const double bot = map(vx.i0, vy.i1) * (1.0 - vx.w1) + map(vx.i1, vy.i1) * vx.w1;
            out(x, y) = top * (1.0 - vy.w1) + bot * vy.w1;
        }
    }
    return out;
}

Frame resize_bilinear(const Frame& frame, Size target) {
    auto clamp01 = [](GrayMap m) {
        for (double& v : m.values()) v = std::clamp(v, 0.0, 1.0);
        return m;
    };
    return Frame(clamp01(resize_bilinear(frame.channel(0), target)),
                 clamp01(resize_bilinear(frame.channel(1), target)),
                 clamp01(resize_bilinear(frame.channel(2), target)));
}

VectorField spatial_gradient(const GrayMap& map) {
    const std::size_t w = map.width(), h = map.height();
    VectorField out(map.size());
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double dx = 0.0, dy = 0.0;
            if (w > 1) {
                if (x == 0) dx = map(1, y) - map(0, y);
                else if (x == w - 1) dx = map(w - 1, y) - map(w - 2, y);
                else dx = 0.5 * (map(x + 1, y) - map(x - 1, y));
            }
            if (h > 1) {
                if (y == 0) dy = map(x, 1) - map(x, 0);
                else if (y == h - 1) dy = map(x, h - 1) - map(x, h - 2);
                else dy = 0.5 * (map(x, y + 1) - map(x, y - 1));
            }
            out(x, y) = {dx, dy};
        }
    }
    return out;
}

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
    const auto period = static_cast<std::ptrdiff_t>(2 * n);
    std::ptrdiff_t m = i % period;
    if (m < 0) m += period;
    return static_cast<std::size_t>(m < static_cast<std::ptrdiff_t>(n) ? m : period - 1 - m);
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("gaussian_blur: sigma must be positive, got " + std::to_string(sigma));
    }
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        total += v;
    }
    for (double& v : k) v /= total;
    return k;
}

GrayMap gaussian_blur(const GrayMap& map, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const auto radius = static_cast<std::ptrdiff_t>(k.size() / 2);
    const std::size_t w = map.width(), h = map.height();

    GrayMap tmp(map.size());
    std::vector<double> line;
    for (std::size_t y = 0; y < h; ++y) {
        line.assign(w + 2 * static_cast<std::size_t>(radius), 0.0);
        for (std::ptrdiff_t i = -radius; i < static_cast<std::ptrdiff_t>(w) + radius; ++i) {
            line[static_cast<std::size_t>(i + radius)] = map(reflect_index(i, w), y);
        }
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k.size(); ++j) acc += k[j] * line[x + j];
            tmp(x, y) = acc;
        }
    }
    GrayMap out(map.size());
    for (std::size_t x = 0; x < w; ++x) {
        line.assign(h + 2 * static_cast<std::size_t>(radius), 0.0);
        for (std::ptrdiff_t i = -radius; i < static_cast<std::ptrdiff_t>(h) + radius; ++i) {
            line[static_cast<std::size_t>(i + radius)] = tmp(x, reflect_index(i, h));
        }
        for (std::size_t y = 0; y < h; ++y) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k.size(); ++j) acc += k[j] * line[y + j];
            out(x, y) = acc;
        }
    }
    return out;
}

GrayMap filter2d(const GrayMap& map, const GrayMap& kernel) {
    if (kernel.width() % 2 == 0 || kernel.height() % 2 == 0) {
        throw ConfigError("filter2d: kernel dimensions must be odd");
    }
    const std::size_t w = map.width(), h = map.height();
    const std::size_t rx = kernel.width() / 2, ry = kernel.height() / 2;
    const std::size_t pw = w + 2 * rx, ph = h + 2 * ry;

    std::vector<double> padded(pw * ph);
    for (std::size_t y = 0; y < ph; ++y) {
        const std::size_t sy = reflect_index(static_cast<std::ptrdiff_t>(y) - static_cast<std::ptrdiff_t>(ry), h);
        for (std::size_t x = 0; x < pw; ++x) {
            const std::size_t sx = reflect_index(static_cast<std::ptrdiff_t>(x) - static_cast<std::ptrdiff_t>(rx), w);
            padded[y * pw + x] = map(sx, sy);
        }
    }

    GrayMap out(map.size());
    const auto kv = kernel.values();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::size_t ky = 0; ky < kernel.height(); ++ky) {
                const double* src = &padded[(y + ky) * pw + x];
                const double* kr = &kv[ky * kernel.width()];
                for (std::size_t kx = 0; kx < kernel.width(); ++kx) acc += kr[kx] * src[kx];
            }
            out(x, y) = acc;
        }
    }
    return out;
}

std::vector<GrayMap> gaussian_pyramid(const GrayMap& map, std::size_t levels) {
    if (levels == 0) throw ConfigError("gaussian_pyramid: need at least one level");
    const std::size_t shrink = std::size_t{1} << (levels - 1);
    if (map.width() / shrink < 4 || map.height() / shrink < 4) {
        throw ConfigError("gaussian_pyramid: " + std::to_string(levels) + " levels too many for " +
                          std::to_string(map.width()) + "x" + std::to_string(map.height()));
    }
    std::vector<GrayMap> pyr;
    pyr.reserve(levels);
    pyr.push_back(map);
    for (std::size_t l = 1; l < levels; ++l) {
        const GrayMap blurred = gaussian_blur(pyr.back(), 1.0);
        const Size half{blurred.width() / 2, blurred.height() / 2};
        GrayMap next(half);
        for (std::size_t y = 0; y < half.height; ++y) {
            for (std::size_t x = 0; x < half.width; ++x) {
                next(x, y) = 0.25 * (blurred(2 * x, 2 * y) + blurred(2 * x + 1, 2 * y) +
                                     blurred(2 * x, 2 * y + 1) + blurred(2 * x + 1, 2 * y + 1));
            }
        }
        pyr.push_back(std::move(next));
    }
    return pyr;
}

}  // namespace gravattn
