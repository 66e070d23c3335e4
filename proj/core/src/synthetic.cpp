#include "gravattn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"

#include "gravattn/error.hpp"
#include "gravattn/png_io.hpp"

namespace gravattn {

namespace fs = std::filesystem;

Frame make_blob_frame(Size size, const std::vector<Blob>& blobs, std::array<double, 3> background) {
    std::array<GrayMap, 3> planes{GrayMap(size, background[0]), GrayMap(size, background[1]),
                                  GrayMap(size, background[2])};
    for (const Blob& b : blobs) {
        const double inv = 1.0 / (2.0 * b.sigma * b.sigma);
        for (std::size_t y = 0; y < size.height; ++y) {
            for (std::size_t x = 0; x < size.width; ++x) {
                const double dx = static_cast<double>(x) - b.center.x;
                const double dy = static_cast<double>(y) - b.center.y;
                const double g = std::exp(-(dx * dx + dy * dy) * inv);
                for (std::size_t c = 0; c < 3; ++c) {
                    const double v = background[c] + (b.color[c] - background[c]) * g;
                    planes[c](x, y) = b.color[c] >= background[c] ? std::max(planes[c](x, y), v)
                                                                  : std::min(planes[c](x, y), v);
                }
            }
        }
    }
    return Frame(std::move(planes[0]), std::move(planes[1]), std::move(planes[2]));
}

namespace {

// Portable uniform draw from the raw 64-bit engine output.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}
    double operator()(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>((*this)(0.0, static_cast<double>(n)))); }

private:
    std::mt19937_64 engine_;
};

std::vector<Blob> random_blobs(Uniform& rng, Size size) {
    const std::size_t count = 2 + rng.index(2);
    const double w = static_cast<double>(size.width), h = static_cast<double>(size.height);
    const double min_sep = 0.3 * std::min(w, h);
    std::vector<Blob> blobs;
    while (blobs.size() < count) {
        Blob b;
        b.center = {rng(0.15 * w, 0.85 * w), rng(0.15 * h, 0.85 * h)};
        b.sigma = rng(0.025, 0.04) * std::min(w, h);
        bool ok = true;
        for (const Blob& o : blobs) ok = ok && distance(o.center, b.center) >= min_sep;
        if (!ok) continue;
        const std::size_t hue = rng.index(3);
        b.color = {0.25, 0.25, 0.25};
        b.color[hue] = rng(0.8, 1.0);
        blobs.push_back(b);
    }
    return blobs;
}

}  // namespace

fs::path write_synthetic_corpus(const fs::path& dir, const SyntheticCorpusOptions& opts) {
    if (opts.images == 0 || opts.subjects == 0) throw ConfigError("synthetic corpus needs images and subjects");
    fs::create_directories(dir);
    Uniform rng(opts.seed);
    nlohmann::json records = nlohmann::json::array();

    for (std::size_t i = 0; i < opts.images; ++i) {
        std::ostringstream id;
        id << "img" << std::setw(3) << std::setfill('0') << i;
        const auto blobs = random_blobs(rng, opts.native_size);
        const Frame frame = make_blob_frame(opts.native_size, blobs, {0.05, 0.05, 0.05});

        std::vector<std::uint8_t> rgb(opts.native_size.area() * 3);
        for (std::size_t p = 0; p < opts.native_size.area(); ++p) {
            for (std::size_t c = 0; c < 3; ++c) {
                rgb[p * 3 + c] = static_cast<std::uint8_t>(std::lround(frame.channel(c).values()[p] * 255.0));
            }
        }
        write_png_rgb8(dir / (id.str() + ".png"), opts.native_size, rgb);

        std::ofstream csv(dir / (id.str() + ".csv"));
        csv << "subject,idx,x,y,t_start,t_end\n" << std::fixed << std::setprecision(3);
        for (std::size_t s = 0; s < opts.subjects; ++s) {
            double t = rng(0.15, 0.25);
            std::size_t idx = 0;
            std::size_t target = rng.index(blobs.size());
            while (t < opts.exposure - 0.1) {
                const double dur = rng(0.2, 0.45);
                const Blob& b = blobs[target];
                const double x = std::clamp(b.center.x + rng(-4.0, 4.0), 0.0, static_cast<double>(opts.native_size.width) - 1);
                const double y = std::clamp(b.center.y + rng(-4.0, 4.0), 0.0, static_cast<double>(opts.native_size.height) - 1);
                csv << "s" << s << ',' << idx++ << ',' << x << ',' << y << ',' << t << ',' << std::min(t + dur, opts.exposure)
                    << '\n';
                t += dur + rng(0.03, 0.06);
                target = (target + 1 + rng.index(blobs.size() - 1)) % blobs.size();
            }
        }
        records.push_back({{"id", id.str()},
                           {"image", id.str() + ".png"},
                           {"fixations_csv", id.str() + ".csv"},
                           {"exposure_s", opts.exposure}});
    }
    const nlohmann::json manifest{{"name", opts.name},
                                  {"pixels_per_degree", opts.pixels_per_degree},
                                  {"records", records}};
    const fs::path path = dir / "manifest.json";
    std::ofstream(path) << manifest.dump(2) << '\n';
    return path;
}

}  // namespace gravattn
