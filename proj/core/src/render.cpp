#include "gravattn/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <opencv2/imgproc.hpp>

#include "gravattn/error.hpp"
#include "gravattn/gravity.hpp"
#include "gravattn/io.hpp"
#include "gravattn/png_io.hpp"
#include "gravattn/pipeline.hpp"

namespace gravattn {

namespace fs = std::filesystem;

Overlay draw_scanpath(const Frame& frame, const Scanpath& scanpath) {
    const Size size = frame.size();
    const auto& fx = scanpath.fixations;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        const bool inside = fx[i].x >= 0.0 && fx[i].y >= 0.0 && fx[i].x < static_cast<double>(size.width) &&
                            fx[i].y < static_cast<double>(size.height);
        if (!inside) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "fixation %zu at (%.2f, %.2f) lies outside the %zux%zu image", i, fx[i].x,
                          fx[i].y, size.width, size.height);
            throw DataError(msg);
        }
    }

    cv::Mat img(static_cast<int>(size.height), static_cast<int>(size.width), CV_8UC3);
    for (std::size_t y = 0; y < size.height; ++y) {
        auto* row = img.ptr<cv::Vec3b>(static_cast<int>(y));
        for (std::size_t x = 0; x < size.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                row[x][c] = static_cast<std::uint8_t>(std::lround(frame.channel(static_cast<std::size_t>(c))(x, y) * 255.0));
            }
        }
    }

    const int min_dim = static_cast<int>(std::min(size.width, size.height));
    const int radius = std::max(4, min_dim / 30);
    const int thickness = std::max(1, min_dim / 200);
    const double font = std::max(0.3, min_dim / 600.0);
    const cv::Scalar line_color(255, 255, 0);
    const cv::Scalar circle_color(255, 40, 40);
    const cv::Scalar text_color(255, 255, 255);
    auto at = [](const Fixation& f) { return cv::Point(static_cast<int>(std::lround(f.x)), static_cast<int>(std::lround(f.y))); };

    Overlay out;
    out.size = size;
    for (std::size_t i = 1; i < fx.size(); ++i) {
        cv::line(img, at(fx[i - 1]), at(fx[i]), line_color, thickness, cv::LINE_AA);
        ++out.segments;
    }
    for (std::size_t i = 0; i < fx.size(); ++i) {
        cv::circle(img, at(fx[i]), radius, circle_color, thickness + 1, cv::LINE_AA);
        const std::string label = std::to_string(i + 1);
        int baseline = 0;
        const cv::Size ts = cv::getTextSize(label, cv::FONT_HERSHEY_SIMPLEX, font, thickness, &baseline);
        cv::putText(img, label, at(fx[i]) + cv::Point(-ts.width / 2, ts.height / 2), cv::FONT_HERSHEY_SIMPLEX, font,
                    text_color, thickness, cv::LINE_AA);
        ++out.circles;
    }
    out.rgb.assign(img.data, img.data + img.total() * img.elemSize());
    return out;
}

namespace {

fs::path sibling(const fs::path& output, const std::string& suffix) {
    return output.parent_path() / (output.stem().string() + suffix + ".png");
}

}  // namespace

RenderResult cmd_render(const fs::path& image, const fs::path& scanpath_json, const fs::path& output,
                        const RunConfig& config, const RenderOptions& options) {
    config.validate();
    if (options.ior && !(options.ior_interval > 0.0)) throw ConfigError("ior interval must be positive");
    const ScanpathDocument doc = read_scanpath_json(scanpath_json);
    const Frame frame = load_image(image);
    const Overlay overlay = draw_scanpath(frame, doc.scanpath);

    double exposure = config.duration.value_or(kDefaultExposure);
    const RunConfig resolved = config.resolve(exposure);
    const std::string snapshot = to_json(resolved);
    const PngText text{{"gravattn:config", snapshot}, {"gravattn:image", doc.image}, {"gravattn:model", doc.model}};

    if (output.has_parent_path()) fs::create_directories(output.parent_path());
    RenderResult result;
    write_png_rgb8(output, overlay.size, overlay.rgb, text);
    result.written.push_back(output);
    result.circles = overlay.circles;
    result.segments = overlay.segments;

    if (!(options.features || options.mass || options.field || options.ior)) return result;

    const PreparedStimulus stim = prepare_stimulus(doc.image, frame, exposure, resolved);
    if (options.features) {
        for (std::size_t i = 0; i < stim.stack.size(); ++i) {
            const fs::path p = sibling(output, "_feature_" + stim.stack.labels()[i]);
            write_png_gray16(p, stim.stack.maps()[i], text);
            result.written.push_back(p);
        }
    }
    if (options.mass || options.field) {
        const MassField mass = mass_from_features(stim.stack, resolved.gravity, InhibitionMap(stim.frame.size()));
        if (options.mass) {
            const fs::path p = sibling(output, "_mass");
            write_png_gray16(p, mass.values(), text);
            result.written.push_back(p);
        }
        if (options.field) {
            const fs::path p = sibling(output, "_field");
            write_png_gray16(p, field_grid(mass).field.magnitude(), text);
            result.written.push_back(p);
        }
    }
    if (options.ior) {
        const IorParams ior = resolved.ior();
        const SimConfig sim = resolved.sim();
        const auto every = std::max<long long>(1, std::llround(options.ior_interval / sim.sample_dt));
        std::vector<std::pair<double, GrayMap>> shots;
        simulate(stim.frame, stim.stack, resolved.gravity, ior, sim, [&](const SimSnapshot& s) {
            if (s.index > 0 && static_cast<long long>(s.index) % every == 0) {
                shots.emplace_back(s.sample.t, s.inhibition.values());
            }
        });
        for (const auto& [t, map] : shots) {
            char suffix[32];
            std::snprintf(suffix, sizeof suffix, "_ior_%05lldms", std::llround(t * 1000.0));
            const fs::path p = sibling(output, suffix);
            write_png_gray16(p, map, text, 0.0, 1.0);
            result.written.push_back(p);
        }
    }
    return result;
}

}  // namespace gravattn
