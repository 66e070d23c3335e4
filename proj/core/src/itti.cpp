// Center-surround saliency in the style of Itti, Koch & Niebur (1998).
#include <algorithm>
#include <array>
#include <cmath>

#include "gravattn/error.hpp"
#include "gravattn/features.hpp"

namespace gravattn {

namespace {

constexpr std::size_t kLevels = 9;
constexpr std::size_t kConspicuityLevel = 4;
constexpr std::array<std::size_t, 3> kCenters{2, 3, 4};
constexpr std::array<std::size_t, 2> kDeltas{3, 4};
// Smallest pyramid level must stay >= 4 px, so the base needs 4 * 2^8 px.
constexpr std::size_t kMinBase = 4 << (kLevels - 1);
constexpr double kFlatThreshold = 1e-10;

using Pyramid = std::vector<GrayMap>;

GrayMap abs_diff_across_scale(const GrayMap& center, const GrayMap& surround) {
    const GrayMap up = resize_bilinear(surround, center.size());
    GrayMap out(center.size());
    auto c = center.values();
    auto s = up.values();
    auto d = out.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(c[i] - s[i]);
    return out;
}

GrayMap difference(const GrayMap& a, const GrayMap& b) {
    GrayMap out(a.size());
    auto va = a.values();
    auto vb = b.values();
    auto d = out.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = va[i] - vb[i];
    return out;
}

void accumulate_into(GrayMap& acc, const GrayMap& map) {
    const GrayMap resized = resize_bilinear(map, acc.size());
    auto d = acc.values();
    auto s = resized.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

// Across-scale sum of normalised center-surround maps for one channel
// pair: |A(c) - B(s)| where B is interpolated to the centre scale.
GrayMap opponent_conspicuity(const Pyramid& center_a, const Pyramid& center_b, Size target) {
    GrayMap acc(target);
    for (std::size_t c : kCenters) {
        const GrayMap center = difference(center_a[c], center_b[c]);
        for (std::size_t d : kDeltas) {
            const GrayMap surround = difference(center_b[c + d], center_a[c + d]);
            accumulate_into(acc, itti_normalize(abs_diff_across_scale(center, surround)));
        }
    }
    return acc;
}

GrayMap channel_conspicuity(const Pyramid& pyr, Size target) {
    GrayMap acc(target);
    for (std::size_t c : kCenters) {
        for (std::size_t d : kDeltas) {
            accumulate_into(acc, itti_normalize(abs_diff_across_scale(pyr[c], pyr[c + d])));
        }
    }
    return acc;
}

}  // namespace

GrayMap itti_normalize(const GrayMap& map) {
    const double peak = map.max();
    GrayMap out(map.size());
    if (!(peak > kFlatThreshold)) return out;

    auto src = map.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(src[i], 0.0) / peak;

    const std::size_t w = out.width(), h = out.height();
    double local_sum = 0.0;
    std::size_t local_count = 0;
    bool skipped_global = false;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double v = out(x, y);
            if (v < 0.1) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
                    const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
                    if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) ||
                        ny >= static_cast<std::ptrdiff_t>(h)) {
                        continue;
                    }
                    if (out(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) continue;
            if (!skipped_global && v >= 1.0) {
                skipped_global = true;
                continue;
            }
            local_sum += v;
            ++local_count;
        }
    }
    const double mean_local = local_count > 0 ? local_sum / static_cast<double>(local_count) : 0.0;
    const double weight = (1.0 - mean_local) * (1.0 - mean_local);
    for (double& v : dst) v *= weight;
    return out;
}

FeatureStack itti_saliency(const Frame& frame) {
    const Size working = frame.size();
    const double scale = std::max({1.0, static_cast<double>(kMinBase) / static_cast<double>(working.width),
                                   static_cast<double>(kMinBase) / static_cast<double>(working.height)});
    auto scaled = [scale](std::size_t n) {
        return std::max(kMinBase, static_cast<std::size_t>(std::lround(static_cast<double>(n) * scale)));
    };
    const Size base{scaled(working.width), scaled(working.height)};

    const GrayMap r = resize_bilinear(frame.channel(0), base);
    const GrayMap g = resize_bilinear(frame.channel(1), base);
    const GrayMap b = resize_bilinear(frame.channel(2), base);

    GrayMap intensity(base);
    for (std::size_t i = 0; i < intensity.values().size(); ++i) {
        intensity.values()[i] = (r.values()[i] + g.values()[i] + b.values()[i]) / 3.0;
    }

    // Broadly tuned colour channels; hue is undefined where the intensity is
    // below a tenth of its maximum.
    const double i_max = intensity.max();
    GrayMap red(base), green(base), blue(base), yellow(base);
    for (std::size_t i = 0; i < intensity.values().size(); ++i) {
        const double in = intensity.values()[i];
        if (!(in > 0.1 * i_max) || !(in > 0.0)) continue;
        const double rn = r.values()[i] / in, gn = g.values()[i] / in, bn = b.values()[i] / in;
        red.values()[i] = std::max(0.0, rn - (gn + bn) / 2.0);
        green.values()[i] = std::max(0.0, gn - (rn + bn) / 2.0);
        blue.values()[i] = std::max(0.0, bn - (rn + gn) / 2.0);
        yellow.values()[i] = std::max(0.0, (rn + gn) / 2.0 - std::abs(rn - gn) / 2.0 - bn);
    }

    const Pyramid p_int = gaussian_pyramid(intensity, kLevels);
    const Pyramid p_r = gaussian_pyramid(red, kLevels);
    const Pyramid p_g = gaussian_pyramid(green, kLevels);
    const Pyramid p_b = gaussian_pyramid(blue, kLevels);
    const Pyramid p_y = gaussian_pyramid(yellow, kLevels);

    const Size consp_size = p_int[kConspicuityLevel].size();

    const GrayMap cons_intensity = channel_conspicuity(p_int, consp_size);

    GrayMap cons_color = opponent_conspicuity(p_r, p_g, consp_size);
    accumulate_into(cons_color, opponent_conspicuity(p_b, p_y, consp_size));

    GrayMap cons_orient(consp_size);
    for (double angle : {0.0, 45.0, 90.0, 135.0}) {
        const GrayMap kernel = gabor_kernel(angle);
        Pyramid p_o(kLevels);
        for (std::size_t l = kCenters.front(); l < kLevels; ++l) {
            p_o[l] = filter2d(p_int[l], kernel);
            for (double& v : p_o[l].values()) v = std::abs(v);
        }
        accumulate_into(cons_orient, itti_normalize(channel_conspicuity(p_o, consp_size)));
    }

    GrayMap saliency(consp_size);
    for (const GrayMap* m : std::initializer_list<const GrayMap*>{&cons_intensity, &cons_color, &cons_orient}) {
        const GrayMap n = itti_normalize(*m);
        for (std::size_t i = 0; i < saliency.values().size(); ++i) saliency.values()[i] += n.values()[i] / 3.0;
    }

    GrayMap out = resize_bilinear(saliency, working);
    for (double& v : out.values()) v = std::max(v, 0.0);
    const double peak = out.max();
    if (peak > kFlatThreshold) {
        for (double& v : out.values()) v /= peak;
    } else {
        std::fill(out.values().begin(), out.values().end(), 0.0);
    }
    return FeatureStack(FeatureMode::Itti, {std::move(out)}, {"saliency"});
}

}  // namespace gravattn
