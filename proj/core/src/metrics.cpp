#include "gravattn/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gravattn/error.hpp"

namespace gravattn {

void MetricSettings::validate() const {
    if (sed_grid < 1) throw ConfigError("metrics.sed_grid must be at least 1");
    if (tde_window < 1) throw ConfigError("metrics.tde_window must be at least 1");
}

Symbols scanpath_to_string(const Scanpath& scanpath, Size size, std::size_t grid) {
    if (grid < 1) throw ConfigError("scanpath_to_string: grid size must be at least 1");
    const auto w = static_cast<double>(size.width), h = static_cast<double>(size.height);
    Symbols out;
    out.reserve(scanpath.size());
    for (std::size_t i = 0; i < scanpath.size(); ++i) {
        const Fixation& f = scanpath.fixations[i];
        if (!(f.x >= 0.0 && f.x < w && f.y >= 0.0 && f.y < h)) {
            throw DataError("scanpath_to_string: fixation " + std::to_string(i) + " at (" + std::to_string(f.x) +
                            ", " + std::to_string(f.y) + ") is outside the image");
        }
        const auto m = static_cast<double>(grid);
        const auto col = std::min(grid - 1, static_cast<std::size_t>(std::floor(f.x * m / w)));
        const auto row = std::min(grid - 1, static_cast<std::size_t>(std::floor(f.y * m / h)));
        out.push_back(static_cast<int>(row * grid + col));
    }
    return out;
}

double sed(const Scanpath& model, const Scanpath& human, Size size, std::size_t grid) {
    if (model.empty() || human.empty()) throw DataError("sed: empty scanpath");
    return static_cast<double>(
        string_edit_distance(scanpath_to_string(model, size, grid), scanpath_to_string(human, size, grid)));
}

double tde_directed(std::span<const Vec2> reference, std::span<const Vec2> candidate, std::size_t window) {
    if (window < 1) throw ConfigError("tde: window must be at least 1");
    if (reference.size() < window || candidate.size() < window) {
        throw DataError("tde: scanpath shorter than the window length " + std::to_string(window));
    }
    const std::size_t nr = reference.size() - window + 1;
    const std::size_t nc = candidate.size() - window + 1;
    double total = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nc; ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < window; ++k) d += distance(reference[i + k], candidate[j + k]);
            best = std::min(best, d / static_cast<double>(window));
        }
        total += best;
    }
    return total / static_cast<double>(nr);
}

namespace {

std::vector<Vec2> positions(const Scanpath& s, double sx = 1.0, double sy = 1.0) {
    std::vector<Vec2> out;
    out.reserve(s.size());
    for (const auto& f : s.fixations) out.push_back({f.x * sx, f.y * sy});
    return out;
}

double symmetric_tde(const std::vector<Vec2>& a, const std::vector<Vec2>& b, std::size_t window) {
    return 0.5 * (tde_directed(a, b, window) + tde_directed(b, a, window));
}

}  // namespace

double tde(const Scanpath& model, const Scanpath& human, std::size_t window) {
    return symmetric_tde(positions(model), positions(human), window);
}

double stde(const Scanpath& model, const Scanpath& human, Size size, std::size_t window) {
    const double sx = 1.0 / static_cast<double>(size.width);
    const double sy = 1.0 / static_cast<double>(size.height);
    return std::exp(-symmetric_tde(positions(model, sx, sy), positions(human, sx, sy), window));
}

double nss(const GrayMap& saliency, std::span<const Vec2> fixations) {
    if (fixations.empty()) throw DataError("nss: no fixations");
    const double mean = saliency.mean();
    double var = 0.0;
    for (double v : saliency.values()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(saliency.values().size());
    const double sd = std::sqrt(var);
    if (!(sd > 0.0) || !(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
        throw DataError("nss: saliency map has zero variance");
    }
    double total = 0.0;
    for (const Vec2& p : fixations) {
        const Vec2 q = clamp_to_retina(p, saliency.size());
        const auto x = static_cast<std::size_t>(std::lround(q.x));
        const auto y = static_cast<std::size_t>(std::lround(q.y));
        total += (saliency(x, y) - mean) / sd;
    }
    return total / static_cast<double>(fixations.size());
}

MetricSummary summarize(std::span<const double> values) {
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / n)};
}

void aggregate(EvalReport& report) {
    std::vector<double> s, t, st;
    for (const auto& row : report.per_image) {
        s.push_back(row.sed);
        t.push_back(row.tde);
        st.push_back(row.stde);
    }
    report.sed = summarize(s);
    report.tde = summarize(t);
    report.stde = summarize(st);
}

EvalRow score_against_subjects(const std::string& image_id, const Scanpath& model,
                               std::span<const Scanpath> humans, Size size, const MetricSettings& settings) {
    if (model.empty()) throw DataError("score: empty model scanpath for " + image_id);
    EvalRow row{image_id, 0.0, 0.0, 0.0, 0};
    for (const Scanpath& human : humans) {
        if (human.empty()) continue;
        const std::size_t window = std::min({settings.tde_window, model.size(), human.size()});
        row.sed += sed(model, human, size, settings.sed_grid);
        row.tde += tde(model, human, window);
        row.stde += stde(model, human, size, window);
        ++row.subjects;
    }
    if (row.subjects == 0) throw DataError("score: no usable human scanpaths for " + image_id);
    const auto n = static_cast<double>(row.subjects);
    row.sed /= n;
    row.tde /= n;
    row.stde /= n;
    return row;
}

}  // namespace gravattn
