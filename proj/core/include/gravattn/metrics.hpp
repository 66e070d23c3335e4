#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gravattn/imaging.hpp"
#include "gravattn/scanpath.hpp"

namespace gravattn {

using Symbols = std::vector<int>;

/// Label of each fixation's cell in an m x m grid over [0,w) x [0,h);
/// cells are half-open, labels are row * m + col. Repeats are kept.
Symbols scanpath_to_string(const Scanpath& scanpath, Size size, std::size_t grid);

/// Levenshtein distance with unit insert/delete/substitute costs.
template <typename Seq>
std::size_t string_edit_distance(const Seq& a, const Seq& b) {
    const std::size_t n = std::size(a), m = std::size(b);
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    auto ai = std::begin(a);
    for (std::size_t i = 1; i <= n; ++i, ++ai) {
        cur[0] = i;
        auto bj = std::begin(b);
        for (std::size_t j = 1; j <= m; ++j, ++bj) {
            const std::size_t sub = prev[j - 1] + (*ai == *bj ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

/// String-edit distance between the grid-quantised scanpaths.
double sed(const Scanpath& model, const Scanpath& human, Size size, std::size_t grid);

/// Directed time-delay embedding distance: for each length-`window` run of
/// `reference`, the smallest mean pointwise distance to any run of
/// `candidate`, averaged over the reference runs.
double tde_directed(std::span<const Vec2> reference, std::span<const Vec2> candidate, std::size_t window);

/// Symmetrised TDE: the mean of both directed distances (px).
double tde(const Scanpath& model, const Scanpath& human, std::size_t window);

/// exp(-TDE) on coordinates scaled to [0,1] per axis; 1 means identical.
double stde(const Scanpath& model, const Scanpath& human, Size size, std::size_t window);

/// Mean of the standardised map (population std) at the nearest pixels of
/// the given fixations.
double nss(const GrayMap& saliency, std::span<const Vec2> fixations);

struct MetricSettings {
    std::size_t sed_grid = 8;
    std::size_t tde_window = 3;

    void validate() const;
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

struct EvalRow {
    std::string image_id;
    double sed = 0.0;
    double tde = 0.0;
    double stde = 0.0;
    std::size_t subjects = 0;
};

struct EvalReport {
    std::string dataset;
    std::string model;
    std::string mode;
    std::vector<EvalRow> per_image;
    MetricSummary sed, tde, stde;
    std::vector<std::string> skipped;
    std::string config_snapshot;  // JSON text
};

MetricSummary summarize(std::span<const double> values);

/// Fills the aggregate fields from `per_image`.
void aggregate(EvalReport& report);

/// Scores one model scanpath against every human scanpath of an image and
/// averages per metric. The TDE window shrinks to the shortest scanpath
/// when either side has fewer fixations than requested.
EvalRow score_against_subjects(const std::string& image_id, const Scanpath& model,
                               std::span<const Scanpath> humans, Size size, const MetricSettings& settings);

}  // namespace gravattn
