#include "gravattn/io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "gravattn/error.hpp"

namespace gravattn {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string scanpath_to_json(const ScanpathDocument& doc, int indent) {
    ordered_json j;
    j["image"] = doc.image;
    j["model"] = doc.model;
    j["config"] = doc.config_json.empty() ? ordered_json::object() : ordered_json::parse(doc.config_json);
    j["fixations"] = ordered_json::array();
    for (const auto& f : doc.scanpath.fixations) {
        j["fixations"].push_back({{"x", f.x}, {"y", f.y}, {"t_start", f.t_start}, {"t_end", f.t_end}});
    }
    return j.dump(indent);
}

ScanpathDocument scanpath_from_json(const std::string& text) {
    ScanpathDocument doc;
    try {
        const json j = json::parse(text);
        doc.image = j.at("image").get<std::string>();
        doc.model = j.at("model").get<std::string>();
        if (j.contains("config")) doc.config_json = j.at("config").dump();
        for (const auto& f : j.at("fixations")) {
            doc.scanpath.fixations.push_back({f.at("x").get<double>(), f.at("y").get<double>(),
                                              f.at("t_start").get<double>(), f.at("t_end").get<double>()});
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed scanpath JSON: ") + e.what());
    }
    return doc;
}

void write_scanpath_json(const std::filesystem::path& path, const ScanpathDocument& doc) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << scanpath_to_json(doc) << '\n';
}

ScanpathDocument read_scanpath_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open scanpath JSON '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scanpath_from_json(ss.str());
}

std::string trajectory_to_csv(const Trajectory& trajectory) {
    std::string out = "t,x,y,vx,vy\n";
    char line[160];
    for (const auto& s : trajectory.samples) {
        std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f,%.6f\n", s.t, s.state.position.x, s.state.position.y,
                      s.state.velocity.x, s.state.velocity.y);
        out += line;
    }
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << trajectory_to_csv(trajectory);
}

std::string report_to_json(const std::vector<EvalReport>& reports, int indent) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json j;
        j["dataset"] = r.dataset;
        j["model"] = r.model;
        j["mode"] = r.mode;
        auto summary = [](const MetricSummary& m) { return ordered_json{{"mean", m.mean}, {"std", m.stddev}}; };
        j["aggregate"] = {{"sed", summary(r.sed)}, {"tde", summary(r.tde)}, {"stde", summary(r.stde)}};
        j["per_image"] = ordered_json::array();
        for (const auto& row : r.per_image) {
            j["per_image"].push_back({{"image", row.image_id},
                                      {"sed", row.sed},
                                      {"tde", row.tde},
                                      {"stde", row.stde},
                                      {"subjects", row.subjects}});
        }
        j["skipped"] = r.skipped;
        j["config"] = r.config_snapshot.empty() ? ordered_json::object() : ordered_json::parse(r.config_snapshot);
        arr.push_back(std::move(j));
    }
    return arr.dump(indent);
}

std::string report_table(const std::vector<EvalReport>& reports) {
    auto cell = [](const MetricSummary& m) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(2) << m.mean << " (" << m.stddev << ")";
        return s.str();
    };
    std::vector<std::array<std::string, 5>> rows{{"Model", "Pre-attentive maps", "SED", "TDE", "STDE"}};
    for (const auto& r : reports) rows.push_back({r.model, r.mode, cell(r.sed), cell(r.tde), cell(r.stde)});
    std::array<std::size_t, 5> widths{};
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < 5; ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < 5; ++c) {
            out << std::left << std::setw(static_cast<int>(widths[c])) << rows[i][c] << (c + 1 < 5 ? "  " : "\n");
        }
        if (i == 0) {
            std::size_t total = 0;
            for (auto w : widths) total += w;
            out << std::string(total + 8, '-') << '\n';
        }
    }
    return out.str();
}

}  // namespace gravattn
