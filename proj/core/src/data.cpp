#include "gravattn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gravattn/error.hpp"
#include "gravattn/imaging.hpp"

namespace gravattn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw DataError(where + ": missing field '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw DataError(where + ": field '" + std::string(key) + "' has the wrong type");
    }
}

}  // namespace

FixationTable parse_fixations_csv(const fs::path& path, Size native_size) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open fixation CSV '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError(path.string() + ": empty file, header required");
    ++line_no;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);  // UTF-8 BOM
    const std::vector<std::string> expected{"subject", "idx", "x", "y", "t_start", "t_end"};
    if (split_csv(line) != expected) {
        throw DataError(path.string() + ":1: header must be 'subject,idx,x,y,t_start,t_end'");
    }

    struct Row {
        long idx;
        Fixation fix;
    };
    std::map<std::string, std::vector<Row>> by_subject;
    FixationTable table;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cols = split_csv(line);
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (cols.size() != 6) throw DataError(where + ": expected 6 columns, got " + std::to_string(cols.size()));
        if (cols[0].empty()) throw DataError(where + ": empty subject");
        Row row{};
        if (!parse_number(cols[1], row.idx)) throw DataError(where + ": malformed idx '" + cols[1] + "'");
        double* targets[] = {&row.fix.x, &row.fix.y, &row.fix.t_start, &row.fix.t_end};
        for (std::size_t c = 0; c < 4; ++c) {
            if (!parse_number(cols[c + 2], *targets[c]) || !std::isfinite(*targets[c])) {
                throw DataError(where + ": malformed " + expected[c + 2] + " '" + cols[c + 2] + "'");
            }
        }
        if (row.fix.t_end < row.fix.t_start) throw DataError(where + ": t_end precedes t_start");
        const bool inside = row.fix.x >= 0.0 && row.fix.y >= 0.0 &&
                            row.fix.x < static_cast<double>(native_size.width) &&
                            row.fix.y < static_cast<double>(native_size.height);
        if (!inside) {
            ++table.dropped;
            continue;
        }
        by_subject[cols[0]].push_back(row);
    }
    for (auto& [subject, rows] : by_subject) {
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.idx < b.idx; });
        Scanpath sp;
        for (const Row& r : rows) sp.fixations.push_back(r.fix);
        table.subjects.push_back(subject);
        table.scanpaths.push_back(std::move(sp));
    }
    return table;
}

DatasetManifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }
    const std::string where = "manifest '" + path.string() + "'";
    if (!doc.is_object()) throw DataError(where + ": top level must be an object");

    DatasetManifest m;
    m.name = require<std::string>(doc, "name", where);
    m.pixels_per_degree = require<double>(doc, "pixels_per_degree", where);
    if (!(m.pixels_per_degree > 0.0)) throw DataError(where + ": pixels_per_degree must be positive");
    m.root = path.parent_path();
    if (doc.contains("root")) m.root = m.root / require<std::string>(doc, "root", where);
    if (!doc.contains("records") || !doc["records"].is_array()) throw DataError(where + ": 'records' must be an array");
    if (doc["records"].empty()) throw DataError(where + ": no records");

    std::set<std::string> seen;
    for (const auto& rec : doc["records"]) {
        if (!rec.is_object()) throw DataError(where + ": every record must be an object");
        StimulusRecord r;
        r.id = require<std::string>(rec, "id", where);
        const std::string rwhere = where + " record '" + r.id + "'";
        if (!seen.insert(r.id).second) throw DataError(where + ": duplicate record id '" + r.id + "'");
        r.image_path = m.root / require<std::string>(rec, "image", rwhere);
        r.fixations_path = m.root / require<std::string>(rec, "fixations_csv", rwhere);
        r.exposure = require<double>(rec, "exposure_s", rwhere);
        if (!(r.exposure > 0.0)) throw DataError(rwhere + ": exposure_s must be positive");
        if (rec.contains("category")) r.category = require<std::string>(rec, "category", rwhere);
        if (!fs::is_regular_file(r.image_path)) {
            throw DataError(rwhere + ": image file '" + r.image_path.string() + "' does not exist");
        }
        if (!fs::is_regular_file(r.fixations_path)) {
            throw DataError(rwhere + ": fixation file '" + r.fixations_path.string() + "' does not exist");
        }
        r.native_size = probe_image_size(r.image_path);
        FixationTable table = parse_fixations_csv(r.fixations_path, r.native_size);
        r.subjects = std::move(table.subjects);
        r.human_scanpaths = std::move(table.scanpaths);
        r.dropped_fixations = table.dropped;
        m.records.push_back(std::move(r));
    }
    return m;
}

Scanpath to_working_coords(const Scanpath& scanpath, Size native_size, Size working_size) {
    const double sx = static_cast<double>(working_size.width) / static_cast<double>(native_size.width);
    const double sy = static_cast<double>(working_size.height) / static_cast<double>(native_size.height);
    Scanpath out = scanpath;
    for (auto& f : out.fixations) {
        f.x *= sx;
        f.y *= sy;
    }
    return out;
}

std::vector<Scanpath> working_scanpaths(const StimulusRecord& record, Size working_size) {
    std::vector<Scanpath> out;
    out.reserve(record.human_scanpaths.size());
    for (const auto& s : record.human_scanpaths) out.push_back(to_working_coords(s, record.native_size, working_size));
    return out;
}

}  // namespace gravattn
