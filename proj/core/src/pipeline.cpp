#include "gravattn/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gravattn/error.hpp"
#include "gravattn/io.hpp"
#include "gravattn/ior.hpp"
#include "gravattn/parallel.hpp"
#include "gravattn/wta.hpp"

namespace gravattn {

namespace fs = std::filesystem;

PreparedStimulus prepare_stimulus(const std::string& id, const Frame& native, double exposure,
                                  const RunConfig& config) {
    PreparedStimulus s;
    s.id = id;
    s.native_size = native.size();
    s.exposure = exposure;
    s.frame = resize_bilinear(native, config.working_size);
    s.stack = compute_features(s.frame, config.mode);
    return s;
}

namespace {

// Accumulates mu(x, t_k) g(x - a_k) dt over the samples that belong to
// fixations, using the same velocity-threshold runs as extract_fixations.
// Samples inside saccades contribute nothing (vision is suppressed while
// the gaze moves fast), which keeps fast orbiting from scoring well.
class AttentionAccumulator {
public:
    AttentionAccumulator(Size size, double sigma, double dt, const FixationParams& fixation)
        : sigma_(sigma), dt_(dt), fixation_(fixation), attended_(size, 0.0), run_(size, 0.0), pending_(size, 0.0) {}

    void observe(const SimSnapshot& snap) {
        const Vec2 a = snap.sample.state.position;
        if (has_pending_) {
            const double dt = snap.sample.t - pending_t_;
            last_speed_ = distance(a, pending_pos_) / dt;
            classify(last_speed_);
        }
        const GrayMap g = inhibition_footprint(snap.mass.size(), a, sigma_);
        const auto mu = snap.mass.values().values();
        const auto gv = g.values();
        auto p = pending_.values();
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = mu[i] * gv[i];
        pending_pos_ = a;
        pending_t_ = snap.sample.t;
        has_pending_ = true;
    }

    GrayMap finish() {
        if (has_pending_) classify(last_speed_);
        close_run();
        return std::move(attended_);
    }

private:
    void classify(double speed) {
        if (speed < fixation_.vel_threshold) {
            if (!in_run_) {
                in_run_ = true;
                run_start_ = pending_t_;
            }
            run_end_ = pending_t_;
            auto r = run_.values();
            const auto p = pending_.values();
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += p[i] * dt_;
        } else {
            close_run();
        }
    }

    void close_run() {
        if (!in_run_) return;
        const double span = run_end_ - run_start_;
        auto r = run_.values();
        if (span > 0.0 && span >= fixation_.min_duration) {
            auto out = attended_.values();
            for (std::size_t i = 0; i < r.size(); ++i) out[i] += r[i];
        }
        std::fill(r.begin(), r.end(), 0.0);
        in_run_ = false;
    }

    double sigma_, dt_;
    FixationParams fixation_;
    GrayMap attended_, run_, pending_;
    bool has_pending_ = false, in_run_ = false;
    Vec2 pending_pos_{};
    double pending_t_ = 0.0, last_speed_ = 0.0;
    double run_start_ = 0.0, run_end_ = 0.0;
};

}  // namespace

ModelOutput run_model(const PreparedStimulus& stimulus, const RunConfig& config, bool accumulate_attention) {
    ModelOutput out;
    if (config.model == ModelKind::Wta) {
        WtaResult r = wta_scanpath(stimulus.stack, config.wta());
        out.scanpath = std::move(r.scanpath);
        out.wta_fallbacks = r.fallback_count;
        return out;
    }

    const IorParams ior = config.ior();
    const SimConfig sim = config.sim();
    std::optional<AttentionAccumulator> acc;
    SimObserver observer;
    if (accumulate_attention) {
        acc.emplace(stimulus.frame.size(), ior.sigma, sim.sample_dt, config.fixation);
        observer = [&](const SimSnapshot& snap) { acc->observe(snap); };
    }
    out.trajectory = simulate(stimulus.frame, stimulus.stack, config.gravity, ior, sim, observer);
    if (acc) out.attended = acc->finish();
    out.scanpath = extract_fixations(out.trajectory, config.fixation.vel_threshold, config.fixation.min_duration);
    if (out.scanpath.fixations.empty() && !out.trajectory.samples.empty()) {
        const auto& last = out.trajectory.samples.back();
        out.scanpath.fixations.push_back(
            {last.state.position.x, last.state.position.y, out.trajectory.samples.front().t, last.t});
        out.fixation_fallback = true;
    }
    return out;
}

Scanpath to_native_coords(const Scanpath& scanpath, Size working_size, Size native_size) {
    return to_working_coords(scanpath, working_size, native_size);
}

namespace {

bool is_manifest(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".json";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
}

struct Job {
    std::string id;
    fs::path image;
    double exposure;
    std::optional<double> ppd;
};

}  // namespace

std::vector<fs::path> cmd_simulate(const fs::path& input, const RunConfig& config) {
    config.validate();
    std::vector<Job> jobs;
    if (is_manifest(input)) {
        const DatasetManifest m = load_manifest(input);
        for (const auto& r : m.records) jobs.push_back({r.id, r.image_path, r.exposure, m.pixels_per_degree});
    } else {
        jobs.push_back({input.stem().string(), input, config.duration.value_or(kDefaultExposure), std::nullopt});
    }
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + config.output_dir.string() + "'");

    std::vector<std::vector<fs::path>> written(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        const RunConfig resolved = config.resolve(job.exposure, job.ppd);
        const PreparedStimulus stim = prepare_stimulus(job.id, load_image(job.image), job.exposure, resolved);
        const ModelOutput out = run_model(stim, resolved);

        ScanpathDocument doc;
        doc.image = job.id;
        doc.model = to_string(resolved.model);
        doc.config_json = to_json(resolved);
        doc.scanpath = to_native_coords(out.scanpath, resolved.working_size, stim.native_size);
        const fs::path json_path = config.output_dir / (job.id + ".json");
        write_text(json_path, scanpath_to_json(doc) + "\n");
        written[i].push_back(json_path);
        if (resolved.model == ModelKind::Grav) {
            const fs::path csv_path = config.output_dir / (job.id + "_trajectory.csv");
            write_text(csv_path, trajectory_to_csv(out.trajectory));
            written[i].push_back(csv_path);
        }
    });
    std::vector<fs::path> all;
    for (auto& w : written) all.insert(all.end(), w.begin(), w.end());
    return all;
}

EvalReport evaluate_manifest(const DatasetManifest& manifest, const RunConfig& config) {
    config.validate();
    if (manifest.records.empty()) throw DataError("manifest '" + manifest.name + "' has no records");

    EvalReport report;
    report.dataset = manifest.name;
    report.model = to_string(config.model);
    report.mode = to_string(config.mode);
    report.config_snapshot = to_json(config);

    std::vector<const StimulusRecord*> usable;
    for (const auto& r : manifest.records) {
        const bool has_data = std::any_of(r.human_scanpaths.begin(), r.human_scanpaths.end(),
                                          [](const Scanpath& s) { return !s.fixations.empty(); });
        if (has_data) {
            usable.push_back(&r);
        } else {
            report.skipped.push_back(r.id);
        }
    }

    std::vector<EvalRow> rows(usable.size());
    parallel_for(usable.size(), config.threads, [&](std::size_t i) {
        const StimulusRecord& r = *usable[i];
        const RunConfig resolved = config.resolve(r.exposure, manifest.pixels_per_degree);
        const PreparedStimulus stim = prepare_stimulus(r.id, load_image(r.image_path), r.exposure, resolved);
        const ModelOutput out = run_model(stim, resolved);
        const std::vector<Scanpath> humans = working_scanpaths(r, resolved.working_size);
        rows[i] = score_against_subjects(r.id, out.scanpath, humans, resolved.working_size, resolved.metrics);
    });
    std::sort(rows.begin(), rows.end(), [](const EvalRow& a, const EvalRow& b) { return a.image_id < b.image_id; });
    std::sort(report.skipped.begin(), report.skipped.end());
    report.per_image = std::move(rows);
    aggregate(report);
    return report;
}

EvalReport cmd_evaluate(const fs::path& manifest_path, const RunConfig& config, bool write_files) {
    config.validate();
    const DatasetManifest manifest = load_manifest(manifest_path);
    EvalReport report = evaluate_manifest(manifest, config);
    if (write_files) {
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        if (ec) throw DataError("cannot create output directory '" + config.output_dir.string() + "'");
        const std::string stem = "report_" + report.model + "_" + report.mode;
        write_text(config.output_dir / (stem + ".json"), report_to_json({report}) + "\n");
        write_text(config.output_dir / (stem + ".txt"), report_table({report}));
    }
    return report;
}

TuneCandidate select_best(const std::vector<TuneCandidate>& table) {
    if (table.empty()) throw ConfigError("tuning grid is empty");
    TuneCandidate best = table.front();
    for (const auto& c : table) {
        const bool better = c.nss > best.nss ||
                            (c.nss == best.nss && (c.lambda < best.lambda ||
                                                   (c.lambda == best.lambda && c.global_gain < best.global_gain)));
        if (better) best = c;
    }
    return best;
}

TuneResult tune_manifest(const DatasetManifest& manifest, const RunConfig& config, const std::vector<double>& lambdas,
                         const std::vector<double>& gains) {
    if (lambdas.empty() || gains.empty()) throw ConfigError("tuning grid is empty");
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("tuning lambdas must be positive and finite");
    }
    for (double g : gains) {
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("tuning gains must be positive and finite");
    }
    RunConfig base = config;
    base.model = ModelKind::Grav;
    base.validate();

    struct Item {
        const StimulusRecord* record;
        RunConfig resolved;
        std::vector<Vec2> fixations;
        PreparedStimulus stim;
    };
    std::vector<Item> items;
    for (const auto& r : manifest.records) {
        Item item{&r, base.resolve(r.exposure, manifest.pixels_per_degree), {}, {}};
        for (const auto& s : working_scanpaths(r, item.resolved.working_size)) {
            for (const auto& f : s.fixations) item.fixations.push_back(f.position());
        }
        if (!item.fixations.empty()) items.push_back(std::move(item));
    }
    if (items.empty()) throw DataError("manifest '" + manifest.name + "' has no human fixations to tune against");
    // Features do not depend on lambda or gain; compute them once.
    parallel_for(items.size(), base.threads, [&](std::size_t i) {
        const StimulusRecord& r = *items[i].record;
        items[i].stim = prepare_stimulus(r.id, load_image(r.image_path), r.exposure, items[i].resolved);
    });

    TuneResult result;
    for (double l : lambdas) {
        for (double g : gains) result.table.push_back({l, g, 0.0});
    }
    const std::size_t n_img = items.size();
    std::vector<double> scores(result.table.size() * n_img, 0.0);
    parallel_for(scores.size(), base.threads, [&](std::size_t k) {
        const TuneCandidate& c = result.table[k / n_img];
        const Item& item = items[k % n_img];
        RunConfig cfg = item.resolved;
        cfg.lambda = c.lambda;
        cfg.gravity.global_gain = c.global_gain;
        const ModelOutput out = run_model(item.stim, cfg, true);
        scores[k] = out.attended.max() > out.attended.min() ? nss(out.attended, item.fixations) : 0.0;
    });
    for (std::size_t c = 0; c < result.table.size(); ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_img; ++i) sum += scores[c * n_img + i];
        result.table[c].nss = sum / static_cast<double>(n_img);
    }
    result.best = select_best(result.table);
    return result;
}

TuneResult cmd_tune(const fs::path& manifest, const RunConfig& config, const std::vector<double>& lambdas,
                    const std::vector<double>& gains) {
    if (lambdas.empty() || gains.empty()) throw ConfigError("tuning grid is empty");
    return tune_manifest(load_manifest(manifest), config, lambdas, gains);
}

std::string tune_table(const TuneResult& result) {
    std::string out = "lambda      gain        NSS\n";
    char line[96];
    for (const auto& c : result.table) {
        const bool best = c.lambda == result.best.lambda && c.global_gain == result.best.global_gain;
        std::snprintf(line, sizeof line, "%-11.6g %-11.6g %.4f%s\n", c.lambda, c.global_gain, c.nss, best ? "  *" : "");
        out += line;
    }
    return out;
}

}  // namespace gravattn
