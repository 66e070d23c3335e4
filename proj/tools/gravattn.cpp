// gravattn: scanpath simulation, WTA baseline, evaluation, tuning and rendering.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gravattn/config.hpp"
#include "gravattn/error.hpp"
#include "gravattn/io.hpp"
#include "gravattn/pipeline.hpp"
#include "gravattn/render.hpp"
#include "gravattn/synthetic.hpp"

namespace ga = gravattn;

namespace {

// Every flag is optional so that only flags actually given override the
// config file, which itself overrides the built-in defaults.
struct Overrides {
    std::string config_file;
    std::optional<std::string> mode, model, output;
    std::optional<double> lambda, gain, time_scale, beta, ior_sigma, duration, dt, rtol, atol, ppd;
    std::optional<double> wta_radius, wta_duration, vel_threshold, min_duration;
    std::optional<std::size_t> num_fixations, sed_grid, tde_window, threads;
    std::optional<std::string> working_size;
    std::optional<std::vector<double>> init_pos;
    std::optional<std::vector<double>> alphas;
    bool no_ior = false;

    void attach(CLI::App& app) {
        app.add_option("-c,--config", config_file, "JSON run configuration")->check(CLI::ExistingFile);
        app.add_option("--mode", mode, "Pre-attentive maps: Basic or Itti");
        app.add_option("--model", model, "GRAV or WTA");
        app.add_option("-o,--output-dir", output, "Output directory");
        app.add_option("--lambda", lambda, "Damping (1/s)");
        app.add_option("--gain", gain, "Global mass gain");
        app.add_option("--alphas", alphas, "Per-feature gains")->delimiter(',');
        app.add_option("--beta", beta, "IOR rate per model time unit");
        app.add_option("--ior-sigma", ior_sigma, "IOR footprint sigma (px)");
        app.add_flag("--no-ior", no_ior, "Disable inhibition of return");
        app.add_option("--duration", duration, "Simulated time (s); default = exposure");
        app.add_option("--time-scale", time_scale, "Model time units per second (inhibition clock)");
        app.add_option("--dt", dt, "Trajectory sample interval (s)");
        app.add_option("--rtol", rtol, "Integrator relative tolerance");
        app.add_option("--atol", atol, "Integrator absolute tolerance");
        app.add_option("--init-pos", init_pos, "Initial gaze x,y in working pixels")->delimiter(',')->expected(2);
        app.add_option("--ppd", ppd, "Pixels per degree at the working resolution");
        app.add_option("--working-size", working_size, "Working raster WxH");
        app.add_option("--wta-radius", wta_radius, "WTA inhibition radius (px)");
        app.add_option("--num-fixations", num_fixations, "WTA fixation count");
        app.add_option("--fixation-duration", wta_duration, "WTA fixation duration (s)");
        app.add_option("--vel-threshold", vel_threshold, "Fixation velocity threshold (px/s)");
        app.add_option("--min-duration", min_duration, "Minimum fixation duration (s)");
        app.add_option("--sed-grid", sed_grid, "SED grid cells per side");
        app.add_option("--tde-window", tde_window, "TDE window length");
        app.add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
    }

    ga::RunConfig build() const {
        ga::RunConfig c = config_file.empty() ? ga::RunConfig{} : ga::load_run_config(config_file);
        if (mode) c.mode = ga::parse_feature_mode(*mode);
        if (model) c.model = ga::parse_model_kind(*model);
        if (output) c.output_dir = *output;
        if (lambda) c.lambda = *lambda;
        if (gain) c.gravity.global_gain = *gain;
        if (alphas) c.gravity.alphas = *alphas;
        if (beta) c.ior_beta = *beta;
        if (ior_sigma) c.ior_sigma = *ior_sigma;
        if (no_ior) c.ior_enabled = false;
        if (duration) c.duration = *duration;
        if (dt) c.sample_dt = *dt;
        if (time_scale) c.time_scale = *time_scale;
        if (rtol) c.rtol = *rtol;
        if (atol) c.atol = *atol;
        if (init_pos) c.init_pos = ga::Vec2{(*init_pos)[0], (*init_pos)[1]};
        if (ppd) c.pixels_per_degree = *ppd;
        if (working_size) c.working_size = parse_size(*working_size);
        if (wta_radius) c.wta_radius = *wta_radius;
        if (num_fixations) c.wta_num_fixations = *num_fixations;
        if (wta_duration) c.wta_fixation_duration = *wta_duration;
        if (vel_threshold) c.fixation.vel_threshold = *vel_threshold;
        if (min_duration) c.fixation.min_duration = *min_duration;
        if (sed_grid) c.metrics.sed_grid = *sed_grid;
        if (tde_window) c.metrics.tde_window = *tde_window;
        if (threads) c.threads = *threads;
        c.validate();
        return c;
    }

    static ga::Size parse_size(const std::string& text) {
        std::size_t w = 0, h = 0;
        char x = 0, extra = 0;
        if (std::sscanf(text.c_str(), "%zu%c%zu%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X')) {
            throw ga::ConfigError("working size must look like 224x224, got '" + text + "'");
        }
        return {w, h};
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Gravitational model of visual attention: scanpath simulation and evaluation"};
    app.require_subcommand(1);

    Overrides ov_sim, ov_base, ov_eval, ov_tune, ov_render;

    std::string sim_input;
    auto* sim = app.add_subcommand("simulate", "Simulate scanpaths for an image or a manifest");
    sim->add_option("input", sim_input, "Image file or manifest JSON")->required()->check(CLI::ExistingFile);
    ov_sim.attach(*sim);

    std::string base_input;
    auto* base = app.add_subcommand("baseline", "Winner-take-all scanpaths for an image or a manifest");
    base->add_option("input", base_input, "Image file or manifest JSON")->required()->check(CLI::ExistingFile);
    ov_base.attach(*base);

    std::string eval_manifest;
    auto* eval = app.add_subcommand("evaluate", "Score model scanpaths against human data (SED, TDE, STDE)");
    eval->add_option("manifest", eval_manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
    ov_eval.attach(*eval);

    std::string tune_manifest;
    std::vector<double> lambdas{10, 20, 40, 80, 160, 640};
    std::vector<double> gains{1e8, 1e9, 1e10, 1e11};
    auto* tune = app.add_subcommand("tune", "Grid search over damping and gain maximising NSS");
    tune->add_option("manifest", tune_manifest, "Validation manifest JSON")->required()->check(CLI::ExistingFile);
    tune->add_option("--lambdas", lambdas, "Candidate damping values")->delimiter(',');
    tune->add_option("--gains", gains, "Candidate global gains")->delimiter(',');
    ov_tune.attach(*tune);

    std::string render_image, render_scanpath, render_out;
    ga::RenderOptions ropt;
    auto* render = app.add_subcommand("render", "Draw a scanpath over its image; optional raster dumps");
    render->add_option("image", render_image, "Image file")->required()->check(CLI::ExistingFile);
    render->add_option("scanpath", render_scanpath, "Scanpath JSON")->required()->check(CLI::ExistingFile);
    render->add_option("--out", render_out, "Overlay PNG path (default <output-dir>/<scanpath stem>.png)");
    render->add_flag("--features", ropt.features, "Dump feature maps");
    render->add_flag("--mass", ropt.mass, "Dump the initial mass field");
    render->add_flag("--field", ropt.field, "Dump the initial field magnitude");
    render->add_flag("--ior", ropt.ior, "Dump inhibition snapshots of a GRAV run");
    render->add_option("--ior-interval", ropt.ior_interval, "Seconds between inhibition snapshots");
    ov_render.attach(*render);

    std::string synth_dir;
    ga::SyntheticCorpusOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Write a synthetic blob corpus with a manifest");
    synth->add_option("dir", synth_dir, "Destination directory")->required();
    synth->add_option("--images", synth_opt.images, "Number of images");
    synth->add_option("--subjects", synth_opt.subjects, "Synthetic observers per image");
    synth->add_option("--seed", synth_opt.seed, "Random seed");
    synth->add_option("--name", synth_opt.name, "Dataset name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (sim->parsed()) {
        for (const auto& p : ga::cmd_simulate(sim_input, ov_sim.build())) std::cout << p.string() << '\n';
    } else if (base->parsed()) {
        ga::RunConfig c = ov_base.build();
        c.model = ga::ModelKind::Wta;
        for (const auto& p : ga::cmd_simulate(base_input, c)) std::cout << p.string() << '\n';
    } else if (eval->parsed()) {
        const ga::EvalReport report = ga::cmd_evaluate(eval_manifest, ov_eval.build());
        std::cout << ga::report_table({report});
        if (!report.skipped.empty()) {
            std::cout << "skipped (no human data):";
            for (const auto& id : report.skipped) std::cout << ' ' << id;
            std::cout << '\n';
        }
    } else if (tune->parsed()) {
        const ga::TuneResult r = ga::cmd_tune(tune_manifest, ov_tune.build(), lambdas, gains);
        std::cout << ga::tune_table(r) << "best: lambda=" << r.best.lambda << " gain=" << r.best.global_gain
                  << " nss=" << r.best.nss << '\n';
    } else if (render->parsed()) {
        const ga::RunConfig c = ov_render.build();
        const std::filesystem::path out = render_out.empty()
                                              ? c.output_dir / (std::filesystem::path(render_scanpath).stem().string() + ".png")
                                              : std::filesystem::path(render_out);
        for (const auto& p : ga::cmd_render(render_image, render_scanpath, out, c, ropt).written) {
            std::cout << p.string() << '\n';
        }
    } else if (synth->parsed()) {
        std::cout << ga::write_synthetic_corpus(synth_dir, synth_opt).string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ga::ConfigError& e) {
        std::cerr << "error[config]: " << e.what() << '\n';
        return 1;
    } catch (const ga::NumericError& e) {
        std::cerr << "error[numeric]: " << e.what() << '\n';
        return 3;
    } catch (const ga::DataError& e) {
        std::cerr << "error[data]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error[data]: " << e.what() << '\n';
        return 2;
    }
}
