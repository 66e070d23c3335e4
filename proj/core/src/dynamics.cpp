#include "gravattn/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gravattn/error.hpp"

namespace gravattn {

void SimConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("sim.lambda must be positive");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("sim.duration must be positive");
    if (!(sample_dt > 0.0) || sample_dt > duration) {
        throw ConfigError("sim.sample_dt must satisfy 0 < sample_dt <= duration");
    }
    if (!(time_scale > 0.0) || !std::isfinite(time_scale)) throw ConfigError("sim.time_scale must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("sim tolerances must be positive");
    if (!std::isfinite(init_vel.x) || !std::isfinite(init_vel.y)) throw ConfigError("sim.init_vel must be finite");
}

std::size_t SimConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration / sample_dt)) + 1;
}

Vec2 accel(const GazeState& state, const Vec2& field, double lambda) {
    return field - state.velocity * lambda;
}

namespace {

using State = std::array<double, 4>;  // ax, ay, vx, vy

// Dormand-Prince 5(4) tableau. The system is autonomous, so the stage
// abscissae are not needed.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename FieldFn>
class GazeIntegrator {
public:
    GazeIntegrator(double lambda, double rtol, double atol, Size retina, FieldFn field)
        : lambda_(lambda), rtol_(rtol), atol_(atol), retina_(retina), field_(std::move(field)) {}

    void set_field(FieldFn field) { field_ = std::move(field); }

    void advance(GazeState& gaze, double t0, double t1) {
        State y{gaze.position.x, gaze.position.y, gaze.velocity.x, gaze.velocity.y};
        double t = t0;
        if (h_ <= 0.0) h_ = (t1 - t0) / 4.0;
        const double min_step = 1e-12 * std::max(1.0, std::abs(t1));
        while (t1 - t > min_step) {
            const double h = std::min(h_, t1 - t);
            State y_new, err;
            step(y, h, y_new, err);
            double acc = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
                acc += (err[i] / sc) * (err[i] / sc);
            }
            const double err_norm = std::sqrt(acc / 4.0);
            if (!std::isfinite(err_norm)) {
                throw NumericError("integrator produced a non-finite state at t=" + std::to_string(t));
            }
            const double factor =
                err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
            if (err_norm <= 1.0) {
                t += h;
                y = y_new;
                confine(y);
                if (h == h_ || factor < 1.0) h_ = h * factor;
            } else {
                h_ = h * std::max(factor, 0.1);
                if (h_ < min_step) {
                    throw NumericError("integrator step size underflow at t=" + std::to_string(t));
                }
            }
        }
        gaze.position = {y[0], y[1]};
        gaze.velocity = {y[2], y[3]};
    }

private:
    State rhs(const State& y) const {
        const Vec2 e = field_(Vec2{y[0], y[1]});
        return {y[2], y[3], e.x - lambda_ * y[2], e.y - lambda_ * y[3]};
    }

    void step(const State& y, double h, State& y5, State& err) const {
        auto combine = [&](std::initializer_list<std::pair<double, const State*>> terms) {
            State out = y;
            for (const auto& [coef, k] : terms) {
                for (std::size_t i = 0; i < 4; ++i) out[i] += h * coef * (*k)[i];
            }
            return out;
        };
        const State k1 = rhs(y);
        const State k2 = rhs(combine({{a21, &k1}}));
        const State k3 = rhs(combine({{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(combine({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(combine({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(combine({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        y5 = combine({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = rhs(y5);
        for (std::size_t i = 0; i < 4; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
    }

    void confine(State& y) const {
        const double xmax = static_cast<double>(retina_.width) - 1.0;
        const double ymax = static_cast<double>(retina_.height) - 1.0;
        if (y[0] < 0.0) { y[0] = 0.0; y[2] = std::max(y[2], 0.0); }
        if (y[0] > xmax) { y[0] = xmax; y[2] = std::min(y[2], 0.0); }
        if (y[1] < 0.0) { y[1] = 0.0; y[3] = std::max(y[3], 0.0); }
        if (y[1] > ymax) { y[1] = ymax; y[3] = std::min(y[3], 0.0); }
    }

    double lambda_, rtol_, atol_;
    Size retina_;
    FieldFn field_;
    double h_ = 0.0;
};

template <typename FieldFn>
GazeIntegrator<FieldFn> make_integrator(const SimConfig& config, Size retina, FieldFn fn) {
    return GazeIntegrator<FieldFn>(config.lambda, config.rtol, config.atol, retina, std::move(fn));
}

GazeState initial_state(const SimConfig& config, Size retina) {
    const Vec2 p = config.init_pos.value_or(retina_center(retina));
    if (p.x < 0.0 || p.y < 0.0 || p.x > static_cast<double>(retina.width) - 1.0 ||
        p.y > static_cast<double>(retina.height) - 1.0) {
        throw ConfigError("sim.init_pos lies outside the retina");
    }
    return {p, config.init_vel};
}

// Shared driver. `refresh(a)` advances the inhibition over one sample
// interval with the focus held at `a`, then rebuilds mass and grid.
struct FieldState {
    InhibitionMap inhibition;
    MassField mass;
    FieldGrid grid;
};

template <typename Refresh>
Trajectory run(const SimConfig& config, Size retina, FieldState& fs, Refresh&& refresh,
               const SimObserver& observer) {
    const std::size_t n = config.sample_count();
    Trajectory traj;
    traj.samples.reserve(n);
    GazeState gaze = initial_state(config, retina);

    auto grid_field = [&fs](const Vec2& a) { return field_interp(fs.grid, a); };
    auto direct_field = [&fs](const Vec2& a) { return field_at_point(fs.mass, a); };
    auto grid_integrator = make_integrator(config, retina, grid_field);
    auto direct_integrator = make_integrator(config, retina, direct_field);

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * config.sample_dt;
        traj.samples.push_back({t, gaze});
        if (k + 1 < n) refresh(gaze.position);
        if (observer) observer(SimSnapshot{k, traj.samples.back(), fs.inhibition, fs.mass, fs.grid});
        if (k + 1 == n) break;
        const double t_next = static_cast<double>(k + 1) * config.sample_dt;
        if (config.field_evaluation == FieldEvaluation::Grid) {
            grid_integrator.advance(gaze, t, t_next);
        } else {
            direct_integrator.advance(gaze, t, t_next);
        }
        if (!std::isfinite(gaze.position.x) || !std::isfinite(gaze.position.y)) {
            throw NumericError("gaze state became non-finite at t=" + std::to_string(t_next));
        }
    }
    return traj;
}

}  // namespace

Trajectory simulate(const Frame& frame, const FeatureStack& stack, const GravityParams& gravity,
                    const IorParams& ior, const SimConfig& config, const SimObserver& observer) {
    config.validate();
    gravity.validate(stack.size());
    if (ior.enabled) ior.validate();
    const Size retina = stack.raster_size();
    if (frame.size() != retina) throw ConfigError("simulate: frame and feature stack sizes differ");

    FieldState fs{InhibitionMap(retina), {}, {}};
    fs.mass = mass_from_features(stack, gravity, fs.inhibition);
    fs.grid = field_grid(fs.mass);

    auto refresh = [&](const Vec2& focus) {
        if (!ior.enabled) return;
        fs.inhibition = ior_step(fs.inhibition, focus, config.sample_dt * config.time_scale, ior);
        fs.mass = mass_from_features(stack, gravity, fs.inhibition);
        if (config.field_evaluation == FieldEvaluation::Grid) fs.grid = field_grid(fs.mass);
    };
    return run(config, retina, fs, refresh, observer);
}

Trajectory simulate_static(const MassField& mass, const SimConfig& config, const SimObserver& observer) {
    config.validate();
    const Size retina = mass.size();
    FieldState fs{InhibitionMap(retina), mass, {}};
    if (config.field_evaluation == FieldEvaluation::Grid) fs.grid = field_grid(mass);
    return run(config, retina, fs, [](const Vec2&) {}, observer);
}

double energy(const GazeState& state, const MassField& mass) {
    return 0.5 * norm_sq(state.velocity) + potential_at_point(mass, state.position);
}

Scanpath extract_fixations(const Trajectory& trajectory, double vel_threshold, double min_duration) {
    const auto& s = trajectory.samples;
    if (s.empty()) throw ConfigError("extract_fixations: empty trajectory");
    const std::size_t n = s.size();
    std::vector<double> speed(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dt = s[i + 1].t - s[i].t;
        speed[i] = distance(s[i + 1].state.position, s[i].state.position) / dt;
    }
    if (n > 1) speed[n - 1] = speed[n - 2];

    Scanpath out;
    std::size_t i = 0;
    while (i < n) {
        if (!(speed[i] < vel_threshold)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && speed[j + 1] < vel_threshold) ++j;
        const double t_start = s[i].t, t_end = s[j].t;
        if (t_end > t_start && t_end - t_start >= min_duration) {
            Vec2 c{};
            for (std::size_t k = i; k <= j; ++k) c += s[k].state.position;
            c = c / static_cast<double>(j - i + 1);
            out.fixations.push_back({c.x, c.y, t_start, t_end});
        }
        i = j + 1;
    }
    return out;
}

}  // namespace gravattn
