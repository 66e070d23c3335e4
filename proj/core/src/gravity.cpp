#include "gravattn/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "gravattn/error.hpp"

namespace gravattn {

void GravityParams::validate(std::size_t feature_count) const {
    if (!(global_gain > 0.0) || !std::isfinite(global_gain)) {
        throw ConfigError("gravity.global_gain must be positive");
    }
    if (!alphas.empty() && alphas.size() != feature_count) {
        throw ConfigError("gravity.alphas has " + std::to_string(alphas.size()) + " entries, expected " +
                          std::to_string(feature_count));
    }
    for (double a : alphas) {
        if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("gravity.alphas must be positive");
    }
}

MassField::MassField(GrayMap values) : values_(std::move(values)) {
    for (double v : values_.values()) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("MassField: negative or non-finite mass");
    }
}

std::uint64_t MassField::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    const Size s = size();
    mix(&s.width, sizeof s.width);
    mix(&s.height, sizeof s.height);
    const auto v = values_.values();
    mix(v.data(), v.size_bytes());
    return h;
}

MassField mass_from_features(const FeatureStack& stack, const GravityParams& params,
                             const InhibitionMap& inhibition) {
    if (inhibition.size() != stack.raster_size()) {
        throw ConfigError("mass_from_features: inhibition map size does not match the feature stack");
    }
    GrayMap mass(stack.raster_size());
    auto dst = mass.values();
    for (std::size_t i = 0; i < stack.size(); ++i) {
        const double a = params.alpha(i);
        auto src = stack.maps()[i].values();
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += a * src[p];
    }
    auto inh = inhibition.values().values();
    for (std::size_t p = 0; p < dst.size(); ++p) {
        dst[p] = std::max(0.0, params.global_gain * dst[p] * (1.0 - inh[p]));
    }
    return MassField(std::move(mass));
}

Vec2 kernel_e(const Vec2& z) {
    const double r2 = norm_sq(z);
    if (r2 < kCoreRadius * kCoreRadius) return {0.0, 0.0};
    return z / (2.0 * std::numbers::pi * r2);
}

Vec2 field_at_point(const MassField& mass, const Vec2& a_in) {
    const Vec2 a = clamp_to_retina(a_in, mass.size());
    const GrayMap& mu = mass.values();
    Vec2 acc{};
    for (std::size_t y = 0; y < mu.height(); ++y) {
        for (std::size_t x = 0; x < mu.width(); ++x) {
            const double m = mu(x, y);
            if (m == 0.0) continue;
            acc += kernel_e(a - Vec2{static_cast<double>(x), static_cast<double>(y)}) * m;
        }
    }
    return -acc;
}

double potential_at_point(const MassField& mass, const Vec2& a) {
    const GrayMap& mu = mass.values();
    double acc = 0.0;
    for (std::size_t y = 0; y < mu.height(); ++y) {
        for (std::size_t x = 0; x < mu.width(); ++x) {
            const double m = mu(x, y);
            if (m == 0.0) continue;
            const double r = distance(a, {static_cast<double>(x), static_cast<double>(y)});
            acc += std::log(std::max(r, kCoreRadius)) * m;
        }
    }
    return acc / (2.0 * std::numbers::pi);
}

namespace {

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) throw NumericError("fftw_malloc failed");
    return FftwBuffer<T>(p);
}

// Zero-padded (2H x 2W) convolution setup for one raster size: plans plus
// the spectra of both kernel components.
class KernelConvolver {
public:
    explicit KernelConvolver(Size size)
        : size_(size),
          rows_(2 * size.height),
          cols_(2 * size.width),
          spec_cols_(cols_ / 2 + 1),
          kx_(fftw_alloc<fftw_complex>(rows_ * spec_cols_)),
          ky_(fftw_alloc<fftw_complex>(rows_ * spec_cols_)) {
        auto real = fftw_alloc<double>(rows_ * cols_);
        auto spec = fftw_alloc<fftw_complex>(rows_ * spec_cols_);
        forward_ = fftw_plan_dft_r2c_2d(static_cast<int>(rows_), static_cast<int>(cols_), real.get(), spec.get(),
                                        FFTW_ESTIMATE);
        inverse_ = fftw_plan_dft_c2r_2d(static_cast<int>(rows_), static_cast<int>(cols_), spec.get(), real.get(),
                                        FFTW_ESTIMATE);
        if (!forward_ || !inverse_) throw NumericError("FFTW plan creation failed");

        for (int component = 0; component < 2; ++component) {
            for (std::size_t j = 0; j < rows_; ++j) {
                const double dy = offset(j, size.height, rows_);
                for (std::size_t i = 0; i < cols_; ++i) {
                    const double dx = offset(i, size.width, cols_);
                    double v = 0.0;
                    if (std::isfinite(dx) && std::isfinite(dy)) {
                        const Vec2 e = kernel_e({dx, dy});
                        v = component == 0 ? e.x : e.y;
                    }
                    real[j * cols_ + i] = v;
                }
            }
            fftw_execute_dft_r2c(forward_, real.get(), component == 0 ? kx_.get() : ky_.get());
        }
    }
    ~KernelConvolver() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }
    KernelConvolver(const KernelConvolver&) = delete;
    KernelConvolver& operator=(const KernelConvolver&) = delete;

    VectorField field(const GrayMap& mass) const {
        auto real = fftw_alloc<double>(rows_ * cols_);
        auto spec = fftw_alloc<fftw_complex>(rows_ * spec_cols_);
        auto prod = fftw_alloc<fftw_complex>(rows_ * spec_cols_);
        std::memset(real.get(), 0, sizeof(double) * rows_ * cols_);
        for (std::size_t y = 0; y < size_.height; ++y) {
            for (std::size_t x = 0; x < size_.width; ++x) real[y * cols_ + x] = mass(x, y);
        }
        fftw_execute_dft_r2c(forward_, real.get(), spec.get());

        VectorField out(size_);
        const double scale = -1.0 / static_cast<double>(rows_ * cols_);
        for (int component = 0; component < 2; ++component) {
            const fftw_complex* k = component == 0 ? kx_.get() : ky_.get();
            for (std::size_t n = 0; n < rows_ * spec_cols_; ++n) {
                const double re = spec[n][0] * k[n][0] - spec[n][1] * k[n][1];
                const double im = spec[n][0] * k[n][1] + spec[n][1] * k[n][0];
                prod[n][0] = re;
                prod[n][1] = im;
            }
            fftw_execute_dft_c2r(inverse_, prod.get(), real.get());
            for (std::size_t y = 0; y < size_.height; ++y) {
                for (std::size_t x = 0; x < size_.width; ++x) {
                    const double v = real[y * cols_ + x] * scale;
                    (component == 0 ? out(x, y).x : out(x, y).y) = v;
                }
            }
        }
        return out;
    }

private:
    // Signed displacement encoded by padded index `i`; the unused middle
    // index (|d| == n) maps to NaN and gets a zero kernel value.
    static double offset(std::size_t i, std::size_t n, std::size_t padded) {
        if (i < n) return static_cast<double>(i);
        if (i == n) return std::numeric_limits<double>::quiet_NaN();
        return static_cast<double>(i) - static_cast<double>(padded);
    }

    Size size_;
    std::size_t rows_, cols_, spec_cols_;
    FftwBuffer<fftw_complex> kx_, ky_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

// FFTW's planner is not thread-safe; executing an existing plan on fresh
// buffers is.
std::shared_ptr<const KernelConvolver> convolver_for(Size size) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const KernelConvolver>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{size.width, size.height}];
    if (!slot) slot = std::make_shared<const KernelConvolver>(size);
    return slot;
}

}  // namespace

FieldGrid field_grid(const MassField& mass) {
    if (mass.size().area() == 0) throw ConfigError("field_grid: empty mass field");
    return {convolver_for(mass.size())->field(mass.values()), mass.hash()};
}

Vec2 field_interp(const FieldGrid& grid, const Vec2& a_in) {
    const Size s = grid.field.size();
    const Vec2 a = clamp_to_retina(a_in, s);
    const auto x0 = static_cast<std::size_t>(std::floor(a.x));
    const auto y0 = static_cast<std::size_t>(std::floor(a.y));
    const std::size_t x1 = std::min(x0 + 1, s.width - 1);
    const std::size_t y1 = std::min(y0 + 1, s.height - 1);
    const double fx = a.x - static_cast<double>(x0);
    const double fy = a.y - static_cast<double>(y0);
    const VectorField& f = grid.field;
    const Vec2 top = f(x0, y0) * (1.0 - fx) + f(x1, y0) * fx;
    const Vec2 bot = f(x0, y1) * (1.0 - fx) + f(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

}  // namespace gravattn
