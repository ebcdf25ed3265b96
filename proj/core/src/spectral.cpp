#include "fgl/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "fgl/error.hpp"

namespace fgl {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (N, dim, sign) and kept for the
// lifetime of the process.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int dim, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(n, dim, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t total = dim == 1 ? n : n * n;
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        const int extent[2] = {static_cast<int>(n), static_cast<int>(n)};
        fftw_plan plan = fftw_plan_dft(dim, extent, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (plan == nullptr) throw Error(ErrorKind::capacity, "FFTW could not create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::tuple<std::size_t, int, int>, fftw_plan> plans_;
};

void execute(const GridSpec& grid, int sign, const cplx* in, cplx* out) {
    fftw_plan plan = PlanCache::instance().get(grid.points(), grid.dim(), sign);
    // fftw_execute_dft does not write to `in` for out-of-place plans.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

cplx symbol_value(const GridSpec& grid, std::size_t flat, const Symbol& symbol) {
    return std::visit(
        [&](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FractionalPower>) {
                const double k = grid.frequency_magnitude(flat);
                return k == 0.0 ? 0.0 : std::pow(k, s.s);
            } else if constexpr (std::is_same_v<T, Gradient>) {
                const std::size_t m = grid.axis_index(flat, s.axis);
                if (grid.is_unpaired(m)) return 0.0;
                return {0.0, grid.wavenumber(m)};
            } else {
                const double phase = -grid.frequency_magnitude(flat) * s.t;
                return {std::cos(phase), std::sin(phase)};
            }
        },
        symbol);
}

void validate_symbol(const GridSpec& grid, const Symbol& symbol) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FractionalPower>) {
                if (!(s.s > 0.0) || !std::isfinite(s.s))
                    throw Error(ErrorKind::invalid_argument, "fractional power must be positive and finite");
            } else if constexpr (std::is_same_v<T, Gradient>) {
                if (s.axis < 0 || s.axis >= grid.dim())
                    throw Error(ErrorKind::invalid_argument, "gradient axis out of range");
            } else {
                if (!std::isfinite(s.t)) throw Error(ErrorKind::invalid_argument, "phase time must be finite");
            }
        },
        symbol);
}

}  // namespace

std::vector<cplx> forward_transform(const FieldState& f) {
    std::vector<cplx> out(f.size());
    execute(f.grid, FFTW_FORWARD, f.values.data(), out.data());
    return out;
}

FieldState inverse_transform(const GridSpec& grid, std::vector<cplx> spectrum) {
    if (spectrum.size() != grid.size()) throw Error(ErrorKind::invalid_argument, "spectrum size mismatch");
    FieldState out(grid);
    execute(grid, FFTW_BACKWARD, spectrum.data(), out.values.data());
    out *= 1.0 / static_cast<double>(grid.size());
    return out;
}

FieldState apply_multiplier(const FieldState& f, const Symbol& symbol) {
    require_finite(f, "apply_multiplier");
    validate_symbol(f.grid, symbol);
    auto spectrum = forward_transform(f);
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= symbol_value(f.grid, i, symbol);
    return inverse_transform(f.grid, std::move(spectrum));
}

FieldState apply_abs_derivative(const FieldState& f) {
    return apply_multiplier(f, FractionalPower{1.0});
}

double integrate(const GridSpec& grid, const std::vector<double>& density) {
    if (density.size() != grid.size()) throw Error(ErrorKind::invalid_argument, "density size mismatch");
    double sum = 0.0;
    for (double d : density) sum += d;
    return sum * grid.cell_volume();
}

cplx inner_product(const FieldState& a, const FieldState& b) {
    if (!(a.grid == b.grid)) throw Error(ErrorKind::invalid_argument, "fields live on different grids");
    cplx sum{};
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return sum * a.grid.cell_volume();
}

double l2_norm(const FieldState& f) {
    require_finite(f, "l2_norm");
    double sum = 0.0;
    for (const auto& z : f.values) sum += std::norm(z);
    return std::sqrt(sum * f.grid.cell_volume());
}

double l2_norm_spectral(const FieldState& f) {
    require_finite(f, "l2_norm_spectral");
    const auto spectrum = forward_transform(f);
    double sum = 0.0;
    for (const auto& z : spectrum) sum += std::norm(z);
    return std::sqrt(sum * f.grid.cell_volume() / static_cast<double>(f.size()));
}

double lp_integral(const FieldState& f, double q) {
    require_finite(f, "lp_norm");
    if (!(q >= 1.0)) throw Error(ErrorKind::invalid_argument, "Lebesgue exponent must be >= 1");
    double sum = 0.0;
    for (const auto& z : f.values) sum += std::pow(std::abs(z), q);
    return sum * f.grid.cell_volume();
}

double lp_norm(const FieldState& f, double q) {
    return std::pow(lp_integral(f, q), 1.0 / q);
}

double h1_norm(const FieldState& f) {
    const double l2 = l2_norm(f);
    double sq = l2 * l2;
    for (int axis = 0; axis < f.grid.dim(); ++axis) {
        const double g = l2_norm(apply_multiplier(f, Gradient{axis}));
        sq += g * g;
    }
    return std::sqrt(sq);
}

double sup_norm(const FieldState& f) {
    require_finite(f, "sup_norm");
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

double norm(const FieldState& f, NormKind kind, double q) {
    switch (kind) {
    case NormKind::l2: return l2_norm(f);
    case NormKind::lp: return lp_norm(f, q);
    case NormKind::h1: return h1_norm(f);
    case NormKind::sup: return sup_norm(f);
    }
    return 0.0;
}

}  // namespace fgl
