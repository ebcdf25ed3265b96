#include "fgl/weights.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "fgl/error.hpp"
#include "fgl/spectral.hpp"

namespace fgl {

void WeightSpec::validate() const {
    if (!std::isfinite(exponent) || exponent < 0.0)
        throw Error(ErrorKind::invalid_argument, "weight exponent must be finite and >= 0");
    if (!std::isfinite(scale) || !(scale > 0.0))
        throw Error(ErrorKind::invalid_argument, "weight scale must be positive and finite");
}

double WeightSpec::value(double radius) const {
    if (exponent == 0.0) return 1.0;
    const double r = radius / scale;
    return std::pow(1.0 + r * r, 0.5 * exponent);
}

std::string WeightSpec::label() const {
    std::ostringstream os;
    os << "s" << exponent << "_R" << scale;
    return os.str();
}

std::vector<double> weight_values(const WeightSpec& w, const GridSpec& grid) {
    w.validate();
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = w.value(grid.radius(i));
    return h;
}

FieldState eval_weight(const WeightSpec& w, const GridSpec& grid, WeightSide which) {
    const auto h = weight_values(w, grid);
    FieldState f(grid);
    for (std::size_t i = 0; i < h.size(); ++i) f[i] = which == WeightSide::h ? h[i] : 1.0 / h[i];
    return f;
}

namespace {

// Rectangle rule for int h^{-2} over [-L', L')^n with L' = scale * L and the
// same spacing as `grid`.
double inv_h_square_sum(const WeightSpec& w, const GridSpec& grid, std::size_t factor) {
    const std::size_t n = grid.points() * factor;
    const double half = grid.half_length() * static_cast<double>(factor);
    const double dx = grid.dx();
    double sum = 0.0;
    if (grid.dim() == 1) {
        for (std::size_t m = 0; m < n; ++m) {
            const double h = w.value(std::abs(-half + static_cast<double>(m) * dx));
            sum += 1.0 / (h * h);
        }
        return sum * dx;
    }
    for (std::size_t a = 0; a < n; ++a) {
        const double x = -half + static_cast<double>(a) * dx;
        for (std::size_t b = 0; b < n; ++b) {
            const double y = -half + static_cast<double>(b) * dx;
            const double h = w.value(std::hypot(x, y));
            sum += 1.0 / (h * h);
        }
    }
    return sum * dx * dx;
}

// 2 int_L^inf (1 + (x/R)^2)^{-s} dx.
double far_field_tail(const WeightSpec& w, double half_length) {
    if (2.0 * w.exponent <= 1.0) return std::numeric_limits<double>::infinity();
    boost::math::quadrature::exp_sinh<double> integrator;
    const double s = w.exponent;
    const double r = w.scale;
    auto integrand = [&](double x) { return std::pow(1.0 + (x / r) * (x / r), -s); };
    return 2.0 * integrator.integrate(integrand, half_length, std::numeric_limits<double>::infinity());
}

}  // namespace

InvWeightNorm norm_inv_h(const WeightSpec& w, const GridSpec& grid) {
    w.validate();
    InvWeightNorm out;
    const double base = inv_h_square_sum(w, grid, 1);
    const double doubled = inv_h_square_sum(w, grid, 2);
    out.torus = std::sqrt(base);
    out.doubled_torus = std::sqrt(doubled);
    out.relative_change = std::abs(out.doubled_torus - out.torus) / out.torus;
    out.l_stable = out.relative_change <= 0.01;
    if (grid.dim() == 1) {
        out.tail = far_field_tail(w, grid.half_length());
        out.full_line = std::sqrt(base + out.tail);
    } else {
        // Radial tails outside a square are not tabulated; report the torus value.
        out.tail = 2.0 * w.exponent <= 2.0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.full_line = std::isfinite(out.tail) ? out.torus : out.tail;
    }
    return out;
}

FieldState apply_commutator(const WeightSpec& w, const GridSpec& grid, const FieldState& f, bool adjoint) {
    if (!(f.grid == grid)) throw Error(ErrorKind::invalid_argument, "field is not on the commutator grid");
    require_finite(f, "apply_commutator");
    const auto h = weight_values(w, grid);
    if (!adjoint) {
        auto dh = apply_abs_derivative(pointwise_multiply(f, h));
        const auto df = apply_abs_derivative(f);
        for (std::size_t i = 0; i < h.size(); ++i) dh[i] = (dh[i] - h[i] * df[i]) / h[i];
        return dh;
    }
    auto out = pointwise_multiply(apply_abs_derivative(pointwise_divide(f, h)), h);
    out -= apply_abs_derivative(f);
    return out;
}

CommutatorEstimate estimate_kappa(const WeightSpec& w, const GridSpec& grid, EigenOptions options) {
    w.validate();
    // Round-off of A on a constant weight is ~1e-16 |k|_max; treat anything
    // far below the |D| scale as an exact zero.
    const double k_max = std::numbers::pi / grid.dx();
    if (options.zero_floor == 0.0) options.zero_floor = std::pow(1e-11 * k_max, 2);

    const auto normal = [&](const std::vector<cplx>& v) {
        FieldState f(grid, v);
        return apply_commutator(w, grid, apply_commutator(w, grid, f, false), true).values;
    };
    const auto est = dominant_eigenvalue(normal, grid.size(), options);

    CommutatorEstimate out{.kappa = std::sqrt(std::max(0.0, est.value)),
                           .iterations = est.iterations,
                           .residual = est.residual,
                           .converged = est.converged,
                           .grid = grid,
                           .weight = w};
    return out;
}

FieldState apply_kernel_operator(const WeightSpec& w, const GridSpec& grid, const FieldState& f, bool adjoint,
                                 std::size_t max_points) {
    require_dim(grid, 1, "apply_kernel_operator");
    if (!(f.grid == grid)) throw Error(ErrorKind::invalid_argument, "field is not on the kernel grid");
    require_finite(f, "apply_kernel_operator");
    const std::size_t n = grid.points();
    if (n > max_points) {
        std::ostringstream os;
        os << "dense kernel operator capped at N = " << max_points << ", got " << n;
        throw Error(ErrorKind::capacity, os.str());
    }
    const auto h = weight_values(w, grid);
    const double dx = grid.dx();
    // Toeplitz kernel <x_i - x_j>^{-2} depends only on |i - j|.
    std::vector<double> kernel(n);
    for (std::size_t d = 0; d < n; ++d) {
        const double r = static_cast<double>(d) * dx;
        kernel[d] = 1.0 / (1.0 + r * r);
    }
    // K = diag(1/h) C diag(h) dx, K* = diag(h) C diag(1/h) dx.
    std::vector<cplx> in(n);
    for (std::size_t j = 0; j < n; ++j) in[j] = adjoint ? f[j] / h[j] : f[j] * h[j];
    FieldState out(grid);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) acc += kernel[i > j ? i - j : j - i] * in[j];
        out[i] = (adjoint ? h[i] : 1.0 / h[i]) * acc * dx;
    }
    return out;
}

EigenOptions kernel_norm_defaults() {
    EigenOptions o;
    o.method = EigenMethod::power;
    o.tol = 1e-10;
    return o;
}

KernelNormEstimate estimate_kernel_norm(const WeightSpec& w, const GridSpec& grid, EigenOptions options,
                                        std::size_t max_points) {
    require_dim(grid, 1, "estimate_kernel_norm");
    if (grid.points() > max_points) {
        std::ostringstream os;
        os << "dense kernel operator capped at N = " << max_points << ", got " << grid.points();
        throw Error(ErrorKind::capacity, os.str());
    }
    const auto normal = [&](const std::vector<cplx>& v) {
        FieldState f(grid, v);
        return apply_kernel_operator(w, grid, apply_kernel_operator(w, grid, f, false, max_points), true,
                                     max_points)
            .values;
    };
    const auto est = dominant_eigenvalue(normal, grid.points(), options);
    return {std::sqrt(std::max(0.0, est.value)), est.iterations, est.residual};
}

}  // namespace fgl
