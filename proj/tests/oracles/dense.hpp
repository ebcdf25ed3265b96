#pragma once

// Reference constructions that avoid the FFT path entirely: a direct O(N^2)
// DFT and dense matrices for |D| and the commutator. Only for small N.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "fgl/grid.hpp"
#include "fgl/weights.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Signed integer mode of index m for an N-point transform, N/2 mapped to -N/2.
inline long mode_of(std::size_t m, std::size_t n) {
    return m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

inline std::vector<cplx> naive_dft(const std::vector<cplx>& f, int sign = -1) {
    const std::size_t n = f.size();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx acc{};
        for (std::size_t m = 0; m < n; ++m) {
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / static_cast<double>(n);
            acc += f[m] * cplx(std::cos(angle), std::sin(angle));
        }
        out[j] = acc;
    }
    return out;
}

/// F^{-1}[symbol(mode) F f] with the symbol given per signed mode (1-D).
inline std::vector<cplx> naive_multiplier(const std::vector<cplx>& f, const std::function<cplx(long)>& symbol) {
    const std::size_t n = f.size();
    auto spec = naive_dft(f, -1);
    for (std::size_t j = 0; j < n; ++j) spec[j] *= symbol(mode_of(j, n));
    auto back = naive_dft(spec, +1);
    for (auto& z : back) z /= static_cast<double>(n);
    return back;
}

/// Dense |D| on the grid: D_ab = (1/N) sum_j |k_j| e^{i k_j (x_a - x_b)},
/// the unpaired mode -N/2 included.
inline Eigen::MatrixXcd dense_abs_derivative(const fgl::GridSpec& grid) {
    const std::size_t n = grid.points();
    const double unit = std::numbers::pi / grid.half_length();
    Eigen::MatrixXcd d(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            cplx acc{};
            const long diff = static_cast<long>(a) - static_cast<long>(b);
            for (std::size_t j = 0; j < n; ++j) {
                const long k = mode_of(j, n);
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(k * diff) / static_cast<double>(n);
                acc += std::abs(static_cast<double>(k)) * unit * cplx(std::cos(angle), std::sin(angle));
            }
            d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc / static_cast<double>(n);
        }
    }
    return d;
}

/// A = H^{-1} (D H - H D) with H = diag(h).
inline Eigen::MatrixXcd dense_commutator(const fgl::WeightSpec& w, const fgl::GridSpec& grid) {
    const auto d = dense_abs_derivative(grid);
    const auto n = static_cast<Eigen::Index>(grid.points());
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = w.value(std::abs(grid.node(static_cast<std::size_t>(i))));
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = d(r, c) * (h(c) - h(r)) / h(r);
    return a;
}

inline double largest_singular_value(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

inline std::vector<cplx> apply(const Eigen::MatrixXcd& m, const std::vector<cplx>& f) {
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(f.data(), static_cast<Eigen::Index>(f.size()));
    Eigen::VectorXcd r = m * v;
    return {r.data(), r.data() + r.size()};
}

}  // namespace oracle
