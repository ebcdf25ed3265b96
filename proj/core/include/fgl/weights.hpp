#pragma once

#include <string>
#include <vector>

#include "fgl/grid.hpp"
#include "fgl/operator_norm.hpp"

namespace fgl {

/// Polynomial weight h(x) = <x/R>^s = (1 + |x/R|^2)^{s/2}.
///
/// s = 0 gives the constant weight h = 1. For s >= 1 the Lipschitz
/// constant of <x>^s on |x| <= r is at most s <r>^{s-1}; for s = 1 it is 1
/// globally.
struct WeightSpec {
    double exponent = 1.0;
    double scale = 1.0;

    void validate() const;
    double value(double radius) const;
    bool constant() const noexcept { return exponent == 0.0; }
    /// Identifier used for CSV columns and JSON keys, e.g. "s1_R1".
    std::string label() const;

    friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

enum class WeightSide { h, inv_h };

/// h or 1/h sampled at the grid nodes (imaginary parts zero).
FieldState eval_weight(const WeightSpec& w, const GridSpec& grid, WeightSide which = WeightSide::h);
std::vector<double> weight_values(const WeightSpec& w, const GridSpec& grid);

struct InvWeightNorm {
    double torus = 0.0;           ///< rectangle-rule ||1/h||_2 over [-L, L)^n
    double doubled_torus = 0.0;   ///< same dx, L doubled
    double relative_change = 0.0; ///< |doubled - torus| / torus
    bool l_stable = false;        ///< relative_change <= 1%
    /// ||1/h||_2 over R^n: torus quadrature plus the analytic far-field tail
    /// (1-D only). +inf when 1/h is not square integrable (2s <= n).
    double full_line = 0.0;
    double tail = 0.0;
};

InvWeightNorm norm_inv_h(const WeightSpec& w, const GridSpec& grid);

/// A f = (1/h)(|D|(h f) - h |D| f); adjoint A* f = h |D|(f/h) - |D| f.
FieldState apply_commutator(const WeightSpec& w, const GridSpec& grid, const FieldState& f, bool adjoint = false);

struct CommutatorEstimate {
    double kappa = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    GridSpec grid;
    WeightSpec weight;
};

/// kappa = sqrt(lambda_max(A* A)) on the grid. Grid dependent: callers check
/// stability under refinement and under doubling L.
CommutatorEstimate estimate_kappa(const WeightSpec& w, const GridSpec& grid, EigenOptions options = {});

// Integral operator K f(x) = (1/h(x)) int <x-y>^{-2} h(y) f(y) dy (1-D).

inline constexpr std::size_t kDenseKernelCap = 4096;

/// Discretised K with the line distance x - y (no wrap-around).
/// Throws Error(capacity) when N exceeds `max_points`.
FieldState apply_kernel_operator(const WeightSpec& w, const GridSpec& grid, const FieldState& f,
                                 bool adjoint = false, std::size_t max_points = kDenseKernelCap);

struct KernelNormEstimate {
    double norm = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

KernelNormEstimate estimate_kernel_norm(const WeightSpec& w, const GridSpec& grid, EigenOptions options = {},
                                        std::size_t max_points = kDenseKernelCap);

/// Options with method = power, the default for the kernel operator.
EigenOptions kernel_norm_defaults();

}  // namespace fgl
