#pragma once

#include <variant>
#include <vector>

#include "fgl/grid.hpp"

namespace fgl {

// Fourier multipliers ------------------------------------------------------

/// |k|^s, s > 0. The unpaired mode keeps |k_{-N/2}|^s.
struct FractionalPower {
    double s = 1.0;
};

/// i k along one axis. The unpaired mode along that axis is zeroed.
struct Gradient {
    int axis = 0;
};

/// e^{-i |k| t}: the exact half-wave propagator over time t.
struct HalfWavePhase {
    double t = 0.0;
};

using Symbol = std::variant<FractionalPower, Gradient, HalfWavePhase>;

/// Unnormalised forward DFT (sign -1), FFT storage order.
std::vector<cplx> forward_transform(const FieldState& f);

/// Inverse DFT including the 1/N^dim factor.
FieldState inverse_transform(const GridSpec& grid, std::vector<cplx> spectrum);

/// F^{-1}[ symbol(k) F f ]. Throws Error(corrupt_state) on non-finite input.
FieldState apply_multiplier(const FieldState& f, const Symbol& symbol);

/// Shorthand for apply_multiplier(f, FractionalPower{1}).
FieldState apply_abs_derivative(const FieldState& f);

// Norms and quadrature ----------------------------------------------------

enum class NormKind { l2, lp, h1, sup };

/// Rectangle-rule integral of a real density sampled on the grid.
double integrate(const GridSpec& grid, const std::vector<double>& density);

/// sum conj(a) b dx^dim.
cplx inner_product(const FieldState& a, const FieldState& b);

double l2_norm(const FieldState& f);
/// L^2 norm evaluated from the spectrum (Parseval).
double l2_norm_spectral(const FieldState& f);
/// (sum |f|^q dx^dim)^{1/q}.
double lp_norm(const FieldState& f, double q);
/// sum |f|^q dx^dim, i.e. lp_norm^q without the root.
double lp_integral(const FieldState& f, double q);
/// sqrt(||f||^2 + sum_axis ||d_axis f||^2), gradients spectral.
double h1_norm(const FieldState& f);
double sup_norm(const FieldState& f);

/// Dispatch by kind; `q` is the Lebesgue exponent used for NormKind::lp.
double norm(const FieldState& f, NormKind kind, double q = 2.0);

}  // namespace fgl
