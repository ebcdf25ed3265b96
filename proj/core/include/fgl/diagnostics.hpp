#pragma once

#include <optional>
#include <vector>

#include "fgl/bounds.hpp"
#include "fgl/evolution.hpp"

namespace fgl {

/// Sampled inequality check. margins[i] = (checked - bound) / scale at times[i].
struct MarginReport {
    std::vector<double> times;
    std::vector<double> margins;
    double min_margin = 0.0;
    double tolerance = 0.0;
    bool violated = false;
    /// First sample time at which the bound had already diverged (it then
    /// certifies blow-up and no margin is computed from there on).
    std::optional<double> certified_from;
};

/// Stored ||u(t_i)/h||_2^2 samples for a registered weight.
const std::vector<double>& weighted_momentum(const TimeSeries& series, const WeightSpec& w);

/// Centred three-point derivative on a nonuniform grid; NaN at both ends.
std::vector<double> centred_derivative(const std::vector<double>& t, const std::vector<double>& y);

/// margin_i = (||u(t_i)/h||_2 - bound(t_i)) / bound(t_i).
MarginReport check_weighted_lower_bound(const TimeSeries& series, const WeightSpec& w, const BoundParams& b,
                                        BoundVariant variant, double tol);

/// Checks Q' >= c0 Q^{(p+1)/2} - c1 Q for Q = ||u/h||^2, with Q' by centred
/// differences. margin_i = (Q' - c0 Q^{(p+1)/2} + c1 Q) / (c0 Q^{(p+1)/2} + c1 Q).
/// Throws Error(invalid_argument) with fewer than 3 samples.
MarginReport check_momentum_inequality(const TimeSeries& series, const WeightSpec& w, double c0, double c1,
                                       double tol);

/// c0 = 2 ||1/h||^{-(p-1)}, c1 = 2 kappa.
struct MomentumConstants {
    double c0;
    double c1;
};
MomentumConstants momentum_constants(const BoundParams& b);

struct H1Growth {
    std::vector<double> times;
    std::vector<double> h1;
    /// Samples used for the fit (sup <= window_sup_factor * sup(0)).
    std::size_t window = 0;
    /// Least-squares C in ||u||_{H1}^{-(p-1)} = ||u0||_{H1}^{-(p-1)} - C (p-1) t / 2.
    double c_fit = 0.0;
    /// Smallest C for which the upper bound holds at every window sample.
    double c_envelope = 0.0;
    /// 2 / (C (p-1) ||u0||_{H1}^{p-1}) with C = c_fit; +inf when C <= 0.
    double implied_lifespan = 0.0;
};

H1Growth h1_series(const TimeSeries& series, double window_sup_factor = 10.0);

struct MassIdentityReport {
    /// (d/dt mass - k ||u||_{p+1}^{p+1}) / (1 + ||u||_{p+1}^{p+1}) for k = 1, 2.
    MarginReport factor_one;
    MarginReport factor_two;
    double max_abs_factor_one = 0.0;
    double max_abs_factor_two = 0.0;
    int best_factor = 2;
};

/// Evaluated on interior samples with sup <= max_sup.
MassIdentityReport mass_identity_residual(const TimeSeries& series, double max_sup = 1e3, double tol = 1e-3);

}  // namespace fgl
