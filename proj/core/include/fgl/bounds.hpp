#pragma once

namespace fgl {

/// Inputs of the weighted-norm blow-up bounds.
///
/// kappa is the operator norm of (1/h)[|D|, h], inv_h_norm is ||1/h||_2 and
/// initial_weighted_norm is ||u0/h||_2.
struct BoundParams {
    double p = 2.0;
    double kappa = 0.0;
    double inv_h_norm = 1.0;
    double initial_weighted_norm = 1.0;

    void validate() const;
};

/// `paper` keeps the printed constants (prefactor e^{-2 kappa t}, lifespan
/// factor 2/((p-1) kappa)). `sharp` applies the comparison lemma to
/// ||u/h||^2 directly and takes the square root, which halves both exponents.
enum class BoundVariant { paper, sharp };

const char* to_string(BoundVariant v) noexcept;
BoundVariant parse_bound_variant(const char* name);

/// kappa^{1/(p-1)} ||1/h||_2. Data with ||u0/h||_2 strictly above it blows up.
double blowup_threshold(const BoundParams& b);

/// Lower bound for ||u(t)/h||_2. Throws Error(blowup_exceeded) once the
/// bracket is nonpositive, i.e. the bound itself has diverged before t.
double weighted_norm_lower_bound(const BoundParams& b, double t, BoundVariant variant = BoundVariant::paper);

/// Bracket ||u0/h||^{-(p-1)} + kappa^{-1} ||1/h||^{-(p-1)} (e^{-kappa (p-1) t} - 1),
/// with its kappa -> 0 limit for kappa < 1e-10.
double lower_bound_bracket(const BoundParams& b, double t);

struct LifespanBound {
    double value;         ///< +inf when the threshold condition is not strictly met
    bool condition_met;   ///< kappa ||1/h||^{p-1} ||u0/h||^{-(p-1)} < 1
};

LifespanBound lifespan_upper_bound(const BoundParams& b, BoundVariant variant = BoundVariant::paper);

}  // namespace fgl
