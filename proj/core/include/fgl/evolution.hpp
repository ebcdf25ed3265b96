#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fgl/grid.hpp"
#include "fgl/weights.hpp"

namespace fgl {

// Initial data -------------------------------------------------------------

/// amplitude * exp(-((x - center)/width)^2); radial in 2-D.
struct GaussianProfile {
    double amplitude = 1.0;
    double width = 1.0;
    double center = 0.0;
};

struct ConstantProfile {
    cplx value = 1.0;
};

struct SampledProfile {
    std::vector<cplx> values;
};

using InitialProfile = std::variant<GaussianProfile, ConstantProfile, SampledProfile>;

FieldState sample_profile(const InitialProfile& profile, const GridSpec& grid);

/// Same profile with every amplitude multiplied by `factor`.
InitialProfile scale_profile(InitialProfile profile, double factor);

// Configuration and results --------------------------------------------------

struct SimConfig {
    GridSpec grid{20.0, 2048};
    double p = 2.0;
    InitialProfile initial = GaussianProfile{};
    double t_max = 10.0;
    /// Step-safety factor: dt <= theta / ((p-1) sup|u|^{p-1}).
    double theta = 0.5;
    double dt_max = 0.01;
    double dt_min = 1e-12;
    double blowup_sup_threshold = 1e8;
    int record_every = 1;
    /// Off: pure half-wave evolution (the nonlinear sub-flow is skipped).
    bool nonlinear = true;

    void validate() const;
};

enum class BlowupCriterion { sup_threshold, dt_underflow, nonlinear_substep_singular };

const char* to_string(BlowupCriterion c) noexcept;

struct BlowupReport {
    bool blew_up = false;
    /// Step time at which the criterion fired (upper bracket of the blow-up).
    std::optional<double> t_detected;
    /// Last time at which the state was finite and below threshold.
    double t_last_stable = 0.0;
    std::optional<BlowupCriterion> criterion;
    double final_sup = 0.0;
    long steps = 0;
};

/// Per-sample diagnostics; `momentum[w][i]` is ||u(t_i)/h_w||_2^2.
struct TimeSeries {
    double p = 2.0;
    std::vector<double> times;
    std::vector<double> dt;
    std::vector<double> mass;
    std::vector<double> h1;
    /// ||u||_{p+1}^{p+1}
    std::vector<double> lp1;
    std::vector<double> sup;
    std::vector<WeightSpec> weights;
    std::vector<std::vector<double>> momentum;

    std::size_t size() const noexcept { return times.size(); }
    /// Index of `w` in `weights`, or throws Error(invalid_argument).
    std::size_t weight_index(const WeightSpec& w) const;
};

struct SimResult {
    TimeSeries series;
    BlowupReport report;
    FieldState final_state;
};

// Operations ---------------------------------------------------------------

/// Exact flow of w' = |w|^{p-1} w over dt: the modulus solves rho' = rho^p,
/// the phase is frozen. Throws SingularSubstep if (p-1) dt sup|w|^{p-1} >= 1.
FieldState nonlinear_substep(const FieldState& f, double dt, double p);

/// Exact half-wave flow e^{-i|D| dt}.
FieldState linear_substep(const FieldState& f, double dt);

/// Strang step: half linear, full nonlinear, half linear.
FieldState strang_step(const FieldState& f, double dt, double p, bool nonlinear = true);

struct StepChoice {
    double dt;
    bool underflow;  ///< the rule asked for a step below dt_min
};

StepChoice choose_dt(double sup, double p, const SimConfig& cfg);
StepChoice choose_dt(const FieldState& f, double p, const SimConfig& cfg);

/// h = <x> (the weighted-norm bounds) and h = <x>^{1/2} (so that
/// ||u/h||^2 = int <x>^{-1} |u|^2).
std::vector<WeightSpec> default_weights();

/// Integrates until t_max or a blow-up criterion fires. A detected blow-up is
/// a normal result; non-finite states throw Error(corrupt_state).
SimResult simulate(const SimConfig& cfg, const std::vector<WeightSpec>& weights = default_weights());

}  // namespace fgl
