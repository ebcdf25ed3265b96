#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgl/bounds.hpp"
#include "fgl/diagnostics.hpp"
#include "fgl/evolution.hpp"
#include "fgl/weights.hpp"

namespace fgl {

/// Quantity re-evaluated with L doubled at fixed dx.
struct StabilityCheck {
    std::string name;
    double value = 0.0;
    double doubled = 0.0;
    double relative_change = 0.0;
    bool ok = false;
};

inline constexpr double kStabilityBudget = 0.05;

StabilityCheck make_stability_check(std::string name, double value, double doubled,
                                    double budget = kStabilityBudget);

/// Same dx, twice the half-length (and twice the points).
GridSpec doubled_domain(const GridSpec& grid);

/// Throws Error(unstable) listing every check over budget.
void require_stable(const std::vector<StabilityCheck>& checks);

struct ExperimentOptions {
    /// Worker threads for independent sweep members; results are merged in
    /// parameter order whatever the completion order.
    unsigned workers = 1;
    bool check_stability = true;
    /// Throw Error(unstable) after the run if a stability check fails.
    bool enforce_stability = true;
    /// Start-vector seed for every eigenvalue estimate.
    std::uint64_t seed = 12345;
};

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< RMS residual in log space
    std::size_t points = 0;
};

/// Ordinary least squares of log y on log x over finite positive pairs.
/// Throws Error(refused) with fewer than 3 such pairs.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepEntry {
    double parameter = 0.0;
    /// Measured quantity (t_detected, kappa, ...); NaN when excluded.
    double value = 0.0;
    bool excluded = false;
    std::string note;
};

struct SweepResult {
    std::string quantity;
    std::vector<SweepEntry> entries;
    std::optional<LogLogFit> fit;
    /// Why the fit was not produced, when it was not.
    std::string fit_note;
    std::vector<StabilityCheck> stability;

    std::vector<double> parameters() const;
    std::vector<double> values() const;
};

// Lifespan versus amplitude -------------------------------------------------

struct LifespanRun {
    double amplitude = 0.0;
    BlowupReport report;
    TimeSeries series;
};

struct LifespanSweep {
    SweepResult sweep;
    std::vector<LifespanRun> runs;
};

/// Simulates u0 = R * profile for every R and fits log t_detected against
/// log R. Runs that reach t_max are excluded and flagged, never fitted.
LifespanSweep lifespan_sweep(const SimConfig& base, const InitialProfile& profile,
                             const std::vector<double>& amplitudes, const ExperimentOptions& options = {});

// Commutator scaling ---------------------------------------------------------

struct ScalingGrid {
    /// Half-length at scale 1; the grid at scale R has L = base_half_length * R.
    double base_half_length = 32.0;
    double dx = 0.125;

    GridSpec at_scale(double scale) const;
};

struct CommutatorScaling {
    SweepResult sweep;
    /// kappa(R) <= (1 + slack) kappa(1) / R for every R in the list.
    bool decay_bound_holds = false;
    double slack = 0.15;
    /// max_R kappa(R) R / min_R kappa(R) R - 1.
    double product_spread = 0.0;
};

/// kappa for h = <x/R>^s on matched grids. Throws Error(non_convergence) if
/// any estimate fails to converge. The fit is refused when every kappa is 0.
CommutatorScaling commutator_scaling(const WeightSpec& shape, const std::vector<double>& scales,
                                     const ScalingGrid& grids = {}, const ExperimentOptions& options = {},
                                     const EigenOptions& eigen = {});

// Subcritical threshold -------------------------------------------------------

struct ThresholdStep {
    double scale = 0.0;
    double kappa = 0.0;
    double inv_h_norm = 0.0;
    double weighted_norm = 0.0;
    double threshold = 0.0;
    bool satisfied = false;
};

struct SubcriticalOptions {
    ScalingGrid grids;
    double weight_exponent = 1.0;
    double max_scale = 65536.0;
    BoundVariant variant = BoundVariant::paper;
};

struct SubcriticalResult {
    double p = 2.0;
    double scale = 0.0;           ///< first dyadic R with the threshold strictly met
    double lifespan_bound = 0.0;  ///< upper lifespan bound at that R
    double kappa_unit = 0.0;      ///< kappa at R = 1
    double mass_norm = 0.0;       ///< ||u0||_2 on the R = 1 grid
    /// (kappa_1 sqrt(pi) / ||u0||_2)^2 from kappa_R ~ kappa_1 / R and ||1/h_R|| ~ sqrt(pi R).
    double analytic_estimate = 0.0;
    std::vector<ThresholdStep> trace;
    std::vector<StabilityCheck> stability;
    GridSpec grid{1.0, 4};        ///< grid at the returned scale
};

/// Dyadic search R = 1, 2, 4, ... for the first weight h_R = <x/R>^s whose
/// threshold ||u0/h_R|| > kappa_R^{1/(p-1)} ||1/h_R|| holds strictly (1-D).
/// Throws Error(refused) for p >= 3 (no small-data blow-up mechanism) and
/// Error(invalid_argument) for zero data or when max_scale is exhausted.
SubcriticalResult subcritical_threshold(const InitialProfile& initial, double p,
                                        const SubcriticalOptions& options = {},
                                        const ExperimentOptions& experiment = {});

/// Configuration for the follow-up run: base with the grid at the returned
/// scale and t_max = (1 + slack) times the lifespan bound.
SimConfig subcritical_run_config(const SubcriticalResult& result, const InitialProfile& initial,
                                 const SimConfig& base, double slack = 0.1);

// Bound consistency -----------------------------------------------------------

struct ConsistencyOptions {
    BoundVariant variant = BoundVariant::paper;
    /// Multiplies the estimated kappa before it enters the bounds.
    double kappa_factor = 1.0;
    double lifespan_slack = 0.1;
    double tolerance = 0.05;
    /// Minimum relative excess of ||u0/h|| over the threshold.
    double min_threshold_margin = 0.1;
};

struct ConsistencyReport {
    BoundParams params;
    double kappa_estimate = 0.0;
    double threshold = 0.0;
    double threshold_margin = 0.0;
    double lifespan_bound = 0.0;
    BlowupReport blowup;
    MarginReport lower_bound;
    MarginReport inequality;
    bool lifespan_ok = false;     ///< t_detected <= bound (1 + slack)
    bool lower_bound_ok = false;
    bool inequality_ok = false;
    std::vector<StabilityCheck> stability;
    TimeSeries series;

    bool passed() const noexcept { return lifespan_ok && lower_bound_ok && inequality_ok; }
};

/// Factor c such that c * profile sits exactly on the blow-up threshold for
/// weight w on `grid` (the threshold itself does not depend on the data).
double threshold_amplitude(const InitialProfile& profile, const GridSpec& grid, const WeightSpec& w, double p,
                           std::uint64_t seed = 12345);

/// Estimates kappa and ||1/h|| on cfg.grid, runs the simulation to
/// (1 + slack) times the lifespan bound and checks the three predictions.
/// Throws Error(refused) when the data do not clear the threshold by
/// min_threshold_margin.
ConsistencyReport bounds_consistency(const SimConfig& cfg, const WeightSpec& w,
                                     const ConsistencyOptions& options = {},
                                     const ExperimentOptions& experiment = {});

}  // namespace fgl
