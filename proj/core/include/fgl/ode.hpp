#pragma once

#include <optional>
#include <vector>

namespace fgl {

/// Coefficients of the Bernoulli comparison equation f' + C1 f = C2 f^q.
struct OdeParams {
    double c1 = 1.0;
    double c2 = 1.0;
    double q = 2.0;
    double f0 = 1.0;

    /// Throws Error(invalid_argument) unless c1, c2, f0 > 0 and q > 1, all finite.
    void validate() const;

    /// (C1/C2)^{1/(q-1)}: data strictly above this level blows up.
    double blowup_level() const;
};

/// Blow-up time of the comparison equation, +inf when f0 <= blowup_level().
///
///   T* = -(1 / (C1 (q-1))) log(1 - (C1/C2) f0^{-(q-1)})
double blowup_time(const OdeParams& params);

/// Closed-form trajectory
///
///   f(t) = e^{-C1 t} ( f0^{-(q-1)} + (C2/C1)(e^{-C1 (q-1) t} - 1) )^{-1/(q-1)}.
///
/// Throws Error(blowup_exceeded) when t >= T*.
double closed_form_eval(const OdeParams& params, double t);

/// Closed form bundled with its blow-up time.
class OdeSolution {
public:
    explicit OdeSolution(OdeParams params);

    const OdeParams& params() const noexcept { return params_; }
    double blowup_time() const noexcept { return blowup_time_; }
    bool blows_up() const noexcept;
    double operator()(double t) const { return closed_form_eval(params_, t); }

private:
    OdeParams params_;
    double blowup_time_;
};

// Independent numerical route -------------------------------------------

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<double> f;
    /// Set in divergence mode: time at which f crosses the divergence level.
    std::optional<double> divergence_time;
};

struct OracleOptions {
    double tol = 1e-10;
    double divergence_level = 1e8;
    /// Bisection width for the crossing, relative to the crossing time.
    double bisection_tol = 1e-12;
    long max_steps = 1000000;
};

/// Adaptive Dormand-Prince integration of f' = -C1 f + C2 f^q on [0, t_end],
/// recording every accepted step. Throws Error(step_underflow) if the
/// solution diverges or the step collapses before t_end.
OdeTrajectory numeric_oracle(const OdeParams& params, double t_end, const OracleOptions& options = {});

/// Integrates until f exceeds options.divergence_level and bisects the dense
/// output for the crossing time. Returns a trajectory with divergence_time
/// unset if f stays below the level up to t_limit.
OdeTrajectory numeric_divergence(const OdeParams& params, double t_limit, const OracleOptions& options = {});

}  // namespace fgl
