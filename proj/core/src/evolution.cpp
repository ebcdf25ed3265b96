#include "fgl/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fgl/error.hpp"
#include "fgl/spectral.hpp"

namespace fgl {

FieldState sample_profile(const InitialProfile& profile, const GridSpec& grid) {
    return std::visit(
        [&](const auto& prof) -> FieldState {
            using T = std::decay_t<decltype(prof)>;
            if constexpr (std::is_same_v<T, GaussianProfile>) {
                if (!(prof.width > 0.0)) throw Error(ErrorKind::invalid_argument, "gaussian width must be positive");
                FieldState f(grid);
                for (std::size_t i = 0; i < f.size(); ++i) {
                    double r2 = 0.0;
                    for (int axis = 0; axis < grid.dim(); ++axis) {
                        const double d = (grid.coordinate(i, axis) - prof.center) / prof.width;
                        r2 += d * d;
                    }
                    f[i] = prof.amplitude * std::exp(-r2);
                }
                return f;
            } else if constexpr (std::is_same_v<T, ConstantProfile>) {
                FieldState f(grid);
                std::fill(f.values.begin(), f.values.end(), prof.value);
                return f;
            } else {
                return FieldState(grid, prof.values);
            }
        },
        profile);
}

InitialProfile scale_profile(InitialProfile profile, double factor) {
    std::visit(
        [&](auto& prof) {
            using T = std::decay_t<decltype(prof)>;
            if constexpr (std::is_same_v<T, GaussianProfile>) {
                prof.amplitude *= factor;
            } else if constexpr (std::is_same_v<T, ConstantProfile>) {
                prof.value *= factor;
            } else {
                for (auto& z : prof.values) z *= factor;
            }
        },
        profile);
    return profile;
}

void SimConfig::validate() const {
    if (!std::isfinite(p) || !(p > 1.0)) throw Error(ErrorKind::invalid_argument, "simulation needs p > 1");
    if (!(t_max > 0.0)) throw Error(ErrorKind::invalid_argument, "t_max must be positive");
    if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorKind::invalid_argument, "theta must lie in (0, 1)");
    if (!(dt_min > 0.0) || !(dt_max > 0.0) || !(dt_min < dt_max))
        throw Error(ErrorKind::invalid_argument, "need 0 < dt_min < dt_max");
    if (!(blowup_sup_threshold > 0.0)) throw Error(ErrorKind::invalid_argument, "sup threshold must be positive");
    if (record_every < 1) throw Error(ErrorKind::invalid_argument, "record_every must be >= 1");
}

const char* to_string(BlowupCriterion c) noexcept {
    switch (c) {
    case BlowupCriterion::sup_threshold: return "sup_threshold";
    case BlowupCriterion::dt_underflow: return "dt_underflow";
    case BlowupCriterion::nonlinear_substep_singular: return "nonlinear_substep_singular";
    }
    return "unknown";
}

std::size_t TimeSeries::weight_index(const WeightSpec& w) const {
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] == w) return i;
    throw Error(ErrorKind::invalid_argument, "weight " + w.label() + " was not registered for this series");
}

FieldState nonlinear_substep(const FieldState& f, double dt, double p) {
    require_finite(f, "nonlinear_substep");
    if (!(dt > 0.0) || !(p > 1.0)) throw Error(ErrorKind::invalid_argument, "nonlinear step needs dt > 0, p > 1");
    const double pm1 = p - 1.0;
    const double sup = sup_norm(f);
    const double load = pm1 * dt * std::pow(sup, pm1);
    if (load >= 1.0) {
        const double max_dt = 1.0 / (pm1 * std::pow(sup, pm1));
        std::ostringstream os;
        os << "nonlinear flow is singular within dt = " << dt << " (largest admissible " << max_dt << ")";
        throw SingularSubstep(max_dt, os.str());
    }
    FieldState out = f;
    for (auto& z : out.values) {
        const double rho = std::abs(z);
        if (rho == 0.0) continue;
        // rho(dt) / rho(0) = (1 - (p-1) dt rho^{p-1})^{-1/(p-1)}
        z *= std::pow(1.0 - pm1 * dt * std::pow(rho, pm1), -1.0 / pm1);
    }
    return out;
}

FieldState linear_substep(const FieldState& f, double dt) {
    return apply_multiplier(f, HalfWavePhase{dt});
}

FieldState strang_step(const FieldState& f, double dt, double p, bool nonlinear) {
    if (!nonlinear) return linear_substep(f, dt);
    auto half = linear_substep(f, 0.5 * dt);
    half = nonlinear_substep(half, dt, p);
    return linear_substep(half, 0.5 * dt);
}

StepChoice choose_dt(double sup, double p, const SimConfig& cfg) {
    double dt = cfg.dt_max;
    if (sup > 0.0) dt = std::min(dt, cfg.theta / ((p - 1.0) * std::pow(sup, p - 1.0)));
    return {dt, dt < cfg.dt_min};
}

StepChoice choose_dt(const FieldState& f, double p, const SimConfig& cfg) {
    return choose_dt(sup_norm(f), p, cfg);
}

std::vector<WeightSpec> default_weights() {
    return {WeightSpec{1.0, 1.0}, WeightSpec{0.5, 1.0}};
}

namespace {

class Recorder {
public:
    Recorder(const SimConfig& cfg, const std::vector<WeightSpec>& weights) {
        series_.p = cfg.p;
        series_.weights = weights;
        series_.momentum.resize(weights.size());
        for (const auto& w : weights) inv_h_.push_back(weight_values(w, cfg.grid));
        for (auto& h : inv_h_)
            for (auto& v : h) v = 1.0 / v;
    }

    void record(const FieldState& u, double t, double dt) {
        series_.times.push_back(t);
        series_.dt.push_back(dt);
        const double l2 = l2_norm(u);
        series_.mass.push_back(l2 * l2);
        series_.h1.push_back(h1_norm(u));
        series_.lp1.push_back(lp_integral(u, series_.p + 1.0));
        series_.sup.push_back(sup_norm(u));
        const double vol = u.grid.cell_volume();
        for (std::size_t w = 0; w < inv_h_.size(); ++w) {
            double q = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) q += std::norm(u[i]) * inv_h_[w][i] * inv_h_[w][i];
            series_.momentum[w].push_back(q * vol);
        }
    }

    TimeSeries take() { return std::move(series_); }

private:
    TimeSeries series_;
    std::vector<std::vector<double>> inv_h_;
};

}  // namespace

SimResult simulate(const SimConfig& cfg, const std::vector<WeightSpec>& weights) {
    cfg.validate();
    FieldState u = sample_profile(cfg.initial, cfg.grid);
    require_finite(u, "simulate: initial data");

    Recorder recorder(cfg, weights);
    BlowupReport report;
    double t = 0.0;
    long steps = 0;
    recorder.record(u, t, 0.0);
    bool recorded_last = true;
    double last_dt = 0.0;

    auto fire = [&](BlowupCriterion c, double t_fire) {
        report.blew_up = true;
        report.criterion = c;
        report.t_detected = t_fire;
    };

    while (t < cfg.t_max) {
        const double sup = sup_norm(u);
        StepChoice step = cfg.nonlinear ? choose_dt(sup, cfg.p, cfg) : StepChoice{cfg.dt_max, false};
        if (step.underflow) {
            fire(BlowupCriterion::dt_underflow, t);
            break;
        }
        // Land exactly on t_max; a float-sized remainder is absorbed.
        double dt = step.dt;
        const double remaining = cfg.t_max - t;
        if (dt >= remaining || remaining - dt < 1e-12 * cfg.t_max) dt = remaining;

        FieldState next(cfg.grid);
        try {
            next = strang_step(u, dt, cfg.p, cfg.nonlinear);
        } catch (const SingularSubstep&) {
            fire(BlowupCriterion::nonlinear_substep_singular, t + dt);
            break;
        }
        if (!next.finite()) {
            std::ostringstream os;
            os << "simulate: non-finite state at t = " << t + dt << " after " << steps + 1 << " steps";
            throw Error(ErrorKind::corrupt_state, os.str());
        }
        u = std::move(next);
        t = dt == remaining ? cfg.t_max : t + dt;
        last_dt = dt;
        ++steps;

        const double new_sup = sup_norm(u);
        const bool crossed = cfg.nonlinear && new_sup > cfg.blowup_sup_threshold;
        recorded_last = crossed || steps % cfg.record_every == 0 || t >= cfg.t_max;
        if (recorded_last) recorder.record(u, t, dt);
        if (crossed) {
            fire(BlowupCriterion::sup_threshold, t);
            break;
        }
        report.t_last_stable = t;
    }
    // The last completed step is always part of the series.
    if (!recorded_last) recorder.record(u, t, last_dt);

    report.final_sup = sup_norm(u);
    report.steps = steps;
    return {recorder.take(), report, std::move(u)};
}

}  // namespace fgl
