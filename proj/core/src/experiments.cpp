#include "fgl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "fgl/error.hpp"
#include "fgl/spectral.hpp"

namespace fgl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluates fn(i) for i in [0, n) on up to `workers` threads; results keep
// index order and the first failure (by index) is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, unsigned workers, Fn fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

double weighted_l2(const FieldState& u, const WeightSpec& w) {
    const auto h = weight_values(w, u.grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += std::norm(u[i]) / (h[i] * h[i]);
    return std::sqrt(sum * u.grid.cell_volume());
}

bool resamplable(const InitialProfile& profile) { return !std::holds_alternative<SampledProfile>(profile); }

EigenOptions seeded(std::uint64_t seed) {
    EigenOptions o;
    o.seed = seed;
    return o;
}

std::string format_scale(const char* key, double v) {
    std::ostringstream os;
    os << key << "=" << v;
    return os.str();
}

}  // namespace

StabilityCheck make_stability_check(std::string name, double value, double doubled, double budget) {
    StabilityCheck c{std::move(name), value, doubled, 0.0, false};
    const double scale = std::abs(value);
    c.relative_change = scale > 0.0 ? std::abs(doubled - value) / scale : std::abs(doubled - value);
    c.ok = std::isfinite(c.relative_change) && c.relative_change <= budget;
    return c;
}

GridSpec doubled_domain(const GridSpec& grid) {
    return GridSpec(2.0 * grid.half_length(), 2 * grid.points(), grid.dim());
}

void require_stable(const std::vector<StabilityCheck>& checks) {
    std::ostringstream os;
    bool failed = false;
    for (const auto& c : checks) {
        if (c.ok) continue;
        os << (failed ? "; " : "") << c.name << ": " << c.value << " -> " << c.doubled << " (rel. change "
           << c.relative_change << ")";
        failed = true;
    }
    if (failed) throw Error(ErrorKind::unstable, "domain-doubling check over budget: " + os.str());
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "fit_loglog: length mismatch");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isfinite(x[i]) && std::isfinite(y[i]) && x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    const std::size_t n = lx.size();
    if (n < 3) throw Error(ErrorKind::refused, "log-log fit needs at least 3 finite positive measurements");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double dn = static_cast<double>(n);
    LogLogFit fit;
    fit.points = n;
    fit.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - fit.intercept - fit.slope * lx[i];
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / dn);
    return fit;
}

std::vector<double> SweepResult::parameters() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.parameter);
    return out;
}

std::vector<double> SweepResult::values() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.excluded ? kNaN : e.value);
    return out;
}

namespace {

void attach_fit(SweepResult& sweep) {
    try {
        sweep.fit = fit_loglog(sweep.parameters(), sweep.values());
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::refused) throw;
        sweep.fit_note = e.what();
    }
}

}  // namespace

LifespanSweep lifespan_sweep(const SimConfig& base, const InitialProfile& profile,
                             const std::vector<double>& amplitudes, const ExperimentOptions& options) {
    base.validate();
    if (amplitudes.empty()) throw Error(ErrorKind::invalid_argument, "lifespan_sweep: empty amplitude list");
    for (double r : amplitudes)
        if (!(r > 0.0) || !std::isfinite(r))
            throw Error(ErrorKind::invalid_argument, "lifespan_sweep: amplitudes must be positive");

    const bool stability = options.check_stability && resamplable(profile);
    const std::size_t n = amplitudes.size();
    // Tasks [0, n) are the runs, [n, 2n) the same runs on the doubled domain.
    const std::size_t tasks = stability ? 2 * n : n;
    auto results = parallel_map(tasks, options.workers, [&](std::size_t i) {
        SimConfig cfg = base;
        cfg.initial = scale_profile(profile, amplitudes[i % n]);
        if (i >= n) cfg.grid = doubled_domain(base.grid);
        return simulate(cfg);
    });

    LifespanSweep out;
    out.sweep.quantity = "t_detected";
    for (std::size_t i = 0; i < n; ++i) {
        auto& run = results[i];
        SweepEntry entry{amplitudes[i], kNaN, true, ""};
        if (run.report.blew_up) {
            entry.value = *run.report.t_detected;
            entry.excluded = false;
        } else {
            entry.note = "no blow-up before t_max";
        }
        out.sweep.entries.push_back(entry);
        out.runs.push_back({amplitudes[i], run.report, std::move(run.series)});
        if (stability) {
            const auto& twin = results[n + i].report;
            const double doubled = twin.blew_up ? *twin.t_detected : kNaN;
            if (!entry.excluded)
                out.sweep.stability.push_back(
                    make_stability_check(format_scale("t_detected[R", amplitudes[i]) + "]", entry.value, doubled));
        }
    }
    attach_fit(out.sweep);
    if (options.enforce_stability) require_stable(out.sweep.stability);
    return out;
}

GridSpec ScalingGrid::at_scale(double scale) const {
    if (!(scale > 0.0) || !(base_half_length > 0.0) || !(dx > 0.0))
        throw Error(ErrorKind::invalid_argument, "scaling grid needs positive scale, half-length and dx");
    const double half = base_half_length * scale;
    auto points = static_cast<std::size_t>(std::llround(2.0 * half / dx));
    points += points % 2;
    return GridSpec(half, points);
}

CommutatorScaling commutator_scaling(const WeightSpec& shape, const std::vector<double>& scales,
                                     const ScalingGrid& grids, const ExperimentOptions& options,
                                     const EigenOptions& eigen) {
    shape.validate();
    if (scales.empty()) throw Error(ErrorKind::invalid_argument, "commutator_scaling: empty scale list");
    const std::size_t n = scales.size();
    const std::size_t tasks = options.check_stability ? 2 * n : n;
    const auto kappas = parallel_map(tasks, options.workers, [&](std::size_t i) {
        const WeightSpec w{shape.exponent, scales[i % n]};
        GridSpec grid = grids.at_scale(scales[i % n]);
        if (i >= n) grid = doubled_domain(grid);
        const auto est = estimate_kappa(w, grid, eigen);
        if (!est.converged) {
            throw Error(ErrorKind::non_convergence,
                        "kappa estimate did not converge for " + w.label() + " (residual " +
                            std::to_string(est.residual) + ")");
        }
        return est.kappa;
    });

    CommutatorScaling out;
    out.sweep.quantity = "kappa";
    std::size_t ref = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.sweep.entries.push_back({scales[i], kappas[i], false, ""});
        if (scales[i] < scales[ref]) ref = i;
        if (options.check_stability)
            out.sweep.stability.push_back(
                make_stability_check(format_scale("kappa[R", scales[i]) + "]", kappas[i], kappas[n + i]));
    }

    bool all_zero = true;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    out.decay_bound_holds = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double product = kappas[i] * scales[i];
        all_zero = all_zero && kappas[i] == 0.0;
        lo = std::min(lo, product);
        hi = std::max(hi, product);
        const double allowed = (1.0 + out.slack) * kappas[ref] * scales[ref] / scales[i];
        if (kappas[i] > allowed) out.decay_bound_holds = false;
    }
    out.product_spread = lo > 0.0 ? hi / lo - 1.0 : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);

    if (all_zero) {
        out.sweep.fit_note = "all kappa are zero (constant weight); no scaling fit";
        // Zero against zero: relative changes are meaningless, the absolute
        // ones are round-off.
        for (auto& c : out.sweep.stability) c.ok = true;
    } else {
        attach_fit(out.sweep);
    }
    if (options.enforce_stability) require_stable(out.sweep.stability);
    return out;
}

SubcriticalResult subcritical_threshold(const InitialProfile& initial, double p, const SubcriticalOptions& options,
                                        const ExperimentOptions& experiment) {
    if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::invalid_argument, "subcritical search needs p > 1");
    // Fujita exponent for n = 1.
    if (p >= 3.0) {
        throw Error(ErrorKind::refused,
                    "supercritical: the small-data threshold search needs 1 < p < p_F = 3 in one dimension");
    }
    if (!resamplable(initial))
        throw Error(ErrorKind::invalid_argument, "subcritical search needs an analytic profile (resampled per R)");
    if (!(options.max_scale >= 1.0)) throw Error(ErrorKind::invalid_argument, "max_scale must be >= 1");

    SubcriticalResult out;
    out.p = p;
    const double root = 1.0 / (p - 1.0);

    auto evaluate = [&](double scale, const GridSpec& grid) {
        const WeightSpec w{options.weight_exponent, scale};
        const FieldState u0 = sample_profile(initial, grid);
        ThresholdStep step;
        step.scale = scale;
        step.kappa = estimate_kappa(w, grid, seeded(experiment.seed)).kappa;
        step.inv_h_norm = norm_inv_h(w, grid).torus;
        step.weighted_norm = weighted_l2(u0, w);
        step.threshold = std::pow(step.kappa, root) * step.inv_h_norm;
        step.satisfied = step.weighted_norm > step.threshold;
        return step;
    };

    {
        const GridSpec unit = options.grids.at_scale(1.0);
        out.mass_norm = l2_norm(sample_profile(initial, unit));
        if (!(out.mass_norm > 0.0)) throw Error(ErrorKind::invalid_argument, "subcritical search needs u0 != 0");
    }

    for (double scale = 1.0; scale <= options.max_scale; scale *= 2.0) {
        const GridSpec grid = options.grids.at_scale(scale);
        out.trace.push_back(evaluate(scale, grid));
        if (scale == 1.0) out.kappa_unit = out.trace.back().kappa;
        if (out.trace.back().satisfied) {
            out.scale = scale;
            out.grid = grid;
            break;
        }
    }
    // kappa_R = kappa_1 / R and ||1/h_R|| = sqrt(pi R) turn the threshold into
    // R^{1/(p-1) - 1/2} > kappa_1^{1/(p-1)} sqrt(pi) / ||u0||.
    out.analytic_estimate = std::pow(std::pow(out.kappa_unit, root) * std::sqrt(std::numbers::pi) / out.mass_norm,
                                     1.0 / (root - 0.5));
    if (out.scale == 0.0) {
        std::ostringstream os;
        os << "threshold not met up to R = " << options.max_scale << " (analytic estimate " << out.analytic_estimate
           << ")";
        throw Error(ErrorKind::invalid_argument, os.str());
    }

    const auto& hit = out.trace.back();
    const BoundParams b{p, hit.kappa, hit.inv_h_norm, hit.weighted_norm};
    out.lifespan_bound = lifespan_upper_bound(b, options.variant).value;

    if (experiment.check_stability) {
        const auto twin = evaluate(out.scale, doubled_domain(out.grid));
        out.stability.push_back(make_stability_check("kappa", hit.kappa, twin.kappa));
        out.stability.push_back(make_stability_check("inv_h_norm", hit.inv_h_norm, twin.inv_h_norm));
        out.stability.push_back(make_stability_check("weighted_norm", hit.weighted_norm, twin.weighted_norm));
        if (experiment.enforce_stability) require_stable(out.stability);
    }
    return out;
}

SimConfig subcritical_run_config(const SubcriticalResult& result, const InitialProfile& initial,
                                 const SimConfig& base, double slack) {
    if (!(result.scale > 0.0) || !std::isfinite(result.lifespan_bound))
        throw Error(ErrorKind::invalid_argument, "subcritical result carries no finite lifespan bound");
    SimConfig cfg = base;
    cfg.grid = result.grid;
    cfg.p = result.p;
    cfg.initial = initial;
    cfg.t_max = result.lifespan_bound * (1.0 + slack);
    return cfg;
}

double threshold_amplitude(const InitialProfile& profile, const GridSpec& grid, const WeightSpec& w, double p,
                           std::uint64_t seed) {
    const double weighted = weighted_l2(sample_profile(profile, grid), w);
    if (!(weighted > 0.0)) throw Error(ErrorKind::invalid_argument, "threshold_amplitude needs nonzero data");
    const BoundParams b{p, estimate_kappa(w, grid, seeded(seed)).kappa, norm_inv_h(w, grid).torus, weighted};
    return blowup_threshold(b) / weighted;
}

ConsistencyReport bounds_consistency(const SimConfig& cfg, const WeightSpec& w, const ConsistencyOptions& options,
                                     const ExperimentOptions& experiment) {
    cfg.validate();
    w.validate();
    if (!(options.kappa_factor > 0.0)) throw Error(ErrorKind::invalid_argument, "kappa_factor must be positive");

    struct Inputs {
        double kappa;
        double inv_h;
        double weighted;
    };
    auto inputs_on = [&](const GridSpec& grid) {
        return Inputs{estimate_kappa(w, grid, seeded(experiment.seed)).kappa, norm_inv_h(w, grid).torus,
                      weighted_l2(sample_profile(cfg.initial, grid), w)};
    };

    ConsistencyReport out;
    const Inputs in = inputs_on(cfg.grid);
    out.kappa_estimate = in.kappa;
    out.params = BoundParams{cfg.p, in.kappa * options.kappa_factor, in.inv_h, in.weighted};
    out.threshold = blowup_threshold(out.params);
    out.threshold_margin = out.threshold > 0.0 ? in.weighted / out.threshold - 1.0
                                               : std::numeric_limits<double>::infinity();
    if (!(out.threshold_margin >= options.min_threshold_margin)) {
        std::ostringstream os;
        os << "initial data clear the blow-up threshold by " << out.threshold_margin * 100.0 << "% (need "
           << options.min_threshold_margin * 100.0 << "%); the bounds make no prediction";
        throw Error(ErrorKind::refused, os.str());
    }
    out.lifespan_bound = lifespan_upper_bound(out.params, options.variant).value;

    SimConfig run = cfg;
    run.t_max = out.lifespan_bound * (1.0 + options.lifespan_slack);
    const bool stability = experiment.check_stability && resamplable(cfg.initial);
    auto sims = parallel_map(stability ? 2 : 1, experiment.workers, [&](std::size_t i) {
        SimConfig c = run;
        if (i == 1) c.grid = doubled_domain(cfg.grid);
        return simulate(c, {w});
    });

    out.blowup = sims[0].report;
    out.series = std::move(sims[0].series);
    out.lifespan_ok = out.blowup.blew_up && *out.blowup.t_detected <= run.t_max;
    out.lower_bound = check_weighted_lower_bound(out.series, w, out.params, options.variant, options.tolerance);
    out.lower_bound_ok = !out.lower_bound.violated;
    const auto constants = momentum_constants(out.params);
    out.inequality = check_momentum_inequality(out.series, w, constants.c0, constants.c1, options.tolerance);
    out.inequality_ok = !out.inequality.violated;

    if (stability) {
        const Inputs twin = inputs_on(doubled_domain(cfg.grid));
        out.stability.push_back(make_stability_check("kappa", in.kappa, twin.kappa));
        out.stability.push_back(make_stability_check("inv_h_norm", in.inv_h, twin.inv_h));
        out.stability.push_back(make_stability_check("weighted_norm", in.weighted, twin.weighted));
        const auto& other = sims[1].report;
        out.stability.push_back(make_stability_check("t_detected",
                                                     out.blowup.blew_up ? *out.blowup.t_detected : kNaN,
                                                     other.blew_up ? *other.t_detected : kNaN));
        if (experiment.enforce_stability) require_stable(out.stability);
    }
    return out;
}

}  // namespace fgl
