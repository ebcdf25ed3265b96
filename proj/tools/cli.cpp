#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "fgl/bounds.hpp"
#include "fgl/diagnostics.hpp"
#include "fgl/error.hpp"
#include "fgl/evolution.hpp"
#include "fgl/experiments.hpp"
#include "fgl/kernel_decay.hpp"
#include "fgl/ode.hpp"
#include "fgl/spectral.hpp"
#include "output.hpp"

#ifndef FGL_VERSION
#define FGL_VERSION "unknown"
#endif

namespace fgl::cli {

namespace {

using nlohmann::json;

constexpr const char* kCommands[] = {"simulate", "sweep", "ode", "commutator", "kernel", "threshold", "bounds"};

// Settings ----------------------------------------------------------------

struct OdeSettings {
    OdeParams params;
    OracleOptions oracle;
    double t_end = 10.0;
    long samples = 200;
};

struct CommutatorSettings {
    WeightSpec shape;
    std::vector<double> scales;
    ScalingGrid grids;
    EigenOptions eigen;
};

struct KernelSettings {
    double window_lo = 10.0;
    double window_hi = 100.0;
    double shift_lo = 20.0;
    double shift_hi = 200.0;
    double spacing = 0.05;
    int bins = 8;
    KernelQuadrature quad;
};

struct ThresholdSettings {
    SubcriticalOptions search;
    bool follow_up = true;
    double slack = 0.1;
};

struct BoundsSettings {
    WeightSpec weight;
    ConsistencyOptions checks;
    /// > 0: rescale the initial profile to this multiple of the threshold.
    double threshold_multiple = 0.0;
};

struct Settings {
    SimConfig sim;
    std::vector<WeightSpec> weights;
    InitialProfile profile;
    std::vector<double> amplitudes;
    OdeSettings ode;
    CommutatorSettings commutator;
    KernelSettings kernel;
    ThresholdSettings threshold;
    BoundsSettings bounds;
    ExperimentOptions experiment;
    std::string out_dir;
};

EigenMethod parse_method(const std::string& name) {
    if (name == "lanczos") return EigenMethod::lanczos;
    if (name == "power") return EigenMethod::power;
    throw ConfigError("unknown eigen method '" + name + "' (expected lanczos or power)");
}

BoundVariant parse_variant(const std::string& name) {
    try {
        return parse_bound_variant(name.c_str());
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

// Reads every known key so that defaults are materialised and typos in any
// section are caught, whichever command runs.
Settings read_settings(Config& c) {
    Settings s;
    const double half = c.real("grid.half_length", 20.0);
    const long points = c.integer("grid.points", 2048);
    const long dim = c.integer("grid.dim", 1);
    if (points < 0) throw ConfigError("grid.points must be positive");

    auto& sim = s.sim;
    sim.p = c.real("evolution.p", 2.0);
    sim.t_max = c.real("evolution.t_max", 10.0);
    sim.theta = c.real("evolution.theta", 0.5);
    sim.dt_max = c.real("evolution.dt_max", 0.01);
    sim.dt_min = c.real("evolution.dt_min", 1e-12);
    sim.blowup_sup_threshold = c.real("evolution.sup_threshold", 1e8);
    sim.record_every = static_cast<int>(c.integer("evolution.record_every", 1));
    sim.nonlinear = c.flag("evolution.nonlinear", true);

    const auto kind = c.text("initial.profile", "gaussian");
    const double amplitude = c.real("initial.amplitude", 1.0);
    const double width = c.real("initial.width", 1.0);
    const double center = c.real("initial.center", 0.0);
    if (kind == "gaussian") {
        s.profile = GaussianProfile{amplitude, width, center};
    } else if (kind == "constant") {
        s.profile = ConstantProfile{amplitude};
    } else {
        throw ConfigError("initial.profile must be gaussian or constant, got '" + kind + "'");
    }

    const auto exponents = c.reals("weights.exponents", {1.0, 0.5});
    const auto scales = c.reals("weights.scales", {1.0, 1.0});
    if (exponents.size() != scales.size()) throw ConfigError("weights.exponents and weights.scales differ in length");
    for (std::size_t i = 0; i < exponents.size(); ++i) s.weights.push_back({exponents[i], scales[i]});

    s.amplitudes = c.reals("sweep.amplitudes", {8, 16, 32, 64});

    auto& ode = s.ode;
    ode.params = {c.real("ode.c1", 1.0), c.real("ode.c2", 1.0), c.real("ode.q", 2.0), c.real("ode.f0", 2.0)};
    ode.oracle.tol = c.real("ode.tol", 1e-10);
    ode.oracle.divergence_level = c.real("ode.divergence_level", 1e8);
    ode.t_end = c.real("ode.t_end", 10.0);
    ode.samples = c.integer("ode.samples", 200);

    auto& com = s.commutator;
    com.shape.exponent = c.real("commutator.exponent", 1.0);
    com.scales = c.reals("commutator.scales", {1, 2, 4, 8});
    com.grids.base_half_length = c.real("commutator.base_half_length", 32.0);
    com.grids.dx = c.real("commutator.dx", 0.125);
    com.eigen.method = parse_method(c.text("commutator.method", "lanczos"));
    com.eigen.tol = c.real("commutator.tol", 1e-8);
    com.eigen.krylov_dim = static_cast<int>(c.integer("commutator.krylov_dim", 80));
    com.eigen.max_iterations = static_cast<int>(c.integer("commutator.max_iterations", 10000));

    auto& ker = s.kernel;
    ker.window_lo = c.real("kernel.window_lo", 10.0);
    ker.window_hi = c.real("kernel.window_hi", 100.0);
    ker.shift_lo = c.real("kernel.shift_lo", 20.0);
    ker.shift_hi = c.real("kernel.shift_hi", 200.0);
    ker.spacing = c.real("kernel.spacing", 0.05);
    ker.bins = static_cast<int>(c.integer("kernel.bins", 8));
    ker.quad.panels_per_unit = static_cast<int>(c.integer("kernel.panels_per_unit", 125));

    auto& thr = s.threshold;
    thr.search.weight_exponent = c.real("threshold.weight_exponent", 1.0);
    thr.search.grids.base_half_length = c.real("threshold.base_half_length", 32.0);
    thr.search.grids.dx = c.real("threshold.dx", 0.125);
    thr.search.max_scale = c.real("threshold.max_scale", 65536.0);
    thr.search.variant = parse_variant(c.text("threshold.variant", "paper"));
    thr.follow_up = c.flag("threshold.simulate", true);
    thr.slack = c.real("threshold.slack", 0.1);

    auto& bnd = s.bounds;
    bnd.weight = {c.real("bounds.exponent", 1.0), c.real("bounds.scale", 1.0)};
    bnd.checks.variant = parse_variant(c.text("bounds.variant", "paper"));
    bnd.checks.kappa_factor = c.real("bounds.kappa_factor", 1.0);
    bnd.checks.lifespan_slack = c.real("bounds.lifespan_slack", 0.1);
    bnd.checks.tolerance = c.real("bounds.tolerance", 0.05);
    bnd.checks.min_threshold_margin = c.real("bounds.min_margin", 0.1);
    bnd.threshold_multiple = c.real("bounds.threshold_multiple", 0.0);

    const long seed = c.integer("run.seed", 12345);
    const long workers = c.integer("run.workers", static_cast<long>(std::max(1u, std::thread::hardware_concurrency())));
    if (seed < 0) throw ConfigError("run.seed must be >= 0");
    if (workers < 1) throw ConfigError("run.workers must be >= 1");
    s.experiment.seed = static_cast<std::uint64_t>(seed);
    s.experiment.workers = static_cast<unsigned>(workers);
    s.experiment.check_stability = c.flag("run.check_stability", true);
    s.experiment.enforce_stability = c.flag("run.enforce_stability", true);
    s.out_dir = c.text("run.out_dir", ".");
    c.reject_unknown();

    try {
        sim.grid = GridSpec(half, static_cast<std::size_t>(points), static_cast<int>(dim));
        sim.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    sim.initial = s.profile;
    s.commutator.eigen.seed = s.experiment.seed;
    return s;
}

// JSON helpers --------------------------------------------------------------

json report_json(const BlowupReport& r) {
    return {{"blew_up", r.blew_up},
            {"t_detected", r.t_detected ? json_real(*r.t_detected) : json(nullptr)},
            {"t_last_stable", json_real(r.t_last_stable)},
            {"criterion", r.criterion ? json(to_string(*r.criterion)) : json(nullptr)},
            {"final_sup", json_real(r.final_sup)},
            {"steps", r.steps}};
}

json margin_json(const MarginReport& m) {
    return {{"min_margin", json_real(m.min_margin)},
            {"tolerance", m.tolerance},
            {"violated", m.violated},
            {"samples", m.margins.size()},
            {"certified_from", m.certified_from ? json_real(*m.certified_from) : json(nullptr)}};
}

json stability_json(const std::vector<StabilityCheck>& checks) {
    json out = json::array();
    for (const auto& c : checks)
        out.push_back({{"name", c.name},
                       {"value", json_real(c.value)},
                       {"doubled", json_real(c.doubled)},
                       {"relative_change", json_real(c.relative_change)},
                       {"ok", c.ok}});
    return out;
}

json fit_json(const SweepResult& s) {
    if (!s.fit) return nullptr;
    return {{"slope", s.fit->slope}, {"intercept", s.fit->intercept}, {"residual", s.fit->residual},
            {"points", s.fit->points}};
}

json params_json(const BoundParams& b) {
    return {{"p", b.p}, {"kappa", b.kappa}, {"inv_h_norm", b.inv_h_norm},
            {"initial_weighted_norm", b.initial_weighted_norm}};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string describe(const BlowupReport& r) {
    if (!r.blew_up) return "no blow-up up to t_max";
    return "blow-up detected at t = " + fmt(*r.t_detected) + " (" + to_string(*r.criterion) + ")";
}

// Commands -------------------------------------------------------------------

struct Outcome {
    json summary;
    std::string line;
};

Outcome cmd_simulate(const Settings& s, OutputSet& out) {
    const auto result = simulate(s.sim, s.weights);
    const auto& series = result.series;
    json summary = report_json(result.report);
    summary["samples"] = series.size();
    summary["mass_initial"] = json_real(series.mass.front());
    summary["mass_final"] = json_real(series.mass.back());
    summary["mass_relative_drift"] = json_real(std::abs(series.mass.back() - series.mass.front()) / series.mass.front());

    summary["mass_identity"] = nullptr;
    summary["h1_growth"] = nullptr;
    if (series.size() >= 3) {
        try {
            const auto mi = mass_identity_residual(series);
            summary["mass_identity"] = {{"best_factor", mi.best_factor},
                                        {"max_abs_factor_one", json_real(mi.max_abs_factor_one)},
                                        {"max_abs_factor_two", json_real(mi.max_abs_factor_two)}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::invalid_argument) throw;
        }
        try {
            const auto g = h1_series(series);
            summary["h1_growth"] = {{"c_fit", json_real(g.c_fit)}, {"c_envelope", json_real(g.c_envelope)},
                                    {"implied_lifespan", json_real(g.implied_lifespan)}, {"window", g.window}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::invalid_argument) throw;
        }
    }

    out.add_series("timeseries", series);
    out.add_plot("sup", series.times, series.sup, "t", "sup|u|", "semilogy");
    out.add_plot("mass", series.times, series.mass, "t", "||u||_2^2");
    out.add_plot("h1", series.times, series.h1, "t", "||u||_H1", "semilogy");
    for (std::size_t w = 0; w < series.weights.size(); ++w)
        out.add_plot("Q_" + series.weights[w].label(), series.times, series.momentum[w], "t",
                     "||u/h||_2^2 (" + series.weights[w].label() + ")", "semilogy");
    return {summary, describe(result.report) + ", " + std::to_string(result.report.steps) + " steps"};
}

Outcome cmd_sweep(const Settings& s, OutputSet& out) {
    const auto result = lifespan_sweep(s.sim, s.profile, s.amplitudes, s.experiment);
    json entries = json::array();
    std::vector<double> r;
    std::vector<double> t;
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto& run = result.runs[i];
        const auto& e = result.sweep.entries[i];
        entries.push_back({{"amplitude", run.amplitude},
                           {"t_detected", e.excluded ? json(nullptr) : json_real(e.value)},
                           {"excluded", e.excluded},
                           {"note", e.note},
                           {"report", report_json(run.report)}});
        out.add_series("R" + format_real(run.amplitude) + "_timeseries", run.series);
        if (!e.excluded) {
            r.push_back(run.amplitude);
            t.push_back(e.value);
        }
    }
    out.add_plot("lifespan", r, t, "R", "t_detected", "loglog");
    json summary = {{"p", s.sim.p}, {"entries", entries}, {"fit", fit_json(result.sweep)},
                    {"fit_note", result.sweep.fit_note}, {"stability", stability_json(result.sweep.stability)}};
    const std::string line = result.sweep.fit ? "lifespan slope " + fmt(result.sweep.fit->slope) + " over " +
                                                    std::to_string(result.sweep.fit->points) + " runs"
                                              : "no fit: " + result.sweep.fit_note;
    return {summary, line};
}

Outcome cmd_ode(const Settings& s, OutputSet& out) {
    const auto& o = s.ode;
    const OdeSolution solution(o.params);
    const double t_star = solution.blowup_time();
    const bool blows = solution.blows_up();
    const double horizon = blows ? 0.99 * t_star : o.t_end;

    const auto oracle = numeric_oracle(o.params, horizon, o.oracle);
    double worst = 0.0;
    std::vector<double> closed;
    for (std::size_t i = 0; i < oracle.t.size(); ++i) {
        closed.push_back(solution(oracle.t[i]));
        worst = std::max(worst, std::abs(oracle.f[i] - closed.back()) / std::abs(closed.back()));
    }
    json divergence = nullptr;
    json divergence_rel = nullptr;
    if (blows) {
        const auto div = numeric_divergence(o.params, 2.0 * t_star, o.oracle);
        if (div.divergence_time) {
            divergence = *div.divergence_time;
            divergence_rel = std::abs(*div.divergence_time - t_star) / t_star;
        }
    }

    std::vector<double> grid_t;
    std::vector<double> grid_f;
    for (long i = 0; i <= o.samples; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(std::max(1L, o.samples));
        grid_t.push_back(t);
        grid_f.push_back(solution(t));
    }
    out.add_plot("closed_form", grid_t, grid_f, "t", "f", "semilogy");
    out.add_plot("oracle", oracle.t, oracle.f, "t", "f", "semilogy");

    std::string csv = "t,oracle,closed_form\n";
    for (std::size_t i = 0; i < oracle.t.size(); ++i)
        csv += csv_real(oracle.t[i]) + ',' + csv_real(oracle.f[i]) + ',' + csv_real(closed[i]) + '\n';
    json summary = {{"c1", o.params.c1},
                    {"c2", o.params.c2},
                    {"q", o.params.q},
                    {"f0", o.params.f0},
                    {"blowup_level", o.params.blowup_level()},
                    {"blows_up", blows},
                    {"blowup_time", json_real(t_star)},
                    {"oracle_horizon", horizon},
                    {"oracle_max_relative_deviation", worst},
                    {"divergence_time", divergence},
                    {"divergence_relative_difference", divergence_rel}};
    out.add_csv("trajectory", csv);
    std::vector<double> deviation;
    for (std::size_t i = 0; i < oracle.t.size(); ++i)
        deviation.push_back(std::abs(oracle.f[i] - closed[i]) / std::abs(closed[i]));
    out.add_plot("deviation", oracle.t, deviation, "t", "relative deviation", "semilogy");
    const std::string line = blows ? "blow-up time " + fmt(t_star) + ", oracle deviation " + fmt(worst)
                                   : "no blow-up (f0 <= " + fmt(o.params.blowup_level()) + ")";
    return {summary, line};
}

Outcome cmd_commutator(const Settings& s, OutputSet& out) {
    const auto& c = s.commutator;
    const auto result = commutator_scaling(c.shape, c.scales, c.grids, s.experiment, c.eigen);
    json entries = json::array();
    std::vector<double> products;
    for (const auto& e : result.sweep.entries) {
        entries.push_back({{"scale", e.parameter},
                           {"kappa", json_real(e.value)},
                           {"kappa_times_scale", json_real(e.value * e.parameter)},
                           {"points", c.grids.at_scale(e.parameter).points()}});
    }
    out.add_plot("kappa", result.sweep.parameters(), result.sweep.values(), "R", "kappa", "loglog");
    json summary = {{"exponent", c.shape.exponent},
                    {"dx", c.grids.dx},
                    {"base_half_length", c.grids.base_half_length},
                    {"entries", entries},
                    {"fit", fit_json(result.sweep)},
                    {"fit_note", result.sweep.fit_note},
                    {"decay_bound_holds", result.decay_bound_holds},
                    {"slack", result.slack},
                    {"product_spread", json_real(result.product_spread)},
                    {"stability", stability_json(result.sweep.stability)}};
    const std::string line = result.sweep.fit ? "kappa slope " + fmt(result.sweep.fit->slope) +
                                                    ", kappa*R spread " + fmt(result.product_spread)
                                              : result.sweep.fit_note;
    return {summary, line};
}

Outcome cmd_kernel(const Settings& s, OutputSet& out) {
    const auto& k = s.kernel;
    if (!(k.spacing > 0.0)) throw ConfigError("kernel.spacing must be positive");
    const double lo = std::min(k.window_lo, k.shift_lo);
    const double hi = std::max(k.window_hi, k.shift_hi);
    std::vector<double> x;
    for (long i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * k.spacing;
        if (v > hi) break;
        x.push_back(v);
    }
    const auto g = kernel_transform(x, k.quad);
    std::vector<double> re(g.size());
    double worst_imag = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        re[i] = g[i].real();
        worst_imag = std::max(worst_imag, std::abs(g[i].imag()) / std::abs(g[i].real()));
    }
    const auto fit = fit_tail_decay(x, re, k.window_lo, k.window_hi, k.bins);
    const auto shifted = fit_tail_decay(x, re, k.shift_lo, k.shift_hi, k.bins);
    const double g0 = kernel_values({0.0}, k.quad).front();

    std::vector<double> abs_g(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) abs_g[i] = std::abs(re[i]);
    out.add_plot("abs_g", x, abs_g, "x", "|g(x)|", "loglog");
    out.add_plot("envelope", fit.bin_x, fit.bin_max, "x", "bin max |g|", "loglog");
    json summary = {{"g0", g0},
                    {"nodes", k.quad.node_count()},
                    {"max_imag_ratio", worst_imag},
                    {"window", {k.window_lo, k.window_hi}},
                    {"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"constant", fit.constant},
                    {"residual", fit.residual},
                    {"shifted_window", {k.shift_lo, k.shift_hi}},
                    {"shifted_slope", shifted.slope},
                    {"shifted_constant", shifted.constant},
                    {"constant_relative_change", std::abs(shifted.constant - fit.constant) / fit.constant}};
    return {summary, "tail slope " + fmt(fit.slope) + ", constant " + fmt(fit.constant)};
}

Outcome cmd_threshold(const Settings& s, OutputSet& out) {
    const auto& t = s.threshold;
    const auto result = subcritical_threshold(s.profile, s.sim.p, t.search, s.experiment);
    json trace = json::array();
    std::vector<double> scales;
    std::vector<double> excess;
    for (const auto& step : result.trace) {
        trace.push_back({{"scale", step.scale},
                         {"kappa", step.kappa},
                         {"inv_h_norm", step.inv_h_norm},
                         {"weighted_norm", step.weighted_norm},
                         {"threshold", step.threshold},
                         {"satisfied", step.satisfied}});
        scales.push_back(step.scale);
        excess.push_back(step.weighted_norm / step.threshold);
    }
    out.add_plot("threshold_ratio", scales, excess, "R", "||u0/h_R|| / threshold", "semilogx");

    json summary = {{"p", result.p},
                    {"scale", result.scale},
                    {"lifespan_bound", json_real(result.lifespan_bound)},
                    {"kappa_unit", result.kappa_unit},
                    {"mass_norm", result.mass_norm},
                    {"analytic_estimate", result.analytic_estimate},
                    {"estimate_ratio", result.scale / result.analytic_estimate},
                    {"trace", trace},
                    {"stability", stability_json(result.stability)},
                    {"follow_up", nullptr}};
    std::string line = "threshold met at R = " + fmt(result.scale) + " (estimate " + fmt(result.analytic_estimate) +
                       "), lifespan bound " + fmt(result.lifespan_bound);
    if (t.follow_up) {
        const auto cfg = subcritical_run_config(result, s.profile, s.sim, t.slack);
        const auto run = simulate(cfg, {WeightSpec{t.search.weight_exponent, result.scale}});
        json follow = report_json(run.report);
        follow["t_max"] = cfg.t_max;
        follow["within_bound"] = run.report.blew_up;
        summary["follow_up"] = follow;
        out.add_series("timeseries", run.series);
        line += "; " + describe(run.report);
    }
    return {summary, line};
}

Outcome cmd_bounds(const Settings& s, OutputSet& out) {
    SimConfig cfg = s.sim;
    const auto& b = s.bounds;
    double amplitude_factor = 1.0;
    if (b.threshold_multiple > 0.0) {
        amplitude_factor = b.threshold_multiple * threshold_amplitude(s.profile, cfg.grid, b.weight, cfg.p,
                                                                      s.experiment.seed);
        cfg.initial = scale_profile(s.profile, amplitude_factor);
    }
    const auto report = bounds_consistency(cfg, b.weight, b.checks, s.experiment);

    std::vector<double> bound_t;
    std::vector<double> bound_v;
    std::vector<double> norm_v;
    const auto& q = weighted_momentum(report.series, b.weight);
    for (std::size_t i = 0; i < report.series.size(); ++i) {
        const double t = report.series.times[i];
        if (!(lower_bound_bracket(report.params, t) > 0.0)) break;
        bound_t.push_back(t);
        bound_v.push_back(weighted_norm_lower_bound(report.params, t, b.checks.variant));
        norm_v.push_back(std::sqrt(q[i]));
    }
    out.add_series("timeseries", report.series);
    out.add_plot("weighted_norm", bound_t, norm_v, "t", "||u/h||_2", "semilogy");
    out.add_plot("lower_bound", bound_t, bound_v, "t", "lower bound", "semilogy");
    out.add_plot("inequality_margin", report.inequality.times, report.inequality.margins, "t", "normalised margin");

    json summary = {{"weight", b.weight.label()},
                    {"variant", to_string(b.checks.variant)},
                    {"amplitude_factor", amplitude_factor},
                    {"params", params_json(report.params)},
                    {"kappa_estimate", report.kappa_estimate},
                    {"threshold", report.threshold},
                    {"threshold_margin", report.threshold_margin},
                    {"lifespan_bound", json_real(report.lifespan_bound)},
                    {"blowup", report_json(report.blowup)},
                    {"lifespan_ok", report.lifespan_ok},
                    {"lower_bound", margin_json(report.lower_bound)},
                    {"lower_bound_ok", report.lower_bound_ok},
                    {"inequality", margin_json(report.inequality)},
                    {"inequality_ok", report.inequality_ok},
                    {"passed", report.passed()},
                    {"stability", stability_json(report.stability)}};
    return {summary, std::string(report.passed() ? "bounds consistent" : "bounds INCONSISTENT") + ": " +
                         describe(report.blowup) + ", lifespan bound " + fmt(report.lifespan_bound)};
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

int execute(const std::string& command, Config& config, const std::string& out_dir_flag, std::ostream& out) {
    const auto started = utc_now();
    Settings s = read_settings(config);
    if (!out_dir_flag.empty()) {
        s.out_dir = out_dir_flag;
    } else if (const char* env = std::getenv(kOutDirVariable); env && *env) {
        s.out_dir = env;
    }

    OutputSet files(s.out_dir, command);
    Outcome outcome;
    if (command == "simulate") outcome = cmd_simulate(s, files);
    else if (command == "sweep") outcome = cmd_sweep(s, files);
    else if (command == "ode") outcome = cmd_ode(s, files);
    else if (command == "commutator") outcome = cmd_commutator(s, files);
    else if (command == "kernel") outcome = cmd_kernel(s, files);
    else if (command == "threshold") outcome = cmd_threshold(s, files);
    else if (command == "bounds") outcome = cmd_bounds(s, files);

    outcome.summary["command"] = command;
    files.add_json("summary", outcome.summary);
    json manifest = {{"command", command},
                     {"version", FGL_VERSION},
                     {"seed", s.experiment.seed},
                     {"workers", s.experiment.workers},
                     {"config", config.resolved()},
                     {"timestamps", {{"started", started}, {"finished", utc_now()}}}};
    files.write(manifest);
    out << command << ": " << outcome.line << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blow-up experiments for the fractional Ginzburg-Landau equation", "fgl"};
    app.require_subcommand(1, 1);
    std::string config_path;
    long seed = -1;
    long workers = -1;
    std::string out_dir;
    for (const char* name : kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->allow_extras();
        sub->add_option("--config", config_path, "INI-style config file");
        sub->add_option("--seed", seed, "seed for eigenvalue start vectors");
        sub->add_option("--workers", workers, "worker threads for sweeps");
        sub->add_option("--out-dir", out_dir, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    try {
        Config config = config_path.empty() ? Config{} : Config::load(config_path);
        // Remaining tokens are --section.key value or --section.key=value.
        const auto extras = sub->remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            const auto& token = extras[i];
            if (token.rfind("--", 0) != 0 || token.size() <= 2)
                throw ConfigError("unexpected argument '" + token + "'");
            auto key = token.substr(2);
            std::string value;
            if (const auto eq = key.find('='); eq != std::string::npos) {
                value = key.substr(eq + 1);
                key.erase(eq);
            } else {
                if (i + 1 >= extras.size()) throw ConfigError("override '" + token + "' has no value");
                value = extras[++i];
            }
            config.set(key, value);
        }
        if (seed >= 0) config.set("run.seed", std::to_string(seed));
        if (workers >= 0) config.set("run.workers", std::to_string(workers));
        return execute(command, config, out_dir, out);
    } catch (const ConfigError& e) {
        err << "fgl " << command << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "fgl " << command << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
        return e.numerical() ? kExitNumerical : kExitUsage;
    } catch (const std::exception& e) {
        err << "fgl " << command << ": " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace fgl::cli
