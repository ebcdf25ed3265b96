#include "fgl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgl/error.hpp"

namespace fgl {

namespace {

void finalize(MarginReport& r, double tol) {
    r.tolerance = tol;
    r.min_margin = std::numeric_limits<double>::infinity();
    for (double m : r.margins)
        if (std::isfinite(m)) r.min_margin = std::min(r.min_margin, m);
    if (r.margins.empty()) r.min_margin = 0.0;
    r.violated = r.min_margin < -tol;
}

void require_samples(const TimeSeries& series, std::size_t n, const char* where) {
    if (series.size() < n) {
        throw Error(ErrorKind::invalid_argument,
                    std::string(where) + ": needs at least " + std::to_string(n) + " samples");
    }
}

}  // namespace

const std::vector<double>& weighted_momentum(const TimeSeries& series, const WeightSpec& w) {
    return series.momentum[series.weight_index(w)];
}

std::vector<double> centred_derivative(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1];
    }
    return d;
}

MarginReport check_weighted_lower_bound(const TimeSeries& series, const WeightSpec& w, const BoundParams& b,
                                        BoundVariant variant, double tol) {
    b.validate();
    const auto& q = weighted_momentum(series, w);
    MarginReport r;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (!(lower_bound_bracket(b, t) > 0.0)) {
            r.certified_from = t;
            break;
        }
        const double bound = weighted_norm_lower_bound(b, t, variant);
        r.times.push_back(t);
        r.margins.push_back((std::sqrt(q[i]) - bound) / bound);
    }
    finalize(r, tol);
    return r;
}

MomentumConstants momentum_constants(const BoundParams& b) {
    b.validate();
    return {2.0 * std::pow(b.inv_h_norm, -(b.p - 1.0)), 2.0 * b.kappa};
}

MarginReport check_momentum_inequality(const TimeSeries& series, const WeightSpec& w, double c0, double c1,
                                       double tol) {
    require_samples(series, 3, "check_momentum_inequality");
    if (!(c0 >= 0.0) || !(c1 >= 0.0)) throw Error(ErrorKind::invalid_argument, "inequality constants must be >= 0");
    const auto& q = weighted_momentum(series, w);
    const auto dq = centred_derivative(series.times, q);
    const double power = 0.5 * (series.p + 1.0);
    MarginReport r;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double growth = c0 * std::pow(q[i], power);
        const double loss = c1 * q[i];
        const double scale = growth + loss;
        r.times.push_back(series.times[i]);
        r.margins.push_back(scale > 0.0 ? (dq[i] - growth + loss) / scale : dq[i]);
    }
    finalize(r, tol);
    return r;
}

H1Growth h1_series(const TimeSeries& series, double window_sup_factor) {
    require_samples(series, 3, "h1_series");
    H1Growth g;
    g.times = series.times;
    g.h1 = series.h1;
    const double pm1 = series.p - 1.0;
    const double cap = window_sup_factor * series.sup.front();
    std::size_t n = 0;
    while (n < series.size() && series.sup[n] <= cap) ++n;
    g.window = n;
    if (n < 3) throw Error(ErrorKind::invalid_argument, "h1_series: degenerate window (< 3 samples)");

    const double head = std::pow(series.h1.front(), -pm1);
    double num = 0.0;
    double den = 0.0;
    double envelope = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double y = head - std::pow(series.h1[i], -pm1);
        const double tau = 0.5 * pm1 * series.times[i];
        num += y * tau;
        den += tau * tau;
        envelope = std::max(envelope, y / tau);
    }
    g.c_fit = den > 0.0 ? num / den : 0.0;
    g.c_envelope = envelope;
    g.implied_lifespan = g.c_fit > 0.0 ? 2.0 / (g.c_fit * pm1 * std::pow(series.h1.front(), pm1))
                                       : std::numeric_limits<double>::infinity();
    return g;
}

MassIdentityReport mass_identity_residual(const TimeSeries& series, double max_sup, double tol) {
    require_samples(series, 3, "mass_identity_residual");
    const auto dm = centred_derivative(series.times, series.mass);
    MassIdentityReport out;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (series.sup[i] > max_sup) break;
        const double lp = series.lp1[i];
        const double scale = 1.0 + lp;
        out.factor_one.times.push_back(series.times[i]);
        out.factor_two.times.push_back(series.times[i]);
        out.factor_one.margins.push_back((dm[i] - lp) / scale);
        out.factor_two.margins.push_back((dm[i] - 2.0 * lp) / scale);
    }
    if (out.factor_two.margins.empty())
        throw Error(ErrorKind::invalid_argument, "mass_identity_residual: no interior samples below max_sup");
    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    out.max_abs_factor_one = max_abs(out.factor_one.margins);
    out.max_abs_factor_two = max_abs(out.factor_two.margins);
    out.best_factor = out.max_abs_factor_two <= out.max_abs_factor_one ? 2 : 1;
    // A residual track is a two-sided check: violated when |residual| > tol.
    for (auto* r : {&out.factor_one, &out.factor_two}) {
        finalize(*r, tol);
        r->violated = max_abs(r->margins) > tol;
    }
    return out;
}

}  // namespace fgl
