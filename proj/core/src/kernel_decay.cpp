#include "fgl/kernel_decay.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "fgl/error.hpp"

namespace fgl {

namespace {

double smooth_step_seed(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double bump_eval(double rho) {
    if (!(rho >= 0.0)) throw Error(ErrorKind::invalid_argument, "bump_eval needs rho >= 0");
    if (rho <= 1.0) return 1.0;
    if (rho >= 2.0) return 0.0;
    const double a = smooth_step_seed(2.0 - rho);
    const double b = smooth_step_seed(rho - 1.0);
    return a / (a + b);
}

std::vector<std::complex<double>> kernel_transform(const std::vector<double>& x, const KernelQuadrature& quad) {
    if (quad.panels_per_unit < 1) throw Error(ErrorKind::invalid_argument, "need at least one panel per unit");
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& nodes = rule::abscissa();
    const auto& weights = rule::weights();

    // Composite rule on [-2, 2]; panel edges include -1, 0, 1 where the
    // integrand loses smoothness (the |xi| kink at 0).
    const int panels = 4 * quad.panels_per_unit;
    const double half = 2.0 / panels;
    std::vector<double> xi;
    std::vector<double> wt;
    xi.reserve(static_cast<std::size_t>(panels) * 20);
    wt.reserve(xi.capacity());
    for (int p = 0; p < panels; ++p) {
        const double mid = -2.0 + (2 * p + 1) * half;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            for (double sign : {-1.0, 1.0}) {
                const double s = mid + sign * half * nodes[k];
                xi.push_back(s);
                wt.push_back(half * weights[k] * bump_eval(std::abs(s)) * std::abs(s));
            }
        }
    }

    std::vector<std::complex<double>> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        long double re = 0.0L;
        long double im = 0.0L;
        for (std::size_t j = 0; j < xi.size(); ++j) {
            const double phase = x[i] * xi[j];
            re += static_cast<long double>(wt[j]) * std::cos(phase);
            im += static_cast<long double>(wt[j]) * std::sin(phase);
        }
        g[i] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return g;
}

std::vector<double> kernel_values(const std::vector<double>& x, const KernelQuadrature& quad) {
    const auto g = kernel_transform(x, quad);
    std::vector<double> out(g.size());
    std::transform(g.begin(), g.end(), out.begin(), [](const auto& z) { return z.real(); });
    return out;
}

TailFit fit_tail_decay(const std::vector<double>& x, const std::vector<double>& g, double x_lo, double x_hi,
                       int bins) {
    if (x.size() != g.size()) throw Error(ErrorKind::invalid_argument, "fit_tail_decay: x and g differ in length");
    if (bins < 8) throw Error(ErrorKind::invalid_argument, "fit_tail_decay: window needs at least 8 bins");
    if (!(x_lo > 0.0) || !(x_hi > x_lo)) throw Error(ErrorKind::invalid_argument, "fit_tail_decay: need 0 < x_lo < x_hi");

    const double log_lo = std::log(x_lo);
    const double step = (std::log(x_hi) - log_lo) / bins;
    std::vector<double> best(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> where(static_cast<std::size_t>(bins), 0.0);
    TailFit fit;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ax = std::abs(x[i]);
        if (ax < x_lo || ax > x_hi) continue;
        const auto b = std::min<std::size_t>(static_cast<std::size_t>((std::log(ax) - log_lo) / step),
                                             static_cast<std::size_t>(bins) - 1);
        const double mag = std::abs(g[i]);
        if (mag > best[b]) {
            best[b] = mag;
            where[b] = ax;
        }
        fit.constant = std::max(fit.constant, mag * (1.0 + ax * ax));
    }

    // Merging an empty bin into the next one is the same as dropping it: the
    // neighbour's maximum already covers the enlarged range.
    for (std::size_t b = 0; b < best.size(); ++b) {
        if (best[b] > 0.0) {
            fit.bin_x.push_back(where[b]);
            fit.bin_max.push_back(best[b]);
        }
    }
    const std::size_t n = fit.bin_x.size();
    if (n < 3) throw Error(ErrorKind::invalid_argument, "fit_tail_decay: fewer than 3 usable bins in the window");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(fit.bin_x[i]);
        const double ly = std::log(fit.bin_max[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    fit.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(fit.bin_max[i]) - fit.intercept - fit.slope * std::log(fit.bin_x[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / dn);
    return fit;
}

}  // namespace fgl
