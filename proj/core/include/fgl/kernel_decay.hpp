#pragma once

#include <complex>
#include <vector>

namespace fgl {

/// Smooth radial cutoff: 1 on [0, 1], 0 on [2, inf), monotone in between,
/// built from psi(t) = exp(-1/t):
///
///   phi(rho) = psi(2 - rho) / (psi(2 - rho) + psi(rho - 1)).
///
/// Throws Error(invalid_argument) for rho < 0 or NaN.
double bump_eval(double rho);

struct KernelQuadrature {
    /// Gauss-Legendre panels per unit length of [-2, 2]; 20 nodes each.
    int panels_per_unit = 125;

    int node_count() const noexcept { return 4 * panels_per_unit * 20; }
};

/// g(x) = int_{-2}^{2} phi(|xi|) |xi| e^{i x xi} d xi for each sample.
/// Returns the complex quadrature; the imaginary part only carries round-off.
std::vector<std::complex<double>> kernel_transform(const std::vector<double>& x,
                                                   const KernelQuadrature& quad = {});

/// Real part of kernel_transform.
std::vector<double> kernel_values(const std::vector<double>& x, const KernelQuadrature& quad = {});

struct TailFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// max over the window of |g(x)| <x>^2.
    double constant = 0.0;
    /// RMS residual of the log-log fit.
    double residual = 0.0;
    /// Bin maxima used by the fit (after merging empty bins).
    std::vector<double> bin_x;
    std::vector<double> bin_max;
};

/// Least-squares fit of log|g| against log|x| on per-bin maxima over
/// logarithmic bins of [x_lo, x_hi]. Bins holding no sample or only zeros are
/// merged into the next bin.
///
/// Throws Error(invalid_argument) for bins < 8, an inverted window, or fewer
/// than 3 usable bins.
TailFit fit_tail_decay(const std::vector<double>& x, const std::vector<double>& g, double x_lo, double x_hi,
                       int bins = 8);

}  // namespace fgl
