#pragma once

// High-accuracy reference integrals on the real line (tanh-sinh / sinh-sinh),
// independent of the grid rectangle rule used by the library.

#include <cmath>
#include <limits>

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

template <class F>
double integrate_line(F f) {
    boost::math::quadrature::sinh_sinh<double> rule;
    return rule.integrate(f, 1e-14);
}

template <class F>
double integrate_interval(F f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate(f, a, b, 1e-14);
}

}  // namespace oracle
