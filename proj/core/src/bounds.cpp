#include "fgl/bounds.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>

#include "fgl/error.hpp"

namespace fgl {

namespace {
constexpr double kSmallKappa = 1e-10;

double prefactor_rate(BoundVariant v) { return v == BoundVariant::paper ? 2.0 : 1.0; }
}  // namespace

void BoundParams::validate() const {
    if (!std::isfinite(p) || !(p > 1.0)) throw Error(ErrorKind::invalid_argument, "bound needs p > 1");
    if (!std::isfinite(kappa) || kappa < 0.0)
        throw Error(ErrorKind::invalid_argument, "commutator norm must be finite and nonnegative");
    if (!std::isfinite(inv_h_norm) || !(inv_h_norm > 0.0))
        throw Error(ErrorKind::invalid_argument, "||1/h||_2 must be positive and finite");
    if (!std::isfinite(initial_weighted_norm) || !(initial_weighted_norm > 0.0))
        throw Error(ErrorKind::invalid_argument, "||u0/h||_2 must be positive and finite");
}

const char* to_string(BoundVariant v) noexcept {
    return v == BoundVariant::paper ? "paper" : "sharp";
}

BoundVariant parse_bound_variant(const char* name) {
    if (std::strcmp(name, "paper") == 0) return BoundVariant::paper;
    if (std::strcmp(name, "sharp") == 0) return BoundVariant::sharp;
    throw Error(ErrorKind::invalid_argument, std::string("unknown bound variant '") + name + "'");
}

double blowup_threshold(const BoundParams& b) {
    if (!std::isfinite(b.p) || !(b.p > 1.0)) throw Error(ErrorKind::invalid_argument, "bound needs p > 1");
    if (!(b.kappa >= 0.0) || !(b.inv_h_norm > 0.0))
        throw Error(ErrorKind::invalid_argument, "threshold needs kappa >= 0 and ||1/h||_2 > 0");
    return std::pow(b.kappa, 1.0 / (b.p - 1.0)) * b.inv_h_norm;
}

double lower_bound_bracket(const BoundParams& b, double t) {
    const double pm1 = b.p - 1.0;
    const double head = std::pow(b.initial_weighted_norm, -pm1);
    const double inv_h_term = std::pow(b.inv_h_norm, -pm1);
    if (b.kappa < kSmallKappa) return head - inv_h_term * pm1 * t;
    return head + inv_h_term * std::expm1(-b.kappa * pm1 * t) / b.kappa;
}

double weighted_norm_lower_bound(const BoundParams& b, double t, BoundVariant variant) {
    b.validate();
    if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "bound needs t >= 0");
    // the bracket reduces to a^{-(p-1)}; skip the pow round trip
    if (t == 0.0) return b.initial_weighted_norm;
    const double bracket = lower_bound_bracket(b, t);
    if (!(bracket > 0.0)) {
        std::ostringstream os;
        os << "weighted-norm lower bound diverged before t = " << t;
        throw Error(ErrorKind::blowup_exceeded, os.str());
    }
    return std::exp(-prefactor_rate(variant) * b.kappa * t) * std::pow(bracket, -1.0 / (b.p - 1.0));
}

LifespanBound lifespan_upper_bound(const BoundParams& b, BoundVariant variant) {
    b.validate();
    const double pm1 = b.p - 1.0;
    const double x = std::pow(b.inv_h_norm, pm1) * std::pow(b.initial_weighted_norm, -pm1);
    const double arg = b.kappa * x;
    if (arg >= 1.0) return {std::numeric_limits<double>::infinity(), false};
    const double factor = prefactor_rate(variant) / pm1;
    if (b.kappa < kSmallKappa) return {factor * x, true};
    return {-factor * std::log1p(-arg) / b.kappa, true};
}

}  // namespace fgl
