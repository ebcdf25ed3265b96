#include "fgl/ode.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "fgl/error.hpp"

namespace fgl {

namespace odeint = boost::numeric::odeint;

void OdeParams::validate() const {
    auto bad = [](double v) { return !std::isfinite(v) || !(v > 0.0); };
    if (bad(c1) || bad(c2) || bad(f0)) {
        throw Error(ErrorKind::invalid_argument, "comparison ODE needs C1, C2, f(0) > 0");
    }
    if (!std::isfinite(q) || !(q > 1.0)) {
        throw Error(ErrorKind::invalid_argument, "comparison ODE needs q > 1");
    }
}

double OdeParams::blowup_level() const {
    return std::pow(c1 / c2, 1.0 / (q - 1.0));
}

double blowup_time(const OdeParams& params) {
    params.validate();
    // Compare in the f^{-(q-1)} variable to avoid a root.
    const double ratio = (params.c1 / params.c2) * std::pow(params.f0, -(params.q - 1.0));
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-ratio) / (params.c1 * (params.q - 1.0));
}

double closed_form_eval(const OdeParams& params, double t) {
    params.validate();
    if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "closed form needs t >= 0");
    const double qm1 = params.q - 1.0;
    const double bracket =
        std::pow(params.f0, -qm1) + (params.c2 / params.c1) * std::expm1(-params.c1 * qm1 * t);
    if (!(bracket > 0.0) || t >= blowup_time(params)) {
        std::ostringstream os;
        os << "t = " << t << " is at or past the blow-up time " << blowup_time(params);
        throw Error(ErrorKind::blowup_exceeded, os.str());
    }
    return std::exp(-params.c1 * t) * std::pow(bracket, -1.0 / qm1);
}

OdeSolution::OdeSolution(OdeParams params) : params_(params), blowup_time_(fgl::blowup_time(params)) {}

bool OdeSolution::blows_up() const noexcept { return std::isfinite(blowup_time_); }

namespace {

using State = std::array<double, 1>;

struct Bernoulli {
    OdeParams p;
    void operator()(const State& x, State& dxdt, double /*t*/) const {
        dxdt[0] = -p.c1 * x[0] + p.c2 * std::pow(x[0], p.q);
    }
};

auto make_stepper(double tol) {
    return odeint::make_dense_output(tol * 1e-4, tol, odeint::runge_kutta_dopri5<State>());
}

double initial_step(const OdeParams& p) {
    const double rate = p.c1 + p.c2 * std::pow(p.f0, p.q - 1.0);
    return 1e-3 / rate;
}

void validate_options(const OracleOptions& options) {
    if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "oracle tolerance must be positive");
    if (!(options.divergence_level > 0.0))
        throw Error(ErrorKind::invalid_argument, "divergence level must be positive");
}

}  // namespace

OdeTrajectory numeric_oracle(const OdeParams& params, double t_end, const OracleOptions& options) {
    params.validate();
    validate_options(options);
    if (!(t_end > 0.0)) throw Error(ErrorKind::invalid_argument, "t_end must be positive");

    const Bernoulli rhs{params};
    auto stepper = make_stepper(options.tol);
    stepper.initialize(State{params.f0}, 0.0, std::min(initial_step(params), t_end));

    OdeTrajectory out;
    out.t.push_back(0.0);
    out.f.push_back(params.f0);
    long steps = 0;
    while (stepper.current_time() < t_end) {
        if (++steps > options.max_steps) throw Error(ErrorKind::step_underflow, "ODE oracle exceeded its step budget");
        const double remaining = t_end - stepper.current_time();
        if (stepper.current_time_step() > remaining) {
            stepper.initialize(stepper.current_state(), stepper.current_time(), remaining);
        }
        stepper.do_step(rhs);
        const double t = stepper.current_time();
        const double f = stepper.current_state()[0];
        if (!std::isfinite(f) || f > options.divergence_level) {
            std::ostringstream os;
            os << "ODE solution diverged at t = " << t << " before t_end = " << t_end;
            throw Error(ErrorKind::step_underflow, os.str());
        }
        if (stepper.current_time_step() < 1e-15 * std::max(1.0, t)) {
            throw Error(ErrorKind::step_underflow, "ODE oracle step size underflow");
        }
        out.t.push_back(t);
        out.f.push_back(f);
    }
    return out;
}

OdeTrajectory numeric_divergence(const OdeParams& params, double t_limit, const OracleOptions& options) {
    params.validate();
    validate_options(options);
    if (!(t_limit > 0.0)) throw Error(ErrorKind::invalid_argument, "t_limit must be positive");

    const Bernoulli rhs{params};
    auto stepper = make_stepper(options.tol);
    stepper.initialize(State{params.f0}, 0.0, initial_step(params));

    OdeTrajectory out;
    out.t.push_back(0.0);
    out.f.push_back(params.f0);
    for (long steps = 0; steps < options.max_steps; ++steps) {
        stepper.do_step(rhs);
        const double t = stepper.current_time();
        const double f = stepper.current_state()[0];
        out.t.push_back(t);
        out.f.push_back(f);
        if (!std::isfinite(f) || f > options.divergence_level) {
            double lo = stepper.previous_time();
            double hi = t;
            State x{};
            while (hi - lo > options.bisection_tol * hi) {
                const double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, x);
                if (std::isfinite(x[0]) && x[0] <= options.divergence_level) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.divergence_time = hi;
            return out;
        }
        if (t >= t_limit) return out;
    }
    throw Error(ErrorKind::step_underflow, "ODE oracle exceeded its step budget in divergence mode");
}

}  // namespace fgl
